//! Divergence, the entropy family and mutual information.
//!
//! Every quantity is computed in natural-log units from log-space terms;
//! zero-probability terms are skipped before any logarithm is taken.
//! Use [`LogBase`] to express a result in bits.

use std::fmt;

use rand_distr::StandardNormal;
use rand::Rng;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sampling::seeded_rng;
use crate::scalar::Scalar;
use crate::simplex::{Distribution, JointDistribution, TripleJoint};

/// A real number or one of the two infinities.
///
/// Divergences and log-losses use `PosInfinity` for support violations;
/// log-probabilities use `NegInfinity` for impossible events. The
/// infinities never travel as floating-point values through arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal<T> {
    NegInfinity,
    Finite(T),
    PosInfinity,
}

impl<T: Scalar> ExtendedReal<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn finite(self) -> Option<T> {
        match self {
            Self::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Lossy view with IEEE infinities, for comparisons and display.
    pub fn to_scalar(self) -> T {
        match self {
            Self::NegInfinity => T::neg_infinity(),
            Self::Finite(v) => v,
            Self::PosInfinity => T::infinity(),
        }
    }

    pub fn map(self, f: impl FnOnce(T) -> T) -> Self {
        match self {
            Self::Finite(v) => Self::Finite(f(v)),
            other => other,
        }
    }

    /// Expresses a natural-log quantity in `base`.
    pub fn in_base(self, base: LogBase) -> Self {
        self.map(|v| base.from_nats(v))
    }

    pub fn cast<U: Scalar>(self) -> ExtendedReal<U> {
        match self {
            Self::NegInfinity => ExtendedReal::NegInfinity,
            Self::Finite(v) => ExtendedReal::Finite(U::lit(v.as_f64())),
            Self::PosInfinity => ExtendedReal::PosInfinity,
        }
    }
}

impl<T: Scalar> std::ops::Neg for ExtendedReal<T> {
    type Output = Self;

    fn neg(self) -> Self {
        match self {
            Self::NegInfinity => Self::PosInfinity,
            Self::Finite(v) => Self::Finite(-v),
            Self::PosInfinity => Self::NegInfinity,
        }
    }
}

impl<T: Scalar> fmt::Display for ExtendedReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInfinity => f.write_str("-inf"),
            Self::PosInfinity => f.write_str("+inf"),
            Self::Finite(v) => match f.precision() {
                Some(p) => write!(f, "{:.*}", p, v),
                None => write!(f, "{}", v),
            },
        }
    }
}

/// JSON has no infinities; they are written as the strings `"+inf"` and `"-inf"`.
impl<T: Scalar> Serialize for ExtendedReal<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::NegInfinity => serializer.serialize_str("-inf"),
            Self::PosInfinity => serializer.serialize_str("+inf"),
            Self::Finite(v) => v.serialize(serializer),
        }
    }
}

impl<'de, T: Scalar> Deserialize<'de> for ExtendedReal<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtVisitor<T>(std::marker::PhantomData<T>);

        impl<T: Scalar> Visitor<'_> for ExtVisitor<T> {
            type Value = ExtendedReal<T>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, \"+inf\" or \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(T::lit(v)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                match v {
                    "+inf" | "inf" => Ok(ExtendedReal::PosInfinity),
                    "-inf" => Ok(ExtendedReal::NegInfinity),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }

        deserializer.deserialize_any(ExtVisitor(std::marker::PhantomData))
    }
}

/// Unit in which information quantities are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Nats,
    Bits,
}

impl LogBase {
    pub fn from_nats<T: Scalar>(self, nats: T) -> T {
        match self {
            Self::Nats => nats,
            Self::Bits => nats / T::LN_2(),
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Self::Nats => "nats",
            Self::Bits => "bits",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.unit())
    }
}

/// `Σ p log(p/q)` over raw vectors; `q` need not be normalized.
pub(crate) fn kl_terms<T: Scalar>(p: &[T], q: &[T]) -> ExtendedReal<T> {
    let mut total = T::zero();
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= T::zero() {
            continue;
        }
        if qi <= T::zero() {
            return ExtendedReal::PosInfinity;
        }
        total = total + pi * (pi.ln() - qi.ln());
    }
    ExtendedReal::Finite(total)
}

fn entropy_terms<T: Scalar>(p: &[T]) -> T {
    p.iter()
        .filter(|&&v| v > T::zero())
        .map(|&v| -v * v.ln())
        .sum()
}

/// Kullback-Leibler divergence `d(p, q) = Σ p(x) log(p(x)/q(x))`.
///
/// `+∞` when `p` charges a symbol that `q` rules out.
pub fn kl_divergence<T: Scalar>(p: &Distribution<T>, q: &Distribution<T>) -> Result<ExtendedReal<T>> {
    p.alphabet().ensure_same(q.alphabet())?;
    Ok(kl_terms(p.probs(), q.probs()))
}

/// Shannon entropy `−Σ p log p`.
pub fn entropy<T: Scalar>(p: &Distribution<T>) -> T {
    entropy_terms(p.probs())
}

/// Entropy as `log m − d(p, u)`.
pub fn entropy_via_divergence<T: Scalar>(p: &Distribution<T>) -> T {
    let m = T::lit(p.len() as f64);
    let u = Distribution::uniform(p.alphabet().clone());
    let d = kl_terms(p.probs(), u.probs())
        .finite()
        .expect("divergence from the uniform is finite");
    m.ln() - d
}

/// Bregman divergence generated by the negative entropy,
/// `−[H(p) − H(q) − ⟨∇H(q), p − q⟩]` with `∇H(q) = −(log q + 1)`.
///
/// Defined only for strictly positive `q`.
pub fn bregman_divergence<T: Scalar>(p: &Distribution<T>, q: &Distribution<T>) -> Result<ExtendedReal<T>> {
    p.alphabet().ensure_same(q.alphabet())?;
    if let Some(index) = q.first_zero() {
        return Err(Error::BoundaryPoint { index });
    }
    let inner: T = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(&pi, &qi)| -(qi.ln() + T::one()) * (pi - qi))
        .sum();
    Ok(ExtendedReal::Finite(-(entropy(p) - entropy(q) - inner)))
}

/// `H(X, Y)`.
pub fn joint_entropy<T: Scalar>(j: &JointDistribution<T>) -> T {
    entropy_terms(j.probs())
}

/// `H(X | Y) = −Σ p(x, y) log p(x | y)`.
pub fn conditional_entropy<T: Scalar>(j: &JointDistribution<T>) -> T {
    let py = j.marginal_y();
    let mut total = T::zero();
    for x in 0..j.rows() {
        for (y, &pxy) in j.row(x).iter().enumerate() {
            if pxy > T::zero() {
                total = total - pxy * (pxy.ln() - py.at(y).ln());
            }
        }
    }
    total
}

/// `H(X | Y)` through the chain rule `H(X, Y) − H(Y)`.
pub fn conditional_entropy_by_chain<T: Scalar>(j: &JointDistribution<T>) -> T {
    joint_entropy(j) - entropy(&j.marginal_y())
}

/// Formulation used to compute mutual information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MiMethod {
    /// `H(X) − H(X | Y)`.
    Definition,
    /// `d(p_{X,Y}, p_X ⊗ p_Y)`.
    DivergenceFromProduct,
    /// `E_Y[d(p_{X|Y}, p_X)]`.
    ExpectedConditionalDivergence,
}

impl MiMethod {
    pub const ALL: [MiMethod; 3] = [
        MiMethod::Definition,
        MiMethod::DivergenceFromProduct,
        MiMethod::ExpectedConditionalDivergence,
    ];
}

/// Mutual information `I(X, Y)` by the chosen formulation.
pub fn mutual_information<T: Scalar>(j: &JointDistribution<T>, method: MiMethod) -> T {
    let value = match method {
        MiMethod::Definition => entropy(&j.marginal_x()) - conditional_entropy(j),
        MiMethod::DivergenceFromProduct => {
            let product = JointDistribution::product(&j.marginal_x(), &j.marginal_y());
            kl_terms(j.probs(), product.probs())
                .finite()
                .expect("joint support lies inside the product support")
        }
        MiMethod::ExpectedConditionalDivergence => {
            let px = j.marginal_x();
            let py = j.marginal_y();
            (0..j.cols())
                .filter(|&y| py.at(y) > T::zero())
                .map(|y| {
                    let slice = j.conditional_slice_at(y).expect("p_Y(y) > 0");
                    let d = kl_terms(slice.probs(), px.probs())
                        .finite()
                        .expect("conditional support lies inside the marginal support");
                    py.at(y) * d
                })
                .sum()
        }
    };
    // Round-off can leave independent joints a hair below zero.
    value.max(T::zero())
}

/// `I(X, Y | Z) = Σ_z p_Z(z) d(p_{X,Y|z}, p_{X|z} ⊗ p_{Y|z})`; null slices contribute nothing.
pub fn conditional_mutual_information<T: Scalar>(t: &TripleJoint<T>) -> T {
    let (_, _, r) = t.dims();
    (0..r)
        .filter_map(|z| t.slice_given_z(z))
        .map(|(pz, slice)| pz * mutual_information(&slice, MiMethod::DivergenceFromProduct))
        .sum()
}

/// Outcome of probing `q ↦ d(p, q)` around its minimizer `q = p`.
#[derive(Debug, Clone, Serialize)]
pub struct StationarityReport<T> {
    pub directions_checked: usize,
    /// Smallest `d(p, p + v)` over the probed tangent directions.
    pub min_perturbed_divergence: T,
    pub all_positive: bool,
    /// Central finite-difference gradient of `q ↦ d(p, q)` at `q = p`.
    pub gradient: Vec<T>,
    /// `max − min` of the gradient components; zero at a constrained stationary point.
    pub gradient_spread: T,
    /// Mean gradient component, the Lagrange multiplier (−1 in nats).
    pub multiplier: T,
}

/// Checks numerically that `q = p` is the strict constrained minimizer of
/// `d(p, ·)`: random simplex-tangent perturbations of length `step` all
/// increase the divergence, and the gradient is constant across
/// coordinates (parallel to the constraint normal).
pub fn gibbs_stationarity_check<T: Scalar>(
    p: &Distribution<T>,
    step: T,
    directions: usize,
    seed: u64,
) -> Result<StationarityReport<T>> {
    if let Some(index) = p.first_zero() {
        return Err(Error::BoundaryPoint { index });
    }
    let min_p = p.probs().iter().copied().fold(T::infinity(), T::min);
    if step.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) || step >= min_p {
        return Err(Error::InvalidArgument(format!(
            "step must lie in (0, {}) to stay inside the simplex",
            min_p
        )));
    }
    let m = p.len();
    let probs = p.probs();
    let mut rng = seeded_rng(seed);

    let mut min_div = T::infinity();
    let mut checked = 0;
    while checked < directions {
        let raw: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let mean = raw.iter().sum::<f64>() / m as f64;
        let centered: Vec<f64> = raw.iter().map(|v| v - mean).collect();
        let norm = centered.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let q: Vec<T> = probs
            .iter()
            .zip(&centered)
            .map(|(&pi, &v)| pi + step * T::lit(v / norm))
            .collect();
        let d = kl_terms(probs, &q).to_scalar();
        min_div = min_div.min(d);
        checked += 1;
    }

    let two_h = step + step;
    let gradient: Vec<T> = (0..m)
        .map(|i| {
            let mut up = probs.to_vec();
            let mut down = probs.to_vec();
            up[i] = up[i] + step;
            down[i] = down[i] - step;
            (kl_terms(probs, &up).to_scalar() - kl_terms(probs, &down).to_scalar()) / two_h
        })
        .collect();
    let hi = gradient.iter().copied().fold(T::neg_infinity(), T::max);
    let lo = gradient.iter().copied().fold(T::infinity(), T::min);
    let multiplier = gradient.iter().copied().sum::<T>() / T::lit(m as f64);

    Ok(StationarityReport {
        directions_checked: checked,
        min_perturbed_divergence: min_div,
        all_positive: min_div > T::zero(),
        gradient,
        gradient_spread: hi - lo,
        multiplier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{Alphabet, NormalizationPolicy};
    use std::f64::consts::LN_2;

    fn dist(w: &[f64]) -> Distribution<f64> {
        Distribution::new(
            Alphabet::indexed(w.len()).unwrap(),
            w.to_vec(),
            NormalizationPolicy::Strict,
        )
        .unwrap()
    }

    fn red_deck() -> Distribution<f64> {
        Distribution::new(Alphabet::suits(), vec![0.0, 0.0, 0.5, 0.5], NormalizationPolicy::Strict)
            .unwrap()
    }

    fn joint(rows: Vec<Vec<f64>>) -> JointDistribution<f64> {
        JointDistribution::new(
            Alphabet::indexed(rows.len()).unwrap(),
            Alphabet::indexed(rows[0].len()).unwrap(),
            rows,
            NormalizationPolicy::Strict,
        )
        .unwrap()
    }

    fn suit_color() -> JointDistribution<f64> {
        joint(vec![
            vec![0.25, 0.0],
            vec![0.25, 0.0],
            vec![0.0, 0.25],
            vec![0.0, 0.25],
        ])
    }

    #[test]
    fn red_deck_against_uniform_belief() {
        let d = kl_divergence(&red_deck(), &Distribution::uniform(Alphabet::suits())).unwrap();
        assert!((d.finite().unwrap() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn divergence_from_self_is_zero() {
        let p = dist(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(kl_divergence(&p, &p).unwrap(), ExtendedReal::Finite(0.0));
    }

    #[test]
    fn support_violation_is_infinite() {
        let d = kl_divergence(&dist(&[0.5, 0.5]), &dist(&[1.0, 0.0])).unwrap();
        assert_eq!(d, ExtendedReal::PosInfinity);
        // the reverse direction is finite: 0 log(0/q) = 0
        let r = kl_divergence(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5])).unwrap();
        assert!((r.finite().unwrap() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn two_term_divergence() {
        // oracle: ½ log(½/¼) + ½ log(½/¾)
        let oracle = 0.5 * (0.5f64 / 0.25).ln() + 0.5 * (0.5f64 / 0.75).ln();
        let d = kl_divergence(&dist(&[0.5, 0.5]), &dist(&[0.25, 0.75])).unwrap();
        assert!((d.finite().unwrap() - oracle).abs() < 1e-15);
        assert!((oracle - 0.1438).abs() < 1e-4);
    }

    #[test]
    fn divergence_alphabet_mismatch() {
        assert_eq!(
            kl_divergence(&dist(&[0.5, 0.5]), &dist(&[0.2, 0.3, 0.5])).unwrap_err(),
            Error::AlphabetMismatch
        );
    }

    #[test]
    fn entropy_examples() {
        let u4 = Distribution::<f64>::uniform(Alphabet::suits());
        assert!((entropy(&u4) - 2.0 * LN_2).abs() < 1e-15);
        assert_eq!(entropy(&dist(&[0.0, 1.0, 0.0])), 0.0);
        let oracle = -(0.5f64 * 0.5f64.ln() + 2.0 * 0.25 * 0.25f64.ln());
        assert!((entropy(&dist(&[0.5, 0.25, 0.25])) - oracle).abs() < 1e-15);
        assert!((oracle - 1.5 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn entropy_from_divergence() {
        for m in 1..=6 {
            let u = Distribution::<f64>::uniform(Alphabet::indexed(m).unwrap());
            assert!((entropy_via_divergence(&u) - (m as f64).ln()).abs() < 1e-12);
        }
        assert!(entropy_via_divergence(&dist(&[1.0, 0.0])).abs() < 1e-15);
    }

    #[test]
    fn bregman_matches_divergence() {
        let u = Distribution::uniform(Alphabet::suits());
        let b = bregman_divergence(&red_deck(), &u).unwrap();
        assert!((b.finite().unwrap() - LN_2).abs() < 1e-12);
        let p = dist(&[0.2, 0.8]);
        assert!(bregman_divergence(&p, &p).unwrap().finite().unwrap().abs() < 1e-15);
        assert_eq!(
            bregman_divergence(&p, &dist(&[1.0, 0.0])).unwrap_err(),
            Error::BoundaryPoint { index: 1 }
        );
    }

    #[test]
    fn card_game_ladder() {
        let j = suit_color();
        assert!((joint_entropy(&j) - 2.0 * LN_2).abs() < 1e-15);
        assert!((conditional_entropy(&j) - LN_2).abs() < 1e-15);
        assert!((conditional_entropy_by_chain(&j) - LN_2).abs() < 1e-15);
        for method in MiMethod::ALL {
            assert!((mutual_information(&j, method) - LN_2).abs() < 1e-15, "{method:?}");
        }
    }

    #[test]
    fn conditioning_extremes() {
        let px = dist(&[0.2, 0.3, 0.5]);
        let indep = JointDistribution::product(&px, &dist(&[0.6, 0.4]));
        assert!((conditional_entropy(&indep) - entropy(&px)).abs() < 1e-15);
        let diag = joint(vec![
            vec![0.2, 0.0, 0.0],
            vec![0.0, 0.3, 0.0],
            vec![0.0, 0.0, 0.5],
        ]);
        assert_eq!(conditional_entropy(&diag), 0.0);
        assert!((mutual_information(&diag, MiMethod::Definition) - entropy(&px)).abs() < 1e-15);
    }

    #[test]
    fn independent_suit_and_face_value() {
        let suits = Distribution::<f64>::uniform(Alphabet::suits());
        let faces = Distribution::uniform(Alphabet::indexed(13).unwrap());
        let j = JointDistribution::product(&suits, &faces);
        for method in MiMethod::ALL {
            assert!(mutual_information(&j, method) < 1e-15);
        }
    }

    #[test]
    fn copy_variable_has_log_m_information() {
        for m in 1..=5 {
            let rows = (0..m)
                .map(|i| (0..m).map(|j| if i == j { 1.0 / m as f64 } else { 0.0 }).collect())
                .collect();
            let j = joint(rows);
            for method in MiMethod::ALL {
                assert!((mutual_information(&j, method) - (m as f64).ln()).abs() < 1e-12);
            }
        }
    }

    fn xor_triple() -> TripleJoint<f64> {
        let mut probs = vec![vec![vec![0.0; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                probs[x][y][x ^ y] = 0.25;
            }
        }
        let b = Alphabet::indexed(2).unwrap();
        TripleJoint::new(b.clone(), b.clone(), b, probs, NormalizationPolicy::Strict).unwrap()
    }

    #[test]
    fn xor_conditioning_creates_information() {
        let t = xor_triple();
        assert!(mutual_information(&t.marginal_xy(), MiMethod::DivergenceFromProduct) < 1e-15);
        // enumeration oracle: each z-slice is a perfect copy or anti-copy of
        // a uniform bit, worth log 2; both slices have weight ½.
        assert!((conditional_mutual_information(&t) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn conditional_mi_vacuous_and_copy() {
        let b = Alphabet::indexed(2).unwrap();
        let jxy = joint(vec![vec![0.4, 0.1], vec![0.1, 0.4]]);
        let constant = crate::simplex::Channel::constant(b.clone(), b.clone(), "0").unwrap();
        let t = crate::simplex::extend_markov(&jxy, &constant).unwrap();
        let ixy = mutual_information(&jxy, MiMethod::Definition);
        assert!((conditional_mutual_information(&t) - ixy).abs() < 1e-15);
        let copy = crate::simplex::extend_markov(&jxy, &crate::simplex::Channel::identity(b)).unwrap();
        assert!(conditional_mutual_information(&copy) < 1e-15);
    }

    #[test]
    fn base_conversion() {
        let u = Distribution::<f64>::uniform(Alphabet::suits());
        let bits = LogBase::Bits.from_nats(entropy(&u));
        assert!((bits - 2.0).abs() < 1e-15);
        assert!((bits * LN_2 - entropy(&u)).abs() < 1e-12);
        assert_eq!(
            ExtendedReal::<f64>::PosInfinity.in_base(LogBase::Bits),
            ExtendedReal::PosInfinity
        );
    }

    #[test]
    fn extended_real_json() {
        let v: Vec<ExtendedReal<f64>> =
            vec![ExtendedReal::Finite(0.5), ExtendedReal::PosInfinity, ExtendedReal::NegInfinity];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[0.5,"+inf","-inf"]"#);
        let back: Vec<ExtendedReal<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(ExtendedReal::<f64>::NegInfinity < ExtendedReal::Finite(-1e300));
        assert!(ExtendedReal::Finite(1e300) < ExtendedReal::<f64>::PosInfinity);
    }

    #[test]
    fn stationarity_at_uniform() {
        let p = Distribution::<f64>::uniform(Alphabet::indexed(3).unwrap());
        let r = gibbs_stationarity_check(&p, 1e-3, 20, 0).unwrap();
        assert_eq!(r.directions_checked, 20);
        assert!(r.all_positive);
        assert!(r.gradient.iter().all(|g| (g + 1.0).abs() < 1e-4));
        assert!(r.gradient_spread < 1e-4);
    }

    #[test]
    fn stationarity_at_skewed_point() {
        let p = dist(&[0.7, 0.2, 0.1]);
        let r = gibbs_stationarity_check(&p, 1e-4, 20, 5).unwrap();
        assert!(r.all_positive);
        // finite-difference oracle: the exact partial derivative is −p_i/q_i = −1
        assert!((r.multiplier + 1.0).abs() < 1e-6);
        assert!(r.gradient_spread < 1e-4);
    }

    #[test]
    fn stationarity_needs_interior_point() {
        assert_eq!(
            gibbs_stationarity_check(&dist(&[0.0, 1.0]), 1e-3, 5, 0).unwrap_err(),
            Error::BoundaryPoint { index: 0 }
        );
        assert!(matches!(
            gibbs_stationarity_check(&dist(&[0.5, 0.5]), 0.6, 5, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn single_precision_agrees() {
        let p = red_deck().cast::<f32>();
        let u = Distribution::<f32>::uniform(Alphabet::suits());
        let d = kl_divergence(&p, &u).unwrap().finite().unwrap();
        assert!((d - std::f32::consts::LN_2).abs() < 1e-6);
    }
}
