//! Maximum-likelihood fitting as divergence minimization.
//!
//! For data with empirical distribution `p̂`, the mean log-likelihood of a
//! model `p_θ` decomposes as `−H(p̂) − d(p̂, p_θ)`, so maximizing one and
//! minimizing the other select the same `θ`. [`fit`] runs either objective.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{kl_divergence, ExtendedReal};
use crate::scalar::Scalar;
use crate::simplex::{empirical_from_samples, Alphabet, Distribution, NormalizationPolicy};

/// A finite-dimensional family `θ ↦ p_θ` over a fixed alphabet.
pub trait ParametricFamily<T: Scalar>: Send + Sync {
    fn name(&self) -> &str;

    fn alphabet(&self) -> &Alphabet;

    fn parameter_dim(&self) -> usize;

    /// Closed bounds per coordinate.
    fn parameter_box(&self) -> Vec<(T, T)>;

    /// `p_θ` for `θ` inside the box.
    fn evaluate(&self, theta: &[T]) -> Result<Distribution<T>>;

    /// The maximizer in closed form, when the family has one.
    fn closed_form(&self, _p_hat: &Distribution<T>) -> Option<Vec<T>> {
        None
    }

    /// `∂/∂θ log p_θ(x)` for every symbol `x`, for one-parameter families
    /// that can supply it. Lets the line search finish on the sign of the
    /// slope once objective values no longer resolve.
    fn log_density_derivative(&self, _theta: T) -> Option<Vec<T>> {
        None
    }

    fn check_box(&self, theta: &[T]) -> Result<()> {
        let bounds = self.parameter_box();
        if theta.len() != bounds.len() {
            return Err(Error::LengthMismatch {
                expected: bounds.len(),
                found: theta.len(),
            });
        }
        for (index, (&v, &(lo, hi))) in theta.iter().zip(&bounds).enumerate() {
            if !(v >= lo && v <= hi) {
                return Err(Error::OutOfBox {
                    index,
                    value: v.as_f64(),
                    lower: lo.as_f64(),
                    upper: hi.as_f64(),
                });
            }
        }
        Ok(())
    }
}

/// Every distribution on the alphabet. `θ` is a nonnegative weight vector
/// in `[0, 1]^m`, normalized on evaluation.
#[derive(Debug, Clone)]
pub struct Categorical {
    alphabet: Alphabet,
}

impl Categorical {
    pub fn new(alphabet: Alphabet) -> Self {
        Self { alphabet }
    }
}

impl<T: Scalar> ParametricFamily<T> for Categorical {
    fn name(&self) -> &str {
        "categorical"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn parameter_dim(&self) -> usize {
        self.alphabet.len()
    }

    fn parameter_box(&self) -> Vec<(T, T)> {
        vec![(T::zero(), T::one()); self.alphabet.len()]
    }

    fn evaluate(&self, theta: &[T]) -> Result<Distribution<T>> {
        self.check_box(theta)?;
        Distribution::new(
            self.alphabet.clone(),
            theta.to_vec(),
            NormalizationPolicy::Normalize,
        )
    }

    fn closed_form(&self, p_hat: &Distribution<T>) -> Option<Vec<T>> {
        Some(p_hat.probs().to_vec())
    }
}

/// `p_θ(i) ∝ exp(θ s_i)` with fixed scores `s_i`, `θ ∈ [−10, 10]`.
#[derive(Debug, Clone)]
pub struct ExponentialTilt<T> {
    alphabet: Alphabet,
    scores: Vec<T>,
}

impl<T: Scalar> ExponentialTilt<T> {
    pub const BOUND: f64 = 10.0;

    /// Scores `s_i = i`.
    pub fn indexed(alphabet: Alphabet) -> Self {
        let scores = (0..alphabet.len()).map(|i| T::lit(i as f64)).collect();
        Self { alphabet, scores }
    }

    pub fn with_scores(alphabet: Alphabet, scores: Vec<T>) -> Result<Self> {
        if scores.len() != alphabet.len() {
            return Err(Error::LengthMismatch {
                expected: alphabet.len(),
                found: scores.len(),
            });
        }
        Ok(Self { alphabet, scores })
    }

    pub fn scores(&self) -> &[T] {
        &self.scores
    }

    /// `log Σ_i exp(θ s_i)`, shifted by the largest exponent.
    pub fn log_partition(&self, theta: T) -> T {
        let top = self
            .scores
            .iter()
            .map(|&s| theta * s)
            .fold(T::neg_infinity(), T::max);
        top + self
            .scores
            .iter()
            .map(|&s| (theta * s - top).exp())
            .sum::<T>()
            .ln()
    }
}

impl<T: Scalar> ParametricFamily<T> for ExponentialTilt<T> {
    fn name(&self) -> &str {
        "tilt"
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn parameter_dim(&self) -> usize {
        1
    }

    fn parameter_box(&self) -> Vec<(T, T)> {
        vec![(-T::lit(Self::BOUND), T::lit(Self::BOUND))]
    }

    fn evaluate(&self, theta: &[T]) -> Result<Distribution<T>> {
        self.check_box(theta)?;
        let log_z = self.log_partition(theta[0]);
        let probs = self
            .scores
            .iter()
            .map(|&s| (theta[0] * s - log_z).exp())
            .collect();
        Distribution::new(self.alphabet.clone(), probs, NormalizationPolicy::Normalize)
    }

    /// `s_x − E_θ[s]`.
    fn log_density_derivative(&self, theta: T) -> Option<Vec<T>> {
        let p = self.evaluate(&[theta]).ok()?;
        let mean: T = p.probs().iter().zip(&self.scores).map(|(&p, &s)| p * s).sum();
        Some(self.scores.iter().map(|&s| s - mean).collect())
    }
}

/// The built-in families over `alphabet`: full categorical and the
/// exponential tilt with scores `0, 1, ..., m−1`.
pub fn builtin_families<T: Scalar>(alphabet: &Alphabet) -> Vec<Box<dyn ParametricFamily<T>>> {
    vec![
        Box::new(Categorical::new(alphabet.clone())),
        Box::new(ExponentialTilt::<T>::indexed(alphabet.clone())),
    ]
}

/// `(1/n) Σ_i log p_θ(x_i)`, summed observation by observation; `−∞` when
/// an observed symbol has probability zero.
pub fn mean_log_likelihood<T, S>(
    family: &dyn ParametricFamily<T>,
    theta: &[T],
    data: &[S],
) -> Result<ExtendedReal<T>>
where
    T: Scalar,
    S: AsRef<str>,
{
    if data.is_empty() {
        return Err(Error::EmptySample);
    }
    let model = family.evaluate(theta)?;
    let logs: Vec<T> = model.probs().iter().map(|p| p.ln()).collect();
    let mut total = T::zero();
    for x in data {
        let i = family.alphabet().index_of(x.as_ref())?;
        if model.at(i) <= T::zero() {
            return Ok(ExtendedReal::NegInfinity);
        }
        total = total + logs[i];
    }
    Ok(ExtendedReal::Finite(total / T::lit(data.len() as f64)))
}

/// `d(p̂, p_θ)`.
pub fn kl_objective<T: Scalar>(
    family: &dyn ParametricFamily<T>,
    theta: &[T],
    p_hat: &Distribution<T>,
) -> Result<ExtendedReal<T>> {
    let model = family.evaluate(theta)?;
    kl_divergence(p_hat, &model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMode {
    MaxLikelihood,
    MinDivergence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct FitResult<T> {
    pub family: String,
    pub mode: FitMode,
    pub theta_star: Vec<T>,
    /// Mean log-likelihood or divergence at `theta_star`, by mode.
    pub objective_value: ExtendedReal<T>,
    pub iterations: usize,
    pub converged: bool,
}

pub const DEFAULT_FIT_TOL: f64 = 1e-8;
const GRID_POINTS: usize = 64;
const MAX_ITERATIONS: usize = 500;

/// Fits `family` to `data` under `mode`.
///
/// Families with a closed form return it directly. One-dimensional
/// families are searched by golden section to width `tol`, inside a bracket
/// around the best point of a 64-point grid over the box; infeasible
/// parameters drop out at the grid stage. Ties go to the smallest `θ`.
pub fn fit<T, S>(
    family: &dyn ParametricFamily<T>,
    data: &[S],
    mode: FitMode,
    tol: T,
) -> Result<FitResult<T>>
where
    T: Scalar,
    S: AsRef<str>,
{
    let (p_hat, _) = empirical_from_samples::<T, _, _>(family.alphabet(), data.iter().map(AsRef::as_ref))?;
    let objective = |theta: &[T]| -> Result<ExtendedReal<T>> {
        match mode {
            FitMode::MaxLikelihood => mean_log_likelihood(family, theta, data),
            FitMode::MinDivergence => kl_objective(family, theta, &p_hat),
        }
    };
    // Both searches maximize: the likelihood, or the negated divergence.
    let score = |theta: T| -> T {
        match objective(&[theta]) {
            Ok(v) if mode == FitMode::MinDivergence => (-v).to_scalar(),
            Ok(v) => v.to_scalar(),
            Err(_) => T::neg_infinity(),
        }
    };

    if let Some(theta) = family.closed_form(&p_hat) {
        let objective_value = objective(&theta)?;
        return Ok(FitResult {
            family: family.name().to_string(),
            mode,
            theta_star: theta,
            objective_value,
            iterations: 0,
            converged: true,
        });
    }
    if family.parameter_dim() != 1 {
        return Err(Error::InvalidArgument(format!(
            "family {} has {} parameters; only one-dimensional search is supported",
            family.name(),
            family.parameter_dim()
        )));
    }
    if tol.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }

    let (lo, hi) = family.parameter_box()[0];
    let step = (hi - lo) / T::lit((GRID_POINTS - 1) as f64);
    let grid: Vec<T> = (0..GRID_POINTS)
        .map(|i| if i + 1 == GRID_POINTS { hi } else { lo + step * T::lit(i as f64) })
        .collect();
    let values: Vec<T> = grid.iter().map(|&t| score(t)).collect();
    let mut best = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_finite() && best.is_none_or(|b: usize| v > values[b]) {
            best = Some(i);
        }
    }
    let best = best.ok_or(Error::NoFiniteObjective)?;
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(GRID_POINTS - 1)];

    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = score(c);
    let mut fd = score(d);
    let mut iterations = 0;
    while b - a > tol && iterations < MAX_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = score(d);
        }
        iterations += 1;
    }
    let converged = b - a <= tol;
    let mut theta = ((a + b) / T::lit(2.0)).max(lo).min(hi);

    // Objective values flatten to round-off within about sqrt(eps) of the
    // optimum; the slope keeps its sign much closer in.
    let indices = data
        .iter()
        .map(|x| family.alphabet().index_of(x.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let slope = |t: T| -> Option<T> {
        let g = family.log_density_derivative(t)?;
        Some(match mode {
            FitMode::MaxLikelihood => indices.iter().map(|&i| g[i]).sum::<T>() / T::lit(indices.len() as f64),
            FitMode::MinDivergence => p_hat.probs().iter().zip(&g).map(|(&p, &d)| p * d).sum(),
        })
    };
    if converged && slope(theta).is_some() {
        let (refined, steps) = refine_by_slope(&slope, theta, lo, hi, tol);
        theta = refined;
        iterations += steps;
    }
    let objective_value = objective(&[theta])?;
    Ok(FitResult {
        family: family.name().to_string(),
        mode,
        theta_star: vec![theta],
        objective_value,
        iterations,
        converged,
    })
}

/// Bisects on the sign of a decreasing slope around `start`.
fn refine_by_slope<T: Scalar>(slope: &impl Fn(T) -> Option<T>, start: T, lo: T, hi: T, tol: T) -> (T, usize) {
    let up = |t: T| slope(t).is_some_and(|g| g > T::zero());
    let mut steps = 0;
    let mut h = tol;
    let mut l = start;
    while !up(l) && l > lo && steps < MAX_ITERATIONS {
        l = (l - h).max(lo);
        h = h * T::lit(2.0);
        steps += 1;
    }
    if !up(l) {
        return (lo, steps);
    }
    let mut h = tol;
    let mut r = start;
    while up(r) && r < hi && steps < MAX_ITERATIONS {
        r = (r + h).min(hi);
        h = h * T::lit(2.0);
        steps += 1;
    }
    if up(r) {
        return (hi, steps);
    }
    while steps < MAX_ITERATIONS {
        let mid = (l + r) / T::lit(2.0);
        if mid <= l || mid >= r {
            break;
        }
        if up(mid) {
            l = mid;
        } else {
            r = mid;
        }
        steps += 1;
    }
    ((l + r) / T::lit(2.0), steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::entropy;

    fn three() -> Alphabet {
        Alphabet::indexed(3).unwrap()
    }

    fn data(counts: &[usize]) -> Vec<String> {
        counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i.to_string(), c))
            .collect()
    }

    #[test]
    fn plug_in_likelihood_is_negative_entropy() {
        let fam = Categorical::new(three());
        let d = data(&[2, 5, 3]);
        let theta = [0.2f64, 0.5, 0.3];
        let ll = mean_log_likelihood(&fam, &theta, &d).unwrap().finite().unwrap();
        let p_hat = fam.evaluate(&theta).unwrap();
        assert!((ll + entropy(&p_hat)).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_observation() {
        let fam = Categorical::new(three());
        let ll = mean_log_likelihood(&fam, &[0.0, 0.5, 0.5], &data(&[1, 1, 1])).unwrap();
        assert_eq!(ll, ExtendedReal::NegInfinity);
    }

    #[test]
    fn uniform_tilt_likelihood() {
        let fam = ExponentialTilt::<f64>::indexed(three());
        let ll = mean_log_likelihood(&fam, &[0.0], &data(&[4, 4, 4])).unwrap();
        assert!((ll.finite().unwrap() + 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn box_and_label_errors() {
        let fam = ExponentialTilt::<f64>::indexed(three());
        assert!(matches!(
            mean_log_likelihood(&fam, &[11.0], &data(&[1, 0, 0])),
            Err(Error::OutOfBox { index: 0, .. })
        ));
        assert!(matches!(
            mean_log_likelihood(&fam, &[0.0], &["7"]),
            Err(Error::UnknownLabel(_))
        ));
        assert_eq!(
            mean_log_likelihood::<f64, &str>(&fam, &[0.0], &[]).unwrap_err(),
            Error::EmptySample
        );
    }

    #[test]
    fn divergence_objective_examples() {
        let fam = Categorical::new(Alphabet::suits());
        let p_hat = Distribution::new(Alphabet::suits(), vec![0.0, 0.0, 0.5, 0.5], NormalizationPolicy::Strict)
            .unwrap();
        let at_truth = kl_objective(&fam, p_hat.probs(), &p_hat).unwrap();
        assert_eq!(at_truth, ExtendedReal::Finite(0.0));
        let at_uniform = kl_objective(&fam, &[0.25; 4], &p_hat).unwrap();
        assert!((at_uniform.finite().unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn categorical_closed_form() {
        let fam = Categorical::new(Alphabet::suits());
        let d = ["hearts", "hearts", "diamonds", "hearts"];
        for mode in [FitMode::MaxLikelihood, FitMode::MinDivergence] {
            let r = fit(&fam, &d, mode, 1e-8).unwrap();
            assert_eq!(r.theta_star, vec![0.0, 0.0, 0.25, 0.75]);
            assert_eq!(r.iterations, 0);
            assert!(r.converged);
        }
    }

    #[test]
    fn symmetric_data_gives_zero_tilt() {
        let fam = ExponentialTilt::<f64>::indexed(three());
        let d = data(&[3, 4, 3]);
        for mode in [FitMode::MaxLikelihood, FitMode::MinDivergence] {
            let r = fit(&fam, &d, mode, 1e-8).unwrap();
            assert!(r.converged);
            assert!(r.theta_star[0].abs() < 1e-7, "{mode:?}: {:?}", r.theta_star);
        }
    }

    #[test]
    fn tilt_endpoints() {
        let fam = ExponentialTilt::<f64>::indexed(three());
        let p0 = fam.evaluate(&[0.0]).unwrap();
        assert!(p0.probs().iter().all(|&p| (p - 1.0 / 3.0).abs() < 1e-15));
        let p10 = fam.evaluate(&[10.0]).unwrap();
        assert!(p10.at(2) > 0.9999);
        for theta in [-10.0, -3.0, 0.0, 7.5, 10.0] {
            assert!(fam.log_partition(theta).is_finite());
        }
    }

    #[test]
    fn boundary_optimum() {
        // all mass on the top score pushes θ* to the upper edge of the box
        let fam = ExponentialTilt::<f64>::indexed(three());
        let r = fit(&fam, &data(&[0, 0, 5]), FitMode::MaxLikelihood, 1e-8).unwrap();
        assert!((r.theta_star[0] - 10.0).abs() < 1e-7);
    }

    /// One-parameter family that never charges label "0".
    struct NeverZero(Alphabet);

    impl ParametricFamily<f64> for NeverZero {
        fn name(&self) -> &str {
            "never-zero"
        }
        fn alphabet(&self) -> &Alphabet {
            &self.0
        }
        fn parameter_dim(&self) -> usize {
            1
        }
        fn parameter_box(&self) -> Vec<(f64, f64)> {
            vec![(0.0, 1.0)]
        }
        fn evaluate(&self, theta: &[f64]) -> Result<Distribution<f64>> {
            self.check_box(theta)?;
            Distribution::new(
                self.0.clone(),
                vec![0.0, theta[0], 1.0 - theta[0] + 1e-3],
                NormalizationPolicy::Normalize,
            )
        }
    }

    #[test]
    fn degenerate_family_has_no_finite_objective() {
        let fam = NeverZero(three());
        for mode in [FitMode::MaxLikelihood, FitMode::MinDivergence] {
            assert_eq!(
                fit(&fam, &["0", "1"], mode, 1e-8).unwrap_err(),
                Error::NoFiniteObjective
            );
        }
        // without the null symbol the same family is fittable
        assert!(fit(&fam, &["1", "2", "1"], FitMode::MaxLikelihood, 1e-8).unwrap().converged);
    }

    #[test]
    fn single_precision_fit() {
        let fam = ExponentialTilt::<f32>::indexed(three());
        let r = fit(&fam, &data(&[3, 4, 3]), FitMode::MinDivergence, 1e-5).unwrap();
        assert!(r.theta_star[0].abs() < 1e-4);
    }
}
