//! Three-variable joints, the chain rule for mutual information, and the
//! data processing inequality.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{conditional_mutual_information, mutual_information, MiMethod};
use crate::sampling::{random_channel, random_joint, seeded_rng};
use crate::scalar::{tol, Scalar};
use crate::simplex::{extend_markov, Alphabet, Channel, JointDistribution, NormalizationPolicy, TripleJoint};

/// `p(x, y, z) = p(x, y) ch(z | y)`, certified Markov.
pub fn triple_from_markov<T: Scalar>(jxy: &JointDistribution<T>, ch: &Channel<T>) -> Result<TripleJoint<T>> {
    extend_markov(jxy, ch)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct DpiReport<T> {
    pub i_xy: T,
    pub i_xz: T,
    /// `I(X, (Y, Z))` with the pair taken as one variable.
    pub i_x_yz: T,
    pub i_xy_given_z: T,
    pub i_xz_given_y: T,
    /// `I(X, Z) ≤ I(X, Y)` up to the reformulation tolerance. Only
    /// guaranteed when the triple is Markov.
    pub dpi_holds: bool,
    /// `|I(X, (Y, Z)) − I(X, Z) − I(X, Y | Z)|`.
    pub chain_identity_residual: T,
    pub markov_certified: bool,
}

pub fn analyze<T: Scalar>(triple: &TripleJoint<T>) -> DpiReport<T> {
    let method = MiMethod::Definition;
    let i_xy = mutual_information(&triple.marginal_xy(), method);
    let i_xz = mutual_information(&triple.marginal_xz(), method);
    let i_x_yz = mutual_information(&triple.joint_x_yz(), method);
    let i_xy_given_z = conditional_mutual_information(triple);
    let i_xz_given_y = conditional_mutual_information(&triple.swap_yz());
    DpiReport {
        i_xy,
        i_xz,
        i_x_yz,
        i_xy_given_z,
        i_xz_given_y,
        dpi_holds: i_xz <= i_xy + T::tolerance(tol::REFORMULATION),
        chain_identity_residual: (i_x_yz - i_xz - i_xy_given_z).abs(),
        markov_certified: triple.markov_certified(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedTriple<T> {
    pub name: &'static str,
    pub triple: TripleJoint<T>,
}

/// Two triples on bits where conditioning moves mutual information in
/// opposite directions.
///
/// `xor`: `X`, `Y` independent fair bits and `Z = X ⊕ Y`, so conditioning
/// on `Z` creates information. `copy`: `Y = X` and `Z = Y`, so conditioning
/// on `Z` destroys it.
pub fn conditional_mi_sign_gallery<T: Scalar>() -> Vec<NamedTriple<T>> {
    let bits = Alphabet::indexed(2).expect("nonempty");
    let quarter = T::lit(0.25);
    let mut xor = vec![T::zero(); 8];
    for x in 0..2 {
        for y in 0..2 {
            xor[(x * 2 + y) * 2 + (x ^ y)] = quarter;
        }
    }
    let xor = TripleJoint::from_flat(
        [bits.clone(), bits.clone(), bits.clone()],
        xor,
        NormalizationPolicy::Strict,
    )
    .expect("valid XOR triple");

    let half = T::lit(0.5);
    let diagonal = JointDistribution::from_flat(
        bits.clone(),
        bits.clone(),
        vec![half, T::zero(), T::zero(), half],
        NormalizationPolicy::Strict,
    )
    .expect("valid diagonal joint");
    let copy = extend_markov(&diagonal, &Channel::identity(bits)).expect("matching alphabets");

    vec![
        NamedTriple { name: "xor", triple: xor },
        NamedTriple { name: "copy", triple: copy },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct ParticleTrace<T> {
    pub steps: usize,
    /// `I(X_t, Y_t)` for `t = 0..=steps`.
    pub mutual_information: Vec<T>,
    /// `I(X_t, Y_{t+1})`, after moving `Y` but before moving `X`.
    pub intermediate: Vec<T>,
    pub nonincreasing: bool,
}

/// Evolves two particles by deterministic maps, `Y` first then `X` in each
/// step, and tracks their mutual information.
pub fn particle_demo<T: Scalar>(
    initial: &JointDistribution<T>,
    gx: &Channel<T>,
    gy: &Channel<T>,
    steps: usize,
) -> Result<ParticleTrace<T>> {
    for g in [gx, gy] {
        g.as_function()?;
        if !g.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
    }
    initial.x_alphabet().ensure_same(gx.in_alphabet())?;
    initial.y_alphabet().ensure_same(gy.in_alphabet())?;

    let mi = |j: &JointDistribution<T>| mutual_information(j, MiMethod::Definition);
    let mut joint = initial.clone();
    let mut sequence = vec![mi(&joint)];
    let mut intermediate = Vec::with_capacity(steps);
    for _ in 0..steps {
        let half = joint.map_y(gy)?;
        intermediate.push(mi(&half));
        joint = half.map_x(gx)?;
        sequence.push(mi(&joint));
    }
    let slack = T::tolerance(tol::REFORMULATION);
    let nonincreasing = sequence.windows(2).all(|w| w[1] <= w[0] + slack);
    Ok(ParticleTrace {
        steps,
        mutual_information: sequence,
        intermediate,
        nonincreasing,
    })
}

pub const COARSE_GRAIN_POSITIONS: usize = 8;

/// Eight positions, each particle coarse-grained by `i ↦ i mod 4`.
///
/// The particles start correlated: `Y = X` with probability 0.7, `Y = X + 4`
/// (mod 8) with probability 0.2, otherwise uniform.
pub fn coarse_grain_demo<T: Scalar>() -> (JointDistribution<T>, Channel<T>) {
    let n = COARSE_GRAIN_POSITIONS;
    let positions = Alphabet::indexed(n).expect("nonempty");
    let mut probs = vec![T::zero(); n * n];
    let base = T::lit(0.1) / T::lit((n * n) as f64);
    let px = T::one() / T::lit(n as f64);
    for x in 0..n {
        for y in 0..n {
            let mut w = base;
            if y == x {
                w = w + T::lit(0.7) * px;
            }
            if y == (x + n / 2) % n {
                w = w + T::lit(0.2) * px;
            }
            probs[x * n + y] = w;
        }
    }
    let joint = JointDistribution::from_flat(positions.clone(), positions.clone(), probs, NormalizationPolicy::Normalize)
        .expect("valid initial joint");
    let map: Vec<usize> = (0..n).map(|i| i % (n / 2)).collect();
    let coarse = Channel::deterministic(positions.clone(), positions, &map).expect("valid map");
    (joint, coarse)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Scalar"))]
pub struct DpiBatchSummary<T> {
    pub instances: usize,
    pub seed: u64,
    pub all_dpi_hold: bool,
    pub all_markov_certified: bool,
    /// Smallest `I(X, Y) − I(X, Z)`.
    pub min_slack: T,
    pub max_i_xz_given_y: T,
    pub max_chain_residual: T,
}

impl<T: Scalar> DpiBatchSummary<T> {
    pub fn passed(&self) -> bool {
        let t = T::tolerance(tol::REFORMULATION);
        self.all_dpi_hold && self.all_markov_certified && self.max_i_xz_given_y <= t && self.max_chain_residual <= t
    }
}

/// Analyzes `instances` random Markov triples with alphabets of size
/// `2..=max_alphabet`. Instance `i` uses its own stream seeded from
/// `seed + i`, so the result does not depend on scheduling.
pub fn dpi_batch<T: Scalar>(instances: usize, max_alphabet: usize, seed: u64) -> Result<DpiBatchSummary<T>> {
    if instances == 0 || max_alphabet < 2 {
        return Err(Error::InvalidArgument(
            "need at least one instance and alphabets of size 2 or more".into(),
        ));
    }
    let reports: Vec<DpiReport<T>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded_rng(seed.wrapping_add(i as u64));
            let mut size = || rng.random_range(2..=max_alphabet);
            let (m, k, r) = (size(), size(), size());
            let jxy = random_joint(&Alphabet::indexed(m)?, &Alphabet::indexed(k)?, 0.2, &mut rng);
            let ch = random_channel(&Alphabet::indexed(k)?, &Alphabet::indexed(r)?, 0.2, &mut rng);
            Ok(analyze(&triple_from_markov(&jxy, &ch)?))
        })
        .collect::<Result<_>>()?;
    let mut summary = DpiBatchSummary {
        instances,
        seed,
        all_dpi_hold: true,
        all_markov_certified: true,
        min_slack: T::infinity(),
        max_i_xz_given_y: T::zero(),
        max_chain_residual: T::zero(),
    };
    for r in &reports {
        summary.all_dpi_hold &= r.dpi_holds;
        summary.all_markov_certified &= r.markov_certified;
        summary.min_slack = summary.min_slack.min(r.i_xy - r.i_xz);
        summary.max_i_xz_given_y = summary.max_i_xz_given_y.max(r.i_xz_given_y);
        summary.max_chain_residual = summary.max_chain_residual.max(r.chain_identity_residual);
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn suit_color() -> JointDistribution<f64> {
        JointDistribution::new(
            Alphabet::suits(),
            Alphabet::new(["black", "red"]).unwrap(),
            vec![vec![0.25, 0.0], vec![0.25, 0.0], vec![0.0, 0.25], vec![0.0, 0.25]],
            NormalizationPolicy::Strict,
        )
        .unwrap()
    }

    #[test]
    fn constant_channel_destroys_information() {
        let j = suit_color();
        let ch = Channel::constant(j.y_alphabet().clone(), Alphabet::indexed(1).unwrap(), "0").unwrap();
        let r = analyze(&triple_from_markov(&j, &ch).unwrap());
        assert!((r.i_xy - LN_2).abs() < 1e-12);
        assert!(r.i_xz < 1e-15);
        assert!(r.dpi_holds && r.markov_certified);
        assert!(r.chain_identity_residual < 1e-12);
    }

    #[test]
    fn identity_channel_is_lossless() {
        let j = suit_color();
        let t = triple_from_markov(&j, &Channel::identity(j.y_alphabet().clone())).unwrap();
        let r = analyze(&t);
        assert_eq!(r.i_xz, r.i_xy);
        assert!(r.i_xz_given_y < 1e-12);
        assert_eq!(t.marginal_xy(), j);
    }

    #[test]
    fn color_parity_channel_certifies() {
        let j = suit_color();
        let parity = Channel::from_function(j.y_alphabet().clone(), Alphabet::new(["even", "odd"]).unwrap(), |c| {
            if c == "black" { "even" } else { "odd" }.to_string()
        })
        .unwrap();
        let t = triple_from_markov(&j, &parity).unwrap();
        // oracle: the numeric certificate agrees with the construction
        assert!(t.check_markov());
        assert!(analyze(&t).dpi_holds);
    }

    #[test]
    fn mismatched_channel_is_rejected() {
        let j = suit_color();
        let ch = Channel::<f64>::identity(Alphabet::indexed(2).unwrap());
        assert_eq!(triple_from_markov(&j, &ch).unwrap_err(), Error::AlphabetMismatch);
    }

    #[test]
    fn gallery_signs() {
        let gallery = conditional_mi_sign_gallery::<f64>();
        let xor = analyze(&gallery[0].triple);
        assert_eq!(gallery[0].name, "xor");
        assert!(xor.i_xy.abs() < 1e-12);
        assert!((xor.i_xy_given_z - LN_2).abs() < 1e-12);
        assert!(!xor.markov_certified);
        assert!(xor.chain_identity_residual < 1e-12);

        let copy = analyze(&gallery[1].triple);
        assert!((copy.i_xy - LN_2).abs() < 1e-12);
        assert!(copy.i_xy_given_z.abs() < 1e-12);
        assert!(copy.markov_certified);
    }

    #[test]
    fn identity_dynamics_are_constant() {
        let (joint, _) = coarse_grain_demo::<f64>();
        let id = Channel::identity(joint.x_alphabet().clone());
        let trace = particle_demo(&joint, &id, &id, 4).unwrap();
        assert!(trace.mutual_information.iter().all(|&v| v == trace.mutual_information[0]));
    }

    #[test]
    fn constant_dynamics_drop_to_zero() {
        let (joint, _) = coarse_grain_demo::<f64>();
        let a = joint.x_alphabet().clone();
        let c = Channel::constant(a.clone(), a, "0").unwrap();
        let trace = particle_demo(&joint, &c, &c, 3).unwrap();
        assert!(trace.mutual_information[0] > 0.0);
        assert!(trace.mutual_information[1..].iter().all(|&v| v < 1e-15));
    }

    #[test]
    fn coarse_graining_loses_then_stalls() {
        let (joint, g) = coarse_grain_demo::<f64>();
        let trace = particle_demo(&joint, &g, &g, 5).unwrap();
        let mi = &trace.mutual_information;
        assert!(trace.nonincreasing);
        assert!(mi[1] < mi[0] - 1e-3);
        for w in mi[1..].windows(2) {
            assert!((w[1] - w[0]).abs() < 1e-12);
        }
        // intermediate values sit between their neighbours
        for t in 0..5 {
            assert!(trace.intermediate[t] <= mi[t] + 1e-12);
            assert!(mi[t + 1] <= trace.intermediate[t] + 1e-12);
        }
    }

    #[test]
    fn particle_maps_must_be_deterministic_endomorphisms() {
        let (joint, g) = coarse_grain_demo::<f64>();
        let a = joint.x_alphabet().clone();
        let mut rows = vec![vec![0.0; 8]; 8];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 0.5;
            row[(i + 1) % 8] = 0.5;
        }
        let noisy = Channel::new(a.clone(), a.clone(), rows).unwrap();
        assert_eq!(particle_demo(&joint, &noisy, &g, 1).unwrap_err(), Error::NotDeterministic { row: 0 });
        let shrink = Channel::deterministic(a, Alphabet::indexed(4).unwrap(), &[0, 1, 2, 3, 0, 1, 2, 3]).unwrap();
        assert_eq!(particle_demo(&joint, &g, &shrink, 1).unwrap_err(), Error::NotEndomorphism);
    }

    #[test]
    fn batch_is_deterministic() {
        let a = dpi_batch::<f64>(50, 5, 11).unwrap();
        let b = dpi_batch::<f64>(50, 5, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.passed(), "{a:?}");
    }
}
