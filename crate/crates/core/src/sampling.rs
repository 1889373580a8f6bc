//! Seeded randomness: categorical draws and random points of the simplex.
//!
//! All stochastic routines take a `u64` seed and use ChaCha8, so results
//! are reproducible across platforms and runs.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::scalar::Scalar;
use crate::simplex::{Alphabet, Channel, Distribution, JointDistribution};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws alphabet indices from a fixed distribution.
#[derive(Debug, Clone)]
pub struct Categorical {
    index: WeightedIndex<f64>,
}

impl Categorical {
    pub fn new<T: Scalar>(p: &Distribution<T>) -> Self {
        Self::from_weights(p.probs())
    }

    pub(crate) fn from_weights<T: Scalar>(weights: &[T]) -> Self {
        let w: Vec<f64> = weights.iter().map(|p| p.as_f64()).collect();
        Self {
            index: WeightedIndex::new(w).expect("simplex points have positive mass"),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.index.sample(rng)
    }
}

/// Uniform draw from the simplex (flat Dirichlet), strictly positive
/// with probability one.
pub fn random_distribution<T: Scalar, R: Rng + ?Sized>(alphabet: &Alphabet, rng: &mut R) -> Distribution<T> {
    let probs = random_simplex_point(alphabet.len(), rng);
    Distribution::from_parts_unchecked(alphabet.clone(), probs)
}

/// Like [`random_distribution`] but zeroes each entry with probability
/// `sparsity`, keeping at least one positive entry.
pub fn random_sparse_distribution<T: Scalar, R: Rng + ?Sized>(
    alphabet: &Alphabet,
    sparsity: f64,
    rng: &mut R,
) -> Distribution<T> {
    let probs = sparse_point(alphabet.len(), sparsity, rng);
    Distribution::from_parts_unchecked(alphabet.clone(), probs)
}

pub fn random_joint<T: Scalar, R: Rng + ?Sized>(
    x_alphabet: &Alphabet,
    y_alphabet: &Alphabet,
    sparsity: f64,
    rng: &mut R,
) -> JointDistribution<T> {
    let probs = sparse_point(x_alphabet.len() * y_alphabet.len(), sparsity, rng);
    JointDistribution::from_parts_unchecked(x_alphabet.clone(), y_alphabet.clone(), probs)
}

/// Random stochastic matrix; each row is an independent sparse simplex point.
pub fn random_channel<T: Scalar, R: Rng + ?Sized>(
    in_alphabet: &Alphabet,
    out_alphabet: &Alphabet,
    sparsity: f64,
    rng: &mut R,
) -> Channel<T> {
    let rows = (0..in_alphabet.len())
        .map(|_| sparse_point(out_alphabet.len(), sparsity, rng))
        .collect();
    Channel::new(in_alphabet.clone(), out_alphabet.clone(), rows).expect("rows are normalized")
}

fn random_simplex_point<T: Scalar, R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<T> {
    let raw: Vec<f64> = (0..m)
        .map(|_| rng.sample::<f64, _>(Exp1).max(f64::MIN_POSITIVE))
        .collect();
    normalize(raw)
}

fn sparse_point<T: Scalar, R: Rng + ?Sized>(m: usize, sparsity: f64, rng: &mut R) -> Vec<T> {
    let mut raw: Vec<f64> = (0..m)
        .map(|_| rng.sample::<f64, _>(Exp1).max(f64::MIN_POSITIVE))
        .collect();
    if sparsity > 0.0 {
        let keep = rng.random_range(0..m);
        for (i, v) in raw.iter_mut().enumerate() {
            if i != keep && rng.random::<f64>() < sparsity {
                *v = 0.0;
            }
        }
    }
    normalize(raw)
}

fn normalize<T: Scalar>(raw: Vec<f64>) -> Vec<T> {
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| T::lit(v / total)).collect()
}
