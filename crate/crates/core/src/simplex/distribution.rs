use crate::error::{Error, Result};
use crate::scalar::{tol, Scalar};

use super::Alphabet;

/// How a weight vector becomes a point of the simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationPolicy {
    /// Weights must already sum to one within the normalization tolerance.
    Strict,
    /// Weights are divided by their (positive) sum.
    Normalize,
}

/// A point of the probability simplex over an [`Alphabet`].
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    alphabet: Alphabet,
    probs: Vec<T>,
}

impl<T: Scalar> Distribution<T> {
    pub fn new(alphabet: Alphabet, weights: Vec<T>, policy: NormalizationPolicy) -> Result<Self> {
        let probs = validate_weights(alphabet.len(), weights, policy)?;
        Ok(Self { alphabet, probs })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let m = alphabet.len();
        let p = T::one() / T::lit(m as f64);
        Self {
            alphabet,
            probs: vec![p; m],
        }
    }

    pub fn point_mass(alphabet: Alphabet, label: &str) -> Result<Self> {
        let i = alphabet.index_of(label)?;
        let mut probs = vec![T::zero(); alphabet.len()];
        probs[i] = T::one();
        Ok(Self { alphabet, probs })
    }

    /// Caller guarantees the simplex invariants.
    pub(crate) fn from_parts_unchecked(alphabet: Alphabet, probs: Vec<T>) -> Self {
        debug_assert_eq!(alphabet.len(), probs.len());
        Self { alphabet, probs }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, label: &str) -> Result<T> {
        Ok(self.probs[self.alphabet.index_of(label)?])
    }

    /// Probability at index `i`.
    pub fn at(&self, i: usize) -> T {
        self.probs[i]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(|&p| p > T::zero())
    }

    /// Index of the first zero entry, if any.
    pub fn first_zero(&self) -> Option<usize> {
        self.probs.iter().position(|&p| p <= T::zero())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }

    /// Same point, different scalar type.
    pub fn cast<U: Scalar>(&self) -> Distribution<U> {
        Distribution {
            alphabet: self.alphabet.clone(),
            probs: self.probs.iter().map(|p| U::lit(p.as_f64())).collect(),
        }
    }
}

pub(crate) fn validate_weights<T: Scalar>(
    expected_len: usize,
    mut weights: Vec<T>,
    policy: NormalizationPolicy,
) -> Result<Vec<T>> {
    if weights.len() != expected_len {
        return Err(Error::LengthMismatch {
            expected: expected_len,
            found: weights.len(),
        });
    }
    for (index, &w) in weights.iter().enumerate() {
        if w < T::zero() || !w.is_finite() {
            return Err(Error::NegativeWeight {
                index,
                value: w.as_f64(),
            });
        }
    }
    let total: T = weights.iter().copied().sum();
    match policy {
        NormalizationPolicy::Strict => {
            if (total - T::one()).abs() > T::tolerance(tol::NORMALIZATION) {
                return Err(Error::NotNormalized { sum: total.as_f64() });
            }
        }
        NormalizationPolicy::Normalize => {
            if total <= T::zero() {
                return Err(Error::ZeroTotal);
            }
            for w in &mut weights {
                *w = *w / total;
            }
        }
    }
    Ok(weights)
}

/// Integer count vector of `n` draws: a type in the method-of-types sense.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EmpiricalType {
    alphabet: Alphabet,
    counts: Vec<u64>,
    n: u64,
}

impl EmpiricalType {
    pub fn new(alphabet: Alphabet, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != alphabet.len() {
            return Err(Error::LengthMismatch {
                expected: alphabet.len(),
                found: counts.len(),
            });
        }
        let n = counts.iter().sum();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Ok(Self {
            alphabet,
            counts,
            n,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The normalized type `counts / n`.
    pub fn distribution<T: Scalar>(&self) -> Distribution<T> {
        let n = T::lit(self.n as f64);
        let probs = self
            .counts
            .iter()
            .map(|&c| T::lit(c as f64) / n)
            .collect();
        Distribution::from_parts_unchecked(self.alphabet.clone(), probs)
    }
}

/// Counts the labels of `samples` and returns the empirical distribution
/// together with its type.
pub fn empirical_from_samples<T, I, S>(
    alphabet: &Alphabet,
    samples: I,
) -> Result<(Distribution<T>, EmpiricalType)>
where
    T: Scalar,
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts = vec![0u64; alphabet.len()];
    for s in samples {
        counts[alphabet.index_of(s.as_ref())?] += 1;
    }
    let t = EmpiricalType::new(alphabet.clone(), counts)?;
    Ok((t.distribution(), t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn suits() -> Alphabet {
        Alphabet::suits()
    }

    #[test]
    fn strict_accepts_quarter_suits() {
        let d = Distribution::new(suits(), vec![0.25; 4], NormalizationPolicy::Strict).unwrap();
        assert_eq!(d, Distribution::uniform(suits()));
    }

    #[test]
    fn normalize_divides_by_sum() {
        let a = Alphabet::indexed(2).unwrap();
        let d = Distribution::new(a, vec![2.0, 2.0], NormalizationPolicy::Normalize).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn construction_errors() {
        let a = Alphabet::indexed(2).unwrap();
        assert_eq!(
            Distribution::new(a.clone(), vec![0.5, 0.6], NormalizationPolicy::Strict).unwrap_err(),
            Error::NotNormalized { sum: 1.1 }
        );
        assert!(matches!(
            Distribution::new(a.clone(), vec![-0.5, 1.5], NormalizationPolicy::Strict),
            Err(Error::NegativeWeight { index: 0, .. })
        ));
        assert!(matches!(
            Distribution::new(a.clone(), vec![f64::NAN, 1.0], NormalizationPolicy::Normalize),
            Err(Error::NegativeWeight { index: 0, .. })
        ));
        assert_eq!(
            Distribution::new(a.clone(), vec![0.0, 0.0], NormalizationPolicy::Normalize)
                .unwrap_err(),
            Error::ZeroTotal
        );
        assert!(matches!(
            Distribution::new(a, vec![1.0], NormalizationPolicy::Strict),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn strict_tolerates_decimal_round_trip() {
        let a = Alphabet::indexed(3).unwrap();
        let w = vec![0.333333333333, 0.333333333333, 0.333333333334];
        assert!(Distribution::new(a, w, NormalizationPolicy::Strict).is_ok());
    }

    #[test]
    fn uniform_sizes() {
        for m in 1..=4 {
            let d = Distribution::<f64>::uniform(Alphabet::indexed(m).unwrap());
            assert!(d.probs().iter().all(|&p| p == 1.0 / m as f64));
        }
    }

    #[test]
    fn counting_hearts_and_diamonds() {
        let (d, t) =
            empirical_from_samples::<f64, _, _>(&suits(), ["hearts", "hearts", "diamonds", "hearts"])
                .unwrap();
        assert_eq!(t.counts(), &[0, 0, 1, 3]);
        assert_eq!(t.n(), 4);
        assert_eq!(d.probs(), &[0.0, 0.0, 0.25, 0.75]);
    }

    #[test]
    fn repeated_label_is_point_mass() {
        let (d, _) = empirical_from_samples::<f64, _, _>(&suits(), vec!["clubs"; 17]).unwrap();
        assert_eq!(d, Distribution::point_mass(suits(), "clubs").unwrap());
    }

    #[test]
    fn sample_errors() {
        assert_eq!(
            empirical_from_samples::<f64, _, &str>(&suits(), []).unwrap_err(),
            Error::EmptySample
        );
        assert_eq!(
            empirical_from_samples::<f64, _, _>(&suits(), ["joker"]).unwrap_err(),
            Error::UnknownLabel("joker".into())
        );
    }

    #[test]
    fn law_of_large_numbers_on_red_deck() {
        let deck =
            Distribution::new(suits(), vec![0.0, 0.0, 0.5, 0.5], NormalizationPolicy::Strict)
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sampler = crate::sampling::Categorical::new(&deck);
        let draws: Vec<&str> = (0..100_000)
            .map(|_| suits_label(sampler.sample(&mut rng)))
            .collect();
        let (d, t) = empirical_from_samples::<f64, _, _>(&suits(), draws.iter()).unwrap();
        // direct counting oracle
        let hearts = draws.iter().filter(|s| **s == "hearts").count();
        assert_eq!(t.counts()[3] as usize, hearts);
        assert!(d.max_abs_diff(&deck) < 0.01);
    }

    fn suits_label(i: usize) -> &'static str {
        ["spades", "clubs", "diamonds", "hearts"][i]
    }
}
