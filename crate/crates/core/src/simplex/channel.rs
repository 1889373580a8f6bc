use crate::error::{Error, Result};
use crate::scalar::{tol, Scalar};

use super::{Alphabet, Distribution, JointDistribution, TripleJoint};

/// Row-stochastic matrix `p(z | y)`: row `y` is a distribution over the
/// output alphabet. A deterministic function is the 0/1 special case.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel<T> {
    in_alphabet: Alphabet,
    out_alphabet: Alphabet,
    matrix: Vec<T>,
}

impl<T: Scalar> Channel<T> {
    pub fn new(in_alphabet: Alphabet, out_alphabet: Alphabet, rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.len() != in_alphabet.len() {
            return Err(Error::LengthMismatch {
                expected: in_alphabet.len(),
                found: rows.len(),
            });
        }
        let r = out_alphabet.len();
        let tolerance = T::tolerance(tol::NORMALIZATION);
        for (row, values) in rows.iter().enumerate() {
            if values.len() != r {
                return Err(Error::LengthMismatch {
                    expected: r,
                    found: values.len(),
                });
            }
            if let Some(index) = values.iter().position(|&v| v < T::zero() || !v.is_finite())
            {
                return Err(Error::NegativeWeight {
                    index,
                    value: values[index].as_f64(),
                });
            }
            let sum: T = values.iter().copied().sum();
            if (sum - T::one()).abs() > tolerance {
                return Err(Error::NotStochastic {
                    row,
                    sum: sum.as_f64(),
                });
            }
        }
        Ok(Self {
            in_alphabet,
            out_alphabet,
            matrix: rows.concat(),
        })
    }

    /// Deterministic channel sending input `i` to output `map[i]`.
    pub fn deterministic(in_alphabet: Alphabet, out_alphabet: Alphabet, map: &[usize]) -> Result<Self> {
        if map.len() != in_alphabet.len() {
            return Err(Error::LengthMismatch {
                expected: in_alphabet.len(),
                found: map.len(),
            });
        }
        let r = out_alphabet.len();
        let mut matrix = vec![T::zero(); map.len() * r];
        for (i, &j) in map.iter().enumerate() {
            if j >= r {
                return Err(Error::InvalidArgument(format!(
                    "output index {j} out of range for alphabet of size {r}"
                )));
            }
            matrix[i * r + j] = T::one();
        }
        Ok(Self {
            in_alphabet,
            out_alphabet,
            matrix,
        })
    }

    /// Deterministic channel from a labelling function.
    pub fn from_function<F>(in_alphabet: Alphabet, out_alphabet: Alphabet, f: F) -> Result<Self>
    where
        F: Fn(&str) -> String,
    {
        let map = in_alphabet
            .labels()
            .iter()
            .map(|l| out_alphabet.index_of(&f(l)))
            .collect::<Result<Vec<_>>>()?;
        Self::deterministic(in_alphabet, out_alphabet, &map)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let map: Vec<usize> = (0..alphabet.len()).collect();
        Self::deterministic(alphabet.clone(), alphabet, &map).expect("identity map is in range")
    }

    /// Sends every input to `label`.
    pub fn constant(in_alphabet: Alphabet, out_alphabet: Alphabet, label: &str) -> Result<Self> {
        let j = out_alphabet.index_of(label)?;
        let map = vec![j; in_alphabet.len()];
        Self::deterministic(in_alphabet, out_alphabet, &map)
    }

    pub fn in_alphabet(&self) -> &Alphabet {
        &self.in_alphabet
    }

    pub fn out_alphabet(&self) -> &Alphabet {
        &self.out_alphabet
    }

    pub fn row(&self, y: usize) -> &[T] {
        let r = self.out_alphabet.len();
        &self.matrix[y * r..(y + 1) * r]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.matrix
            .chunks(self.out_alphabet.len())
            .map(<[T]>::to_vec)
            .collect()
    }

    /// The output distribution given input `y`.
    pub fn row_distribution(&self, y: usize) -> Distribution<T> {
        Distribution::from_parts_unchecked(self.out_alphabet.clone(), self.row(y).to_vec())
    }

    /// The underlying function if every row is a 0/1 indicator.
    pub fn as_function(&self) -> Result<Vec<usize>> {
        (0..self.in_alphabet.len())
            .map(|y| {
                let row = self.row(y);
                let ones: Vec<usize> = (0..row.len()).filter(|&z| row[z] == T::one()).collect();
                let zeros = row.iter().filter(|&&v| v == T::zero()).count();
                if ones.len() == 1 && zeros + 1 == row.len() {
                    Ok(ones[0])
                } else {
                    Err(Error::NotDeterministic { row: y })
                }
            })
            .collect()
    }

    pub fn is_deterministic(&self) -> bool {
        self.as_function().is_ok()
    }

    /// Injective deterministic channels lose no information.
    pub fn is_injective(&self) -> bool {
        match self.as_function() {
            Ok(map) => {
                let mut seen = vec![false; self.out_alphabet.len()];
                map.into_iter().all(|z| !std::mem::replace(&mut seen[z], true))
            }
            Err(_) => false,
        }
    }

    pub fn is_endomorphism(&self) -> bool {
        self.in_alphabet == self.out_alphabet
    }
}

/// Distribution of `Z` when `Y ~ py` is passed through `channel`:
/// `p_Z(z) = Σ_y p_Y(y) ch(z|y)`.
pub fn pushforward<T: Scalar>(py: &Distribution<T>, channel: &Channel<T>) -> Result<Distribution<T>> {
    py.alphabet().ensure_same(channel.in_alphabet())?;
    let mut probs = vec![T::zero(); channel.out_alphabet().len()];
    for (y, &p) in py.probs().iter().enumerate() {
        if p == T::zero() {
            continue;
        }
        for (acc, &c) in probs.iter_mut().zip(channel.row(y)) {
            *acc = *acc + p * c;
        }
    }
    Ok(Distribution::from_parts_unchecked(
        channel.out_alphabet().clone(),
        probs,
    ))
}

/// Appends `Z` drawn from `channel` given `Y`, so that `Z ⊥ X | Y`:
/// `p(x, y, z) = p(x, y) ch(z | y)`.
pub fn extend_markov<T: Scalar>(
    jxy: &JointDistribution<T>,
    channel: &Channel<T>,
) -> Result<TripleJoint<T>> {
    jxy.y_alphabet().ensure_same(channel.in_alphabet())?;
    let (m, k, r) = (jxy.rows(), jxy.cols(), channel.out_alphabet().len());
    let mut probs = Vec::with_capacity(m * k * r);
    for x in 0..m {
        for y in 0..k {
            let pxy = jxy.at(x, y);
            probs.extend(channel.row(y).iter().map(|&c| pxy * c));
        }
    }
    Ok(TripleJoint::from_parts_unchecked(
        [
            jxy.x_alphabet().clone(),
            jxy.y_alphabet().clone(),
            channel.out_alphabet().clone(),
        ],
        probs,
        true,
    ))
}
