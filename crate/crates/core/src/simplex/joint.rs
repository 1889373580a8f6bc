use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::distribution::validate_weights;
use super::{Alphabet, Channel, Distribution, NormalizationPolicy};

/// Joint distribution of `(X, Y)` stored row-major: entry `(x, y)` lives at
/// `x * |Y| + y`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T> {
    x_alphabet: Alphabet,
    y_alphabet: Alphabet,
    probs: Vec<T>,
}

impl<T: Scalar> JointDistribution<T> {
    pub fn new(
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        rows: Vec<Vec<T>>,
        policy: NormalizationPolicy,
    ) -> Result<Self> {
        if rows.len() != x_alphabet.len() {
            return Err(Error::LengthMismatch {
                expected: x_alphabet.len(),
                found: rows.len(),
            });
        }
        let k = y_alphabet.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != k) {
            return Err(Error::LengthMismatch {
                expected: k,
                found: bad.len(),
            });
        }
        Self::from_flat(x_alphabet, y_alphabet, rows.concat(), policy)
    }

    pub fn from_flat(
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        probs: Vec<T>,
        policy: NormalizationPolicy,
    ) -> Result<Self> {
        let probs = validate_weights(x_alphabet.len() * y_alphabet.len(), probs, policy)?;
        Ok(Self {
            x_alphabet,
            y_alphabet,
            probs,
        })
    }

    pub(crate) fn from_parts_unchecked(
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        probs: Vec<T>,
    ) -> Self {
        debug_assert_eq!(probs.len(), x_alphabet.len() * y_alphabet.len());
        Self {
            x_alphabet,
            y_alphabet,
            probs,
        }
    }

    /// `(px ⊗ py)(x, y) = px(x) py(y)`.
    pub fn product(px: &Distribution<T>, py: &Distribution<T>) -> Self {
        let probs = px
            .probs()
            .iter()
            .flat_map(|&a| py.probs().iter().map(move |&b| a * b))
            .collect();
        Self::from_parts_unchecked(px.alphabet().clone(), py.alphabet().clone(), probs)
    }

    /// Joint of `(X, Y)` with `X ~ px` and `Y` drawn from `channel` given `X`.
    pub fn from_channel(px: &Distribution<T>, channel: &Channel<T>) -> Result<Self> {
        px.alphabet().ensure_same(channel.in_alphabet())?;
        let r = channel.out_alphabet().len();
        let mut probs = Vec::with_capacity(px.len() * r);
        for (x, &p) in px.probs().iter().enumerate() {
            probs.extend(channel.row(x).iter().map(|&c| p * c));
        }
        Ok(Self::from_parts_unchecked(
            px.alphabet().clone(),
            channel.out_alphabet().clone(),
            probs,
        ))
    }

    pub fn x_alphabet(&self) -> &Alphabet {
        &self.x_alphabet
    }

    pub fn y_alphabet(&self) -> &Alphabet {
        &self.y_alphabet
    }

    pub fn rows(&self) -> usize {
        self.x_alphabet.len()
    }

    pub fn cols(&self) -> usize {
        self.y_alphabet.len()
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn at(&self, x: usize, y: usize) -> T {
        self.probs[x * self.cols() + y]
    }

    pub fn row(&self, x: usize) -> &[T] {
        let k = self.cols();
        &self.probs[x * k..(x + 1) * k]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.probs.chunks(self.cols()).map(<[T]>::to_vec).collect()
    }

    pub fn marginal_x(&self) -> Distribution<T> {
        let probs = (0..self.rows())
            .map(|x| self.row(x).iter().copied().sum())
            .collect();
        Distribution::from_parts_unchecked(self.x_alphabet.clone(), probs)
    }

    pub fn marginal_y(&self) -> Distribution<T> {
        let mut probs = vec![T::zero(); self.cols()];
        for x in 0..self.rows() {
            for (acc, &p) in probs.iter_mut().zip(self.row(x)) {
                *acc = *acc + p;
            }
        }
        Distribution::from_parts_unchecked(self.y_alphabet.clone(), probs)
    }

    /// `p(x | Y = y)` as a distribution over `X`.
    pub fn conditional_slice(&self, y: &str) -> Result<Distribution<T>> {
        let j = self.y_alphabet.index_of(y)?;
        self.conditional_slice_at(j)
    }

    pub fn conditional_slice_at(&self, j: usize) -> Result<Distribution<T>> {
        let column: Vec<T> = (0..self.rows()).map(|x| self.at(x, j)).collect();
        let py: T = column.iter().copied().sum();
        if py <= T::zero() {
            return Err(Error::ZeroConditioningEvent(
                self.y_alphabet.label(j).to_string(),
            ));
        }
        let probs = column.into_iter().map(|p| p / py).collect();
        Ok(Distribution::from_parts_unchecked(
            self.x_alphabet.clone(),
            probs,
        ))
    }

    /// Swaps the roles of `X` and `Y`.
    pub fn transpose(&self) -> Self {
        let (m, k) = (self.rows(), self.cols());
        let mut probs = Vec::with_capacity(m * k);
        for y in 0..k {
            probs.extend((0..m).map(|x| self.at(x, y)));
        }
        Self::from_parts_unchecked(self.y_alphabet.clone(), self.x_alphabet.clone(), probs)
    }

    /// The joint viewed as one distribution over the product alphabet.
    pub fn flatten(&self) -> Distribution<T> {
        Distribution::from_parts_unchecked(
            self.x_alphabet.product(&self.y_alphabet),
            self.probs.clone(),
        )
    }

    /// Processes `Y` through `channel`: returns the joint of `(X, Z)`.
    pub fn map_y(&self, channel: &Channel<T>) -> Result<Self> {
        self.y_alphabet.ensure_same(channel.in_alphabet())?;
        let r = channel.out_alphabet().len();
        let mut probs = vec![T::zero(); self.rows() * r];
        for x in 0..self.rows() {
            for (y, &pxy) in self.row(x).iter().enumerate() {
                if pxy == T::zero() {
                    continue;
                }
                for (z, &c) in channel.row(y).iter().enumerate() {
                    probs[x * r + z] = probs[x * r + z] + pxy * c;
                }
            }
        }
        Ok(Self::from_parts_unchecked(
            self.x_alphabet.clone(),
            channel.out_alphabet().clone(),
            probs,
        ))
    }

    /// Processes `X` through `channel`: returns the joint of `(Z, Y)`.
    pub fn map_x(&self, channel: &Channel<T>) -> Result<Self> {
        Ok(self.transpose().map_y(channel)?.transpose())
    }
}
