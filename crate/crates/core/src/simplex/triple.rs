use crate::error::{Error, Result};
use crate::scalar::{tol, Scalar};

use super::distribution::validate_weights;
use super::{Alphabet, JointDistribution, NormalizationPolicy};

/// Joint distribution of `(X, Y, Z)`, stored with `z` varying fastest.
///
/// `markov_certified` records that `Z ⊥ X | Y` holds, either by
/// construction through a channel on `Y` or by a passed numeric check.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleJoint<T> {
    alphabets: [Alphabet; 3],
    probs: Vec<T>,
    markov_certified: bool,
}

impl<T: Scalar> TripleJoint<T> {
    /// Builds from nested `probs[x][y][z]` and certifies the Markov
    /// property numerically.
    pub fn new(
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        z_alphabet: Alphabet,
        probs: Vec<Vec<Vec<T>>>,
        policy: NormalizationPolicy,
    ) -> Result<Self> {
        let (m, k, r) = (x_alphabet.len(), y_alphabet.len(), z_alphabet.len());
        if probs.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                found: probs.len(),
            });
        }
        let mut flat = Vec::with_capacity(m * k * r);
        for plane in probs {
            if plane.len() != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    found: plane.len(),
                });
            }
            for row in plane {
                if row.len() != r {
                    return Err(Error::LengthMismatch {
                        expected: r,
                        found: row.len(),
                    });
                }
                flat.extend(row);
            }
        }
        Self::from_flat([x_alphabet, y_alphabet, z_alphabet], flat, policy)
    }

    pub fn from_flat(alphabets: [Alphabet; 3], probs: Vec<T>, policy: NormalizationPolicy) -> Result<Self> {
        let len = alphabets.iter().map(Alphabet::len).product();
        let probs = validate_weights(len, probs, policy)?;
        let mut t = Self::from_parts_unchecked(alphabets, probs, false);
        t.markov_certified = t.check_markov();
        Ok(t)
    }

    pub(crate) fn from_parts_unchecked(alphabets: [Alphabet; 3], probs: Vec<T>, markov_certified: bool) -> Self {
        Self {
            alphabets,
            probs,
            markov_certified,
        }
    }

    pub fn x_alphabet(&self) -> &Alphabet {
        &self.alphabets[0]
    }

    pub fn y_alphabet(&self) -> &Alphabet {
        &self.alphabets[1]
    }

    pub fn z_alphabet(&self) -> &Alphabet {
        &self.alphabets[2]
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (
            self.alphabets[0].len(),
            self.alphabets[1].len(),
            self.alphabets[2].len(),
        )
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn markov_certified(&self) -> bool {
        self.markov_certified
    }

    pub fn at(&self, x: usize, y: usize, z: usize) -> T {
        let (_, k, r) = self.dims();
        self.probs[(x * k + y) * r + z]
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<T>>> {
        let (m, k, r) = self.dims();
        (0..m)
            .map(|x| {
                (0..k)
                    .map(|y| (0..r).map(|z| self.at(x, y, z)).collect())
                    .collect()
            })
            .collect()
    }

    /// Sums out one axis (0 = X, 1 = Y, 2 = Z) and returns the joint of the
    /// remaining two, in their original order.
    fn marginalize(&self, axis: usize) -> JointDistribution<T> {
        let (m, k, r) = self.dims();
        let keep: Vec<usize> = (0..3).filter(|&a| a != axis).collect();
        let (rows, cols) = (self.alphabets[keep[0]].len(), self.alphabets[keep[1]].len());
        let mut out = vec![T::zero(); rows * cols];
        for x in 0..m {
            for y in 0..k {
                for z in 0..r {
                    let idx = [x, y, z];
                    let cell = idx[keep[0]] * cols + idx[keep[1]];
                    out[cell] = out[cell] + self.at(x, y, z);
                }
            }
        }
        JointDistribution::from_parts_unchecked(
            self.alphabets[keep[0]].clone(),
            self.alphabets[keep[1]].clone(),
            out,
        )
    }

    pub fn marginal_xy(&self) -> JointDistribution<T> {
        self.marginalize(2)
    }

    pub fn marginal_xz(&self) -> JointDistribution<T> {
        self.marginalize(1)
    }

    pub fn marginal_yz(&self) -> JointDistribution<T> {
        self.marginalize(0)
    }

    /// `X` against the pair `(Y, Z)` taken as one variable.
    pub fn joint_x_yz(&self) -> JointDistribution<T> {
        JointDistribution::from_parts_unchecked(
            self.alphabets[0].clone(),
            self.alphabets[1].product(&self.alphabets[2]),
            self.probs.clone(),
        )
    }

    /// Reorders to `(X, Z, Y)`; the Markov certificate is recomputed.
    pub fn swap_yz(&self) -> Self {
        let (m, k, r) = self.dims();
        let mut probs = Vec::with_capacity(self.probs.len());
        for x in 0..m {
            for z in 0..r {
                probs.extend((0..k).map(|y| self.at(x, y, z)));
            }
        }
        let mut t = Self::from_parts_unchecked(
            [
                self.alphabets[0].clone(),
                self.alphabets[2].clone(),
                self.alphabets[1].clone(),
            ],
            probs,
            false,
        );
        t.markov_certified = t.check_markov();
        t
    }

    /// `p(x, y | Z = z)` with its probability `p_Z(z)`, or `None` when the
    /// event has probability zero.
    pub fn slice_given_z(&self, z: usize) -> Option<(T, JointDistribution<T>)> {
        let (m, k, _) = self.dims();
        let cells: Vec<T> = (0..m)
            .flat_map(|x| (0..k).map(move |y| (x, y)))
            .map(|(x, y)| self.at(x, y, z))
            .collect();
        let pz: T = cells.iter().copied().sum();
        if pz <= T::zero() {
            return None;
        }
        let probs = cells.into_iter().map(|p| p / pz).collect();
        Some((
            pz,
            JointDistribution::from_parts_unchecked(
                self.alphabets[0].clone(),
                self.alphabets[1].clone(),
                probs,
            ),
        ))
    }

    /// Largest deviation `|p(z|x,y) − p(z|y)|` over cells with `p(x,y) > 0`.
    pub fn markov_residual(&self) -> T {
        let (m, k, r) = self.dims();
        let xy = self.marginal_xy();
        let yz = self.marginal_yz();
        let py = xy.marginal_y();
        let mut worst = T::zero();
        for y in 0..k {
            let pyv = py.at(y);
            if pyv <= T::zero() {
                continue;
            }
            for x in 0..m {
                let pxy = xy.at(x, y);
                if pxy <= T::zero() {
                    continue;
                }
                for z in 0..r {
                    let given_xy = self.at(x, y, z) / pxy;
                    let given_y = yz.at(y, z) / pyv;
                    worst = worst.max((given_xy - given_y).abs());
                }
            }
        }
        worst
    }

    /// Numeric certificate for `Z ⊥ X | Y`.
    pub fn check_markov(&self) -> bool {
        self.markov_residual() <= T::tolerance(tol::REFORMULATION)
    }
}
