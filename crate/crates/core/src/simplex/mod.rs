//! Alphabets, points of the probability simplex, joints and channels.
//!
//! Values are immutable once constructed. Probabilities are stored in
//! linear space; labels are strings and indices are an internal detail.

mod alphabet;
mod channel;
mod distribution;
mod joint;
mod triple;

pub use alphabet::Alphabet;
pub use channel::{extend_markov, pushforward, Channel};
pub use distribution::{empirical_from_samples, Distribution, EmpiricalType, NormalizationPolicy};
pub use joint::JointDistribution;
pub use triple::TripleJoint;
