//! Information theory on finite alphabets.
//!
//! Distributions, joints and channels live in [`simplex`]; divergence,
//! entropy and mutual information in [`measures`]. The remaining modules
//! are small laboratories built on those: exact type enumeration and
//! Chernoff bounds ([`types_lab`]), likelihood fitting ([`mle`]), the
//! prediction game ([`scoring`]) and the data processing inequality
//! ([`dpi`]).
//!
//! Everything numeric is generic over [`Scalar`], implemented for `f32`
//! and `f64`. The aliases below fix the scalar for the common case.
//!
//! ```
//! use infolab::{kl_divergence, Alphabet, Distribution64, NormalizationPolicy};
//!
//! let red = Distribution64::new(Alphabet::suits(), vec![0.0, 0.0, 0.5, 0.5], NormalizationPolicy::Strict)?;
//! let uniform = Distribution64::uniform(Alphabet::suits());
//! let d = kl_divergence(&red, &uniform)?.finite().unwrap();
//! assert!((d - std::f64::consts::LN_2).abs() < 1e-12);
//! # Ok::<(), infolab::Error>(())
//! ```

pub mod dpi;
pub mod error;
pub mod formats;
pub mod measures;
pub mod mle;
pub mod sampling;
pub mod scalar;
pub mod scoring;
pub mod simplex;
pub mod types_lab;

pub use error::{Error, Result};
pub use measures::{
    conditional_entropy, conditional_mutual_information, entropy, joint_entropy, kl_divergence,
    mutual_information, ExtendedReal, LogBase, MiMethod,
};
pub use scalar::Scalar;
pub use simplex::{
    Alphabet, Channel, Distribution, EmpiricalType, JointDistribution, NormalizationPolicy, TripleJoint,
};

pub type Distribution64 = Distribution<f64>;
pub type Distribution32 = Distribution<f32>;
pub type JointDistribution64 = JointDistribution<f64>;
pub type JointDistribution32 = JointDistribution<f32>;
pub type Channel64 = Channel<f64>;
pub type Channel32 = Channel<f32>;
pub type TripleJoint64 = TripleJoint<f64>;
pub type TripleJoint32 = TripleJoint<f32>;
pub type ExtendedReal64 = ExtendedReal<f64>;
