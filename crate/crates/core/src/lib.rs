//! Numerical lower bounds on the edge expansion of random `delta`-regular graphs.
//!
//! - [`entropy`]: closed-form maximiser of the constrained entropy functional `Phi*`.
//! - [`symmetric`]: the balanced-cut exponent `H` and its root `nu*`.
//! - [`asymmetric`]: grid certificate that unbalanced cuts have a negative exponent.
//! - [`baseline`]: the first-moment bound and small-set constants.
//! - [`pairing`]: pairing-model sampling, exact and heuristic expansion, and the
//!   counting identities used by the union bound.
//!
//! The numerical modules are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar type.

// Negated comparisons such as `!(x > 0.0)` are used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymmetric;
pub mod baseline;
pub mod entropy;
mod error;
pub mod pairing;
pub mod poly;
mod scalar;
pub mod symmetric;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `C(n, k)`, exact while it fits in a `u64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

pub type EntropyProblemF64 = entropy::EntropyProblem<f64>;
pub type EntropyProblemF32 = entropy::EntropyProblem<f32>;
pub type EntropySolutionF64 = entropy::EntropySolution<f64>;
pub type EntropySolutionF32 = entropy::EntropySolution<f32>;
pub type NuStarF64 = symmetric::NuStar<f64>;
pub type NuStarF32 = symmetric::NuStar<f32>;
pub type BaselineF64 = baseline::BaselineResult<f64>;
pub type BaselineF32 = baseline::BaselineResult<f32>;
pub type CertifyConfigF64 = asymmetric::CertifyConfig<f64>;
pub type CertifyConfigF32 = asymmetric::CertifyConfig<f32>;
pub type CertificateF64 = asymmetric::Certificate<f64>;
pub type CertificateF32 = asymmetric::Certificate<f32>;
pub type CellBoundF64 = asymmetric::CellBound<f64>;
pub type ExponentPointF64 = asymmetric::ExponentPoint<f64>;
