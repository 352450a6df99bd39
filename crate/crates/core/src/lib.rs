//! Zeros of the Airy function from the implicit resurgent series `X(t)`.
//!
//! The `l`-th zero is `k_l = −x_l^{2/3}` with `x_l = s₀X((3/2)(l − 1/4)π)`, where
//! `X = t + (3/2)φ(X)` and `φ` is the phase of the large-argument Airy expansion. The crate
//! builds the exact formal series of `X` and its alien derivatives, then resums it either by a
//! convergent factorial series or by hyperasymptotics up to level 2, and checks both against an
//! independent high-precision Airy evaluator.

pub mod airy_oracle;
pub mod estimate;
pub mod exact_series;
pub mod factorial_sum;
pub mod hyperasymptotics;
pub mod mp_numerics;
pub mod resurgent_airy;
pub mod tables;

pub use estimate::{Method, Params, ZeroEstimate, ZeroRecord};
pub use exact_series::{FormalSeries, GaussianRational, SeriesError};
pub use mp_numerics::{BigComplex, BigReal, NumericError, DEFAULT_PRECISION};
pub use resurgent_airy::{AiryError, AlienCoefficientTable};
