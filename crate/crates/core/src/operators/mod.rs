//! Rational and trigonometric Gaudin operators as exact matrices, the
//! trigonometric KZB operators on truncated series, and the numerical check
//! of the trigonometric limit of the elliptic coefficient functions.

pub mod elliptic;
pub mod gaudin;
pub mod omega;
pub mod series;

pub use elliptic::{decay_exponents, elliptic_limit_check, EllipticCoeffs, LimitResiduals};
pub use gaudin::{gaudin_rational, gaudin_trig, r_matrix};
pub use omega::{casimir, preserves_weights, EndoMap, OmegaData};
pub use series::ZeroWeightOps;
