//! Gaudin and trigonometric KZB operators on tensor products of highest
//! weight modules, their Bethe ansatz eigenvectors and eigenfunctions, and
//! the scalar products under which norms equal master-function Hessians.

pub mod arith;
pub mod bethe;
pub mod eigenfunc;
pub mod error;
pub mod hwmod;
pub mod jack;
pub mod operators;
pub mod rootsys;
pub mod weyl;

pub use error::{Error, Result};
