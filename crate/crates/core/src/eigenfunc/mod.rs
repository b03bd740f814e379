//! Eigenfunctions of the trigonometric KZB operators and their scalar
//! product.

pub mod ax;
pub mod pairing;
pub mod psi;
pub mod series;

pub use ax::{a_x, a_x_factors, bracket_relation_defect, a_x_inverse, a_x_inverse_limit, antipode, descent_exponents, PermutationFactor};
pub use pairing::{pair_constant_term, pair_quadrature, QuadratureResult};
pub use psi::{psi, psi_series_recursive, EigenFunction, PsiMap};
pub use series::{RationalTerm, VectorSeries};
