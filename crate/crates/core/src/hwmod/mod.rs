//! Highest weight modules on the free word spanning set of U(n₋), the
//! Shapovalov form, singular vectors Ξ(μ), the operator 𝒬(ξ) and the form
//! ⟨·,·⟩_ξ.

pub mod gram;
pub mod module;
pub mod roots;
pub mod singular;
pub mod verma;
pub mod words;

pub use gram::{gram_block, shapovalov_det_ratio, GramBlock, Shapovalov};
pub use module::{HWModule, Rep, TensorModule};
pub use roots::{root_vectors, RootVector};
pub use singular::{annihilator_test, form_xi, form_xi_matrix, q_apply, q_matrix, shifted_mu, xi_expand, XiTerm};
pub use verma::{VermaTensor, VtVec};
pub use words::{free_e_action, GenPoly, Word, WordComb};
