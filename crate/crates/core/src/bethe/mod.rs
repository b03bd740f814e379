//! Bethe ansatz: master functions, their critical points and the weight
//! functions whose values there are the Gaudin eigenvectors.

pub mod checks;
pub mod master;
pub mod solver;
pub mod weight;

pub use checks::{eigen_residual, eigen_residual_c64, rel_err, xi_form_c64, EigenResidual};
pub use master::{master_grad, master_hess, master_hess_det, master_z_partial, trig_eigenvalue, MasterKind, MasterSpec};
pub use solver::{orbit_key, solve_critical, CriticalPoint, SolverOptions};
pub use weight::{weight_fn, weight_fn_verma};
