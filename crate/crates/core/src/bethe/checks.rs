//! Evaluation helpers shared by the norm and eigenvector checks.

use crate::arith::{Scalar, SparseMatrix, C64, Q};
use crate::error::Result;
use crate::hwmod::{form_xi_matrix, Rep};
use crate::rootsys::{RootSystem, Weight};

/// ⟨u, v⟩_ξ for complex u, v ∈ V[ν] given on the full space.
pub fn xi_form_c64(rs: &RootSystem, rep: &Rep, xi: &Weight, nu: &Weight, u: &[C64], v: &[C64]) -> Result<C64> {
    let m = form_xi_matrix(rs, rep, xi, nu)?.to_c64();
    let (a, b) = (rep.extract(nu, u), rep.extract(nu, v));
    Ok(crate::arith::dot(&a, &m.mul_vec(&b)))
}

#[derive(Clone, Debug)]
pub struct EigenResidual {
    /// Rayleigh quotient ū·Ku / ū·u.
    pub eigenvalue: C64,
    /// ‖Ku − εu‖ / ‖u‖
    pub residual: f64,
}

pub fn eigen_residual(op: &SparseMatrix<Q>, u: &[C64]) -> EigenResidual {
    let ku: Vec<C64> = crate::hwmod::module::apply_q(op, u);
    let num: C64 = u.iter().zip(&ku).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = u.iter().map(|a| a.norm_sqr()).sum();
    let eigenvalue = num / den;
    let r: Vec<C64> = ku.iter().zip(u).map(|(k, x)| k - eigenvalue * x).collect();
    EigenResidual { eigenvalue, residual: crate::arith::norm2(&r) / den.sqrt() }
}

/// Same for an operator with complex entries.
pub fn eigen_residual_c64(op: &SparseMatrix<C64>, u: &[C64]) -> EigenResidual {
    let ku = op.apply(u);
    let num: C64 = u.iter().zip(&ku).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = u.iter().map(|a| a.norm_sqr()).sum();
    let eigenvalue = num / den;
    let r: Vec<C64> = ku.iter().zip(u).map(|(k, x)| k - eigenvalue * x).collect();
    EigenResidual { eigenvalue, residual: crate::arith::norm2(&r) / den.sqrt() }
}

/// |a − b| / max(|a|, |b|, floor).
pub fn rel_err<T: Scalar>(a: &T, b: &T, floor: f64) -> f64 {
    let d = (a.clone() - b.clone()).magnitude();
    d / a.magnitude().max(b.magnitude()).max(floor)
}
