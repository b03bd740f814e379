//! Rational and trigonometric Gaudin operators.

use crate::arith::{Scalar, SparseMatrix};
use crate::error::{Error, Result};
use crate::rootsys::Weight;

use super::omega::OmegaData;

fn lift<T: Scalar>(m: &SparseMatrix<crate::arith::Q>) -> SparseMatrix<T> {
    m.map(T::from_q)
}

fn check_distinct<T: Scalar>(z: &[T]) -> Result<()> {
    for a in 0..z.len() {
        for b in 0..a {
            if (z[a].clone() - z[b].clone()).is_zero() {
                return Err(Error::Singular(format!("points {b} and {a} coincide")));
            }
        }
    }
    Ok(())
}

/// K_p(z) = Σ_{s≠p} Ω^{(p,s)}/(z_p − z_s)
pub fn gaudin_rational<T: Scalar>(om: &OmegaData, z: &[T], p: usize) -> Result<SparseMatrix<T>> {
    if z.len() != om.n {
        return Err(Error::InvalidInput(format!("{} points for {} factors", z.len(), om.n)));
    }
    check_distinct(z)?;
    let mut acc = SparseMatrix::zeros(om.dim, om.dim);
    for s in 0..om.n {
        if s == p {
            continue;
        }
        let w = T::one() / (z[p].clone() - z[s].clone());
        acc = acc.axpy(&w, &lift(&om.omega(p, s)));
    }
    Ok(acc)
}

/// r(x) = (Ω₊x + Ω₋)/(x − 1) on factors (p, s).
pub fn r_matrix<T: Scalar>(om: &OmegaData, p: usize, s: usize, x: &T) -> Result<SparseMatrix<T>> {
    let d = x.clone() - T::one();
    if d.is_zero() {
        return Err(Error::Singular("r-matrix evaluated at x = 1".into()));
    }
    let plus: SparseMatrix<T> = lift(&om.omega_plus(p, s));
    let minus: SparseMatrix<T> = lift(&om.omega_minus(p, s));
    Ok(plus.scale(x).plus(&minus).scale(&(T::one() / d)))
}

/// 𝒦_p(Z, ξ) = ξ^{(p)} + Σ_{s≠p} r^{(p,s)}(Z_p/Z_s)
pub fn gaudin_trig<T: Scalar>(om: &OmegaData, zs: &[T], xi: &Weight, p: usize) -> Result<SparseMatrix<T>> {
    if zs.len() != om.n {
        return Err(Error::InvalidInput(format!("{} points for {} factors", zs.len(), om.n)));
    }
    check_distinct(zs)?;
    if zs.iter().any(|z| z.is_zero()) {
        return Err(Error::Singular("trigonometric points must be nonzero".into()));
    }
    let mut acc: SparseMatrix<T> = lift(&om.cartan_on_factor(xi, p));
    for s in 0..om.n {
        if s == p {
            continue;
        }
        let x = zs[p].clone() / zs[s].clone();
        acc = acc.plus(&r_matrix(om, p, s, &x)?);
    }
    Ok(acc)
}
