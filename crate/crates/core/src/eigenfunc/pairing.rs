//! The scalar product of eigenfunctions
//! ⟨ψ₁, ψ₂⟩ = (−2πi)^{−r} ∮ X^b S(φ₁(X), φ₂(X^{−1})) dlog X over |X_j| = ε,
//! where ψ₁ has exponent ξ and ψ₂ has exponent ξ + b.

use crate::arith::{Matrix, Scalar, C64, Q};
use crate::error::{Error, Result};
use crate::hwmod::Rep;
use crate::rootsys::{lattice_height, lattice_sub, Lattice, Weight};

use super::psi::EigenFunction;

fn exponent_gap<T: Scalar>(a: &EigenFunction<T>, b: &EigenFunction<T>) -> Result<Lattice> {
    if a.dim != b.dim || a.rank() != b.rank() {
        return Err(Error::InvalidInput("eigenfunctions on different spaces".into()));
    }
    (&b.xi - &a.xi)
        .as_lattice()
        .ok_or_else(|| Error::InvalidInput("exponents do not differ by a root lattice element".into()))
}

fn zero_gram(rep: &Rep) -> Matrix<Q> {
    rep.restrict(&rep.gram, &Weight::zero(rep.rank()))
}

/// Constant term of X^b S(φ₁(X), φ₂(X^{−1})), both factors expanded as
/// power series at X = 0. Exact for rational data.
pub fn pair_constant_term<T: Scalar>(rep: &Rep, psi1: &EigenFunction<T>, psi2: &EigenFunction<T>) -> Result<T> {
    let b = exponent_gap(psi1, psi2)?;
    // only X^{−b} with −b ∈ Q₊ can pair against a power series
    let target: Lattice = b.iter().map(|x| -x).collect();
    if target.iter().any(|&x| x < 0) {
        return Ok(T::zero());
    }
    let order = lattice_height(&target);
    let s1 = psi1.series(order)?;
    let s2 = psi2.inverted_series(order)?;
    let g = zero_gram(rep).map(T::from_q);
    let mut acc = T::zero();
    for (g1, c1) in &s1.coeffs {
        let g2 = lattice_sub(&target, g1);
        if g2.iter().any(|&x| x < 0) {
            continue;
        }
        if let Some(c2) = s2.coeffs.get(&g2) {
            acc = acc + crate::arith::dot(c1, &g.mul_vec(c2));
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: C64,
    /// |I_{2N} − I_N|
    pub error_estimate: f64,
}

fn torus_mean(
    rep: &Rep,
    psi1: &EigenFunction<C64>,
    psi2: &EigenFunction<C64>,
    b: &[i64],
    eps: f64,
    n: usize,
) -> Result<C64> {
    let r = psi1.rank();
    let g = zero_gram(rep).to_c64();
    let total = n.pow(r as u32);
    let mut acc = C64::new(0.0, 0.0);
    let mut idx = vec![0usize; r];
    for _ in 0..total {
        let x: Vec<C64> =
            idx.iter().map(|&k| C64::from_polar(eps, 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
        let xinv: Vec<C64> = x.iter().map(|z| z.inv()).collect();
        let closest = psi1.min_denominator(&x).min(psi2.min_denominator(&xinv));
        if closest < 1e-8 {
            return Err(Error::Singular(format!("quadrature node within {closest:e} of a pole; choose another radius")));
        }
        let f1 = psi1.eval(&x);
        let f2 = psi2.eval(&xinv);
        let mono = b.iter().zip(&x).fold(C64::new(1.0, 0.0), |m, (&e, z)| m * z.powi(e as i32));
        acc += mono * crate::arith::dot(&f1, &g.mul_vec(&f2));
        for d in idx.iter_mut() {
            *d += 1;
            if *d < n {
                break;
            }
            *d = 0;
        }
    }
    Ok(acc / total as f64)
}

/// Product trapezoidal rule with N and 2N nodes per circle. The mean over
/// the torus equals (−2πi)^{−r} ∮ · dlog X.
pub fn pair_quadrature(
    rep: &Rep,
    psi1: &EigenFunction<C64>,
    psi2: &EigenFunction<C64>,
    eps: f64,
    n: usize,
) -> Result<QuadratureResult> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("radius {eps} outside (0, 1)")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("no quadrature nodes".into()));
    }
    let b = exponent_gap(psi1, psi2)?;
    let coarse = torus_mean(rep, psi1, psi2, &b, eps, n)?;
    let fine = torus_mean(rep, psi1, psi2, &b, eps, 2 * n)?;
    Ok(QuadratureResult { value: fine, error_estimate: (fine - coarse).norm() })
}
