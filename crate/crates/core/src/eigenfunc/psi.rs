//! Eigenfunctions ψ_u^ξ = e^{2πiξ(λ)} Σ_j A_X(F_j) u_j built from the
//! singular vector Ξ(ξ−ρ)(1 ⊗ u), and the independent order-by-order
//! solution of H₀ψ = πi(ξ,ξ)ψ.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::{Scalar, C64, Q};
use crate::error::{Error, Result};
use crate::hwmod::{xi_expand, Rep};
use crate::operators::series::ZeroWeightOps;
use crate::rootsys::{lattice_of_height, lattice_scale, lattice_sub, Lattice, RootSystem, Weight};

use super::ax::{a_x, DEFAULT_MAX_LEN};
use super::series::{RationalTerm, VectorSeries};

/// Finite sum Σ term(X) · vector with V[0]-coordinate vectors.
#[derive(Clone, Debug)]
pub struct EigenFunction<T> {
    pub xi: Weight,
    pub dim: usize,
    pub terms: Vec<(RationalTerm, Vec<T>)>,
}

impl<T: Scalar> EigenFunction<T> {
    fn grouped(xi: &Weight, dim: usize, raw: Vec<(RationalTerm, Vec<T>)>) -> Self {
        let mut by_shape: BTreeMap<(Lattice, Vec<Lattice>), Vec<T>> = BTreeMap::new();
        for (t, v) in raw {
            let e = by_shape.entry(t.shape()).or_insert_with(|| vec![T::zero(); dim]);
            let c = T::from_q(&t.coef);
            for (a, b) in e.iter_mut().zip(v) {
                *a = a.clone() + c.clone() * b;
            }
        }
        let terms = by_shape
            .into_iter()
            .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
            .map(|((num, dens), v)| (RationalTerm { coef: Q::from_integer(1.into()), num, dens }, v))
            .collect();
        EigenFunction { xi: xi.clone(), dim, terms }
    }

    pub fn rank(&self) -> usize {
        self.xi.rank()
    }

    /// Value at X = 0.
    pub fn leading(&self) -> Vec<T> {
        let mut acc = vec![T::zero(); self.dim];
        for (t, v) in &self.terms {
            if t.num.iter().all(|&x| x == 0) {
                let c = T::from_q(&t.coef);
                for (a, b) in acc.iter_mut().zip(v) {
                    *a = a.clone() + c.clone() * b.clone();
                }
            }
        }
        acc
    }

    fn expand_terms(&self, terms: &[(RationalTerm, Vec<T>)], order: i64) -> Result<VectorSeries<T>> {
        let grade = vec![1; self.rank()];
        let mut out = VectorSeries::new(&self.xi, order, self.dim);
        for (t, v) in terms {
            for (e, c) in t.expand(&grade, order)? {
                let c = T::from_q(&c);
                let w: Vec<T> = v.iter().map(|x| c.clone() * x.clone()).collect();
                out.add_to(&e, &w);
            }
        }
        Ok(out)
    }

    /// Taylor expansion in X through height `order`.
    pub fn series(&self, order: i64) -> Result<VectorSeries<T>> {
        self.expand_terms(&self.terms, order)
    }

    /// The terms of φ(X^{-1}), regular at X = 0.
    pub fn inverted_terms(&self) -> Vec<(RationalTerm, Vec<T>)> {
        self.terms.iter().map(|(t, v)| (t.inverted(), v.clone())).collect()
    }

    /// Taylor expansion of φ(X^{-1}) around X = 0.
    pub fn inverted_series(&self, order: i64) -> Result<VectorSeries<T>> {
        self.expand_terms(&self.inverted_terms(), order)
    }

    pub fn to_c64(&self) -> EigenFunction<C64> {
        EigenFunction {
            xi: self.xi.clone(),
            dim: self.dim,
            terms: self.terms.iter().map(|(t, v)| (t.clone(), v.iter().map(|x| x.to_c64()).collect())).collect(),
        }
    }

    /// Σ_k coef_k ψ_k over eigenfunctions with a common exponent.
    pub fn combine(parts: &[(T, &EigenFunction<T>)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("empty combination".into()))?.1;
        let mut raw = Vec::new();
        for (c, f) in parts {
            if f.xi != first.xi || f.dim != first.dim {
                return Err(Error::InvalidInput("eigenfunctions with different exponents".into()));
            }
            for (t, v) in &f.terms {
                raw.push((t.clone(), v.iter().map(|x| c.clone() * x.clone()).collect()));
            }
        }
        Ok(Self::grouped(&first.xi, first.dim, raw))
    }
}

impl<T: Scalar> EigenFunction<T> {
    /// φ(X) at a numeric point.
    pub fn eval(&self, x: &[C64]) -> Vec<C64> {
        eval_terms(&self.terms, self.dim, x)
    }

    /// φ(X^{-1}) at a numeric point, through the regularized factors.
    pub fn eval_inverted(&self, x: &[C64]) -> Vec<C64> {
        eval_terms(&self.inverted_terms(), self.dim, x)
    }

    /// Smallest denominator |1 − X^γ| met by either evaluator.
    pub fn min_denominator(&self, x: &[C64]) -> f64 {
        self.terms.iter().map(|(t, _)| t.min_denominator(x)).fold(f64::INFINITY, f64::min)
    }
}

fn eval_terms<T: Scalar>(terms: &[(RationalTerm, Vec<T>)], dim: usize, x: &[C64]) -> Vec<C64> {
    let mut acc = vec![C64::zero(); dim];
    for (t, v) in terms {
        let s = t.eval(x);
        for (a, b) in acc.iter_mut().zip(v) {
            *a += s * b.to_c64();
        }
    }
    acc
}

/// Nonzero β in the support with (ξ−β, ξ−β) = (ξ, ξ).
pub fn resonance(rs: &RootSystem, xi: &Weight, betas: &[Lattice]) -> Option<Lattice> {
    betas.iter().find(|b| {
        if b.iter().all(|&x| x == 0) {
            return false;
        }
        let bw = Weight::from_ints(b);
        rs.pairing(&bw, &bw) == rs.pairing(xi, &bw).clone() * Q::from_integer(2.into())
    }).cloned()
}

/// Precomputed ψ_{e_k}^ξ for the V[0] basis, so that ψ_u^ξ = Σ u_k ψ_{e_k}^ξ
/// for complex u.
#[derive(Clone, Debug)]
pub struct PsiMap {
    pub xi: Weight,
    pub basis: Vec<EigenFunction<Q>>,
}

impl PsiMap {
    pub fn new(rs: &RootSystem, rep: &Rep, xi: &Weight) -> Result<Self> {
        let d = rep.weight_space(&Weight::zero(rs.rank())).len();
        let basis = (0..d)
            .map(|k| {
                let mut u = vec![Q::zero(); d];
                u[k] = Q::from_integer(1.into());
                psi(rs, rep, xi, &u)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PsiMap { xi: xi.clone(), basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn apply_c64(&self, u: &[C64]) -> Result<EigenFunction<C64>> {
        let lifted: Vec<EigenFunction<C64>> = self.basis.iter().map(|f| f.to_c64()).collect();
        let parts: Vec<(C64, &EigenFunction<C64>)> = u.iter().cloned().zip(lifted.iter()).collect();
        EigenFunction::combine(&parts)
    }

    pub fn apply_q(&self, u: &[Q]) -> Result<EigenFunction<Q>> {
        let parts: Vec<(Q, &EigenFunction<Q>)> = u.iter().cloned().zip(self.basis.iter()).collect();
        EigenFunction::combine(&parts)
    }
}

/// ψ_u^ξ for u given by coordinates on V[0]. Words F_j from Ξ(ξ−ρ)(1 ⊗ u)
/// are expanded by A_X and applied to u_j.
pub fn psi(rs: &RootSystem, rep: &Rep, xi: &Weight, u: &[Q]) -> Result<EigenFunction<Q>> {
    let zero = Weight::zero(rs.rank());
    let idx = rep.weight_space(&zero);
    if u.len() != idx.len() {
        return Err(Error::InvalidInput(format!("u has {} coordinates, V[0] has dimension {}", u.len(), idx.len())));
    }
    let support = rep.raising_support(&zero);
    if let Some(b) = resonance(rs, xi, &support) {
        return Err(Error::Singular(format!("(xi - beta, xi - beta) = (xi, xi) at beta = {b:?}")));
    }
    let mu = xi - rs.rho();
    let full = rep.embed(&zero, u);
    let terms = xi_expand(rs, rep, &mu, &zero, &full)?;
    let mut raw = Vec::new();
    for t in terms {
        for (w, rt) in a_x(&t.word, rs.rank(), DEFAULT_MAX_LEN)? {
            let img = rep.f_word(&w, &t.vector);
            let v = rep.extract(&zero, &img);
            if v.iter().any(|x| !x.is_zero()) {
                raw.push((rt, v));
            }
        }
    }
    Ok(EigenFunction::grouped(xi, idx.len(), raw))
}

/// Coefficients of ψ_u^ξ through height `order` from
/// [(ξ−β)² − ξ²] c_β = Σ_{α>0} Σ_{n≥1} n C_α c_{β−nα}, c_0 = u.
pub fn psi_series_recursive<T: Scalar>(ops: &ZeroWeightOps, xi: &Weight, u: &[T], order: i64) -> Result<VectorSeries<T>> {
    let rs = &ops.rs;
    if u.len() != ops.dim() {
        return Err(Error::InvalidInput(format!("u has {} coordinates, V[0] has dimension {}", u.len(), ops.dim())));
    }
    let mats: Vec<(Lattice, crate::arith::Matrix<T>)> =
        ops.casimirs.iter().map(|(a, m)| (a.clone(), m.map(T::from_q))).collect();
    let mut out = VectorSeries::new(xi, order, ops.dim());
    out.add_to(&vec![0; rs.rank()], u);
    let xi2 = rs.pairing(xi, xi);
    for h in 1..=order {
        for beta in lattice_of_height(rs.rank(), h) {
            let mut rhs = vec![T::zero(); ops.dim()];
            for (alpha, m) in &mats {
                let mut n = 1;
                loop {
                    let b = lattice_sub(&beta, &lattice_scale(alpha, n));
                    if b.iter().any(|&x| x < 0) {
                        break;
                    }
                    if let Some(c) = out.coeffs.get(&b) {
                        let w = T::from_q(&Q::from_integer(n.into()));
                        for (a, x) in rhs.iter_mut().zip(m.mul_vec(c)) {
                            *a = a.clone() + w.clone() * x;
                        }
                    }
                    n += 1;
                }
            }
            let shifted = xi - &Weight::from_ints(&beta);
            let div = rs.pairing(&shifted, &shifted) - &xi2;
            if div.is_zero() {
                return Err(Error::Singular(format!("(xi - beta, xi - beta) = (xi, xi) at beta = {beta:?}")));
            }
            if rhs.iter().all(|x| x.is_zero()) {
                continue;
            }
            let inv = T::from_q(&(Q::from_integer(1.into()) / div));
            let c: Vec<T> = rhs.into_iter().map(|x| x * inv.clone()).collect();
            out.add_to(&beta, &c);
        }
    }
    Ok(out)
}
