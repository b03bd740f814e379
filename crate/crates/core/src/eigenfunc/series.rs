//! Monomial rational functions coef·X^a / Π(1 − X^γ) and truncated
//! multivariate series with vector coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{Scalar, C64, Q};
use crate::error::{Error, Result};
use crate::rootsys::{lattice_add, lattice_scale, Lattice, Weight};

/// coef · X^{num} / Π_k (1 − X^{dens[k]}) with X^γ = Π_j X_j^{γ_j}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalTerm {
    pub coef: Q,
    pub num: Lattice,
    pub dens: Vec<Lattice>,
}

pub fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RationalTerm {
    pub fn one(rank: usize) -> Self {
        RationalTerm { coef: Q::one(), num: vec![0; rank], dens: vec![] }
    }

    /// Shape key: exponent and sorted denominators.
    pub fn shape(&self) -> (Lattice, Vec<Lattice>) {
        let mut d = self.dens.clone();
        d.sort();
        (self.num.clone(), d)
    }

    /// The same function of X^{-1}, rewritten with denominators 1 − X^γ.
    pub fn inverted(&self) -> Self {
        let mut num: Lattice = self.num.iter().map(|x| -x).collect();
        for g in &self.dens {
            num = lattice_add(&num, g);
        }
        let sign = if self.dens.len().is_multiple_of(2) { Q::one() } else { -Q::one() };
        RationalTerm { coef: &self.coef * sign, num, dens: self.dens.clone() }
    }

    /// Laurent expansion in the region where X^γ is small whenever
    /// grade·γ > 0, keeping exponents of grade ≤ max_grade.
    pub fn expand(&self, grade: &[i64], max_grade: i64) -> Result<BTreeMap<Lattice, Q>> {
        let mut acc: BTreeMap<Lattice, Q> = BTreeMap::new();
        if dot_i(grade, &self.num) <= max_grade {
            acc.insert(self.num.clone(), self.coef.clone());
        }
        for g in &self.dens {
            let s = dot_i(grade, g);
            if s == 0 {
                return Err(Error::InvalidInput(format!("denominator 1 - X^{g:?} has zero grade")));
            }
            // 1/(1−X^γ) = Σ_{n≥0} X^{nγ}, or −Σ_{n≥1} X^{−nγ} on the other side
            let (step, start, sign) = if s > 0 { (g.clone(), 0, Q::one()) } else { (lattice_scale(g, -1), 1, -Q::one()) };
            let sg = s.abs();
            let mut next: BTreeMap<Lattice, Q> = BTreeMap::new();
            for (e, c) in &acc {
                let base = dot_i(grade, e);
                let mut n = start;
                while base + n * sg <= max_grade {
                    let key = lattice_add(e, &lattice_scale(&step, n));
                    let v = next.entry(key).or_insert_with(Q::zero);
                    *v += c * &sign;
                    n += 1;
                }
            }
            next.retain(|_, v| !v.is_zero());
            acc = next;
        }
        Ok(acc)
    }

    /// Numeric value at a point X = (X_1, …, X_r).
    pub fn eval(&self, x: &[C64]) -> C64 {
        let mono = |e: &[i64]| -> C64 { e.iter().zip(x).fold(C64::new(1.0, 0.0), |acc, (&k, xi)| acc * xi.powi(k as i32)) };
        let mut val = mono(&self.num) * crate::arith::q_to_f64(&self.coef);
        for g in &self.dens {
            val /= C64::new(1.0, 0.0) - mono(g);
        }
        val
    }

    /// Smallest |1 − X^γ| over the denominators at a point.
    pub fn min_denominator(&self, x: &[C64]) -> f64 {
        self.dens
            .iter()
            .map(|g| {
                let m = g.iter().zip(x).fold(C64::new(1.0, 0.0), |acc, (&k, xi)| acc * xi.powi(k as i32));
                (C64::new(1.0, 0.0) - m).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Truncated series e^{2πiξ(λ)} Σ_β c_β X^β with V[0]-coordinate vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSeries<T> {
    pub xi: Weight,
    /// Exponents of height ≤ order are exact.
    pub order: i64,
    pub dim: usize,
    pub coeffs: BTreeMap<Lattice, Vec<T>>,
}

impl<T: Scalar> VectorSeries<T> {
    pub fn new(xi: &Weight, order: i64, dim: usize) -> Self {
        VectorSeries { xi: xi.clone(), order, dim, coeffs: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.xi.rank()
    }

    pub fn coeff(&self, beta: &[i64]) -> Vec<T> {
        self.coeffs.get(beta).cloned().unwrap_or_else(|| vec![T::zero(); self.dim])
    }

    pub fn add_to(&mut self, beta: &[i64], v: &[T]) {
        if crate::rootsys::lattice_height(beta) > self.order {
            return;
        }
        let e = self.coeffs.entry(beta.to_vec()).or_insert_with(|| vec![T::zero(); v.len()]);
        for (a, b) in e.iter_mut().zip(v) {
            *a = a.clone() + b.clone();
        }
        if e.iter().all(|x| x.is_zero()) {
            self.coeffs.remove(beta);
        }
    }

    pub fn sub(&self, other: &VectorSeries<T>) -> VectorSeries<T> {
        let mut out = self.clone();
        out.order = self.order.min(other.order);
        for (b, v) in &other.coeffs {
            let neg: Vec<T> = v.iter().map(|x| -x.clone()).collect();
            out.add_to(b, &neg);
        }
        out.coeffs.retain(|b, _| crate::rootsys::lattice_height(b) <= out.order);
        out
    }

    pub fn scale(&self, s: &T) -> VectorSeries<T> {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            for x in v.iter_mut() {
                *x = x.clone() * s.clone();
            }
        }
        out.coeffs.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        out
    }

    /// Largest coefficient magnitude.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.values().flat_map(|v| v.iter().map(|x| x.magnitude())).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|v| v.iter().all(|x| x.is_zero()))
    }
}
