//! Trigonometric KZB operators H₀, H_p acting on truncated series
//! e^{2πiξ(λ)} Σ_β c_β X^β with V[0]-valued coefficients.
//!
//! Both operators are returned in reduced form R with H₀ψ = πi·R and
//! H_pψ = −πi·R, which keeps rational inputs rational.

use num_traits::Zero;

use crate::arith::{Matrix, Scalar, C64, Q};
use crate::eigenfunc::series::VectorSeries;
use crate::error::{Error, Result};
use crate::hwmod::TensorModule;
use crate::rootsys::{lattice_height, lattice_scale, lattice_sub, Lattice, RootSystem, Weight};

use super::omega::OmegaData;

/// Operator data restricted to the zero weight space V[0].
#[derive(Clone, Debug)]
pub struct ZeroWeightOps {
    pub rs: RootSystem,
    pub n: usize,
    /// Indices of V[0] in the tensor basis.
    pub indices: Vec<usize>,
    /// (α, C_α) with C_α = (E_αF_α + F_αE_α)/c_α for the total action.
    pub casimirs: Vec<(Lattice, Matrix<Q>)>,
    /// Ω^{(p,s)} on V[0].
    omega: Vec<Vec<Matrix<Q>>>,
    /// Ω_α^{(p,s)} − Ω_{−α}^{(p,s)} on V[0], per positive root.
    diff: Vec<Vec<Vec<Matrix<Q>>>>,
    /// Factor weights of each V[0] basis vector.
    weights: Vec<Vec<Weight>>,
}

impl ZeroWeightOps {
    pub fn new(v: &TensorModule, om: &OmegaData) -> Self {
        let rs = v.rep.rs.clone();
        let indices = v.rep.weight_space(&Weight::zero(rs.rank()));
        let restrict = |m: &crate::arith::SparseMatrix<Q>| m.restrict(&indices, &indices);
        let casimirs = om
            .total_root_casimirs()
            .iter()
            .zip(&om.roots)
            .map(|(c, rv)| (rv.alpha.clone(), restrict(c)))
            .collect();
        let n = om.n;
        let mut omega = vec![vec![Matrix::zeros(0, 0); n]; n];
        let mut diff = vec![vec![Vec::new(); n]; n];
        for p in 0..n {
            for s in 0..n {
                if p == s {
                    continue;
                }
                omega[p][s] = restrict(&om.omega(p, s));
                diff[p][s] = (0..om.roots.len()).map(|k| restrict(&om.omega_diff(p, s, k))).collect();
            }
        }
        let weights =
            indices.iter().map(|&i| (0..n).map(|p| v.factor_weight(i, p).clone()).collect()).collect();
        ZeroWeightOps { rs, n, indices, casimirs, omega, diff, weights }
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    fn check<T: Scalar>(&self, psi: &VectorSeries<T>) -> Result<()> {
        if psi.dim != self.dim() || psi.coeffs.values().any(|v| v.len() != self.dim()) {
            return Err(Error::InvalidInput(format!(
                "series coefficients must lie in V[0] of dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Σ_{α>0} Σ_{n≥1} w(n) M_α c_{β−nα}, the shared shape of the potential terms.
    fn potential<T: Scalar>(
        &self,
        psi: &VectorSeries<T>,
        beta: &[i64],
        mats: &[(Lattice, Matrix<T>)],
        weight: impl Fn(i64) -> T,
    ) -> Vec<T> {
        let mut acc = vec![T::zero(); self.dim()];
        for (alpha, m) in mats {
            let mut k = 1;
            loop {
                let b = lattice_sub(beta, &lattice_scale(alpha, k));
                if b.iter().any(|&x| x < 0) {
                    break;
                }
                if let Some(c) = psi.coeffs.get(&b) {
                    let w = weight(k);
                    for (a, x) in acc.iter_mut().zip(m.mul_vec(c)) {
                        *a = a.clone() + w.clone() * x;
                    }
                }
                k += 1;
            }
        }
        acc
    }

    /// Exponents that can carry a nonzero output coefficient.
    fn output_support<T: Scalar>(&self, psi: &VectorSeries<T>) -> Vec<Lattice> {
        let roots: Vec<Lattice> = self.casimirs.iter().map(|(a, _)| a.clone()).collect();
        let mut out: std::collections::BTreeSet<Lattice> = psi.coeffs.keys().cloned().collect();
        let mut frontier: Vec<Lattice> = out.iter().cloned().collect();
        while let Some(b) = frontier.pop() {
            for a in &roots {
                let nb = crate::rootsys::lattice_add(&b, a);
                if lattice_height(&nb) <= psi.order && out.insert(nb.clone()) {
                    frontier.push(nb);
                }
            }
        }
        out.into_iter().collect()
    }

    /// R with H₀ψ = πi·R:
    /// R_β = (ξ−β, ξ−β) c_β − Σ_{α>0} Σ_{n≥1} n C_α c_{β−nα}.
    pub fn h0_reduced<T: Scalar>(&self, psi: &VectorSeries<T>) -> Result<VectorSeries<T>> {
        self.check(psi)?;
        let mats: Vec<(Lattice, Matrix<T>)> =
            self.casimirs.iter().map(|(a, m)| (a.clone(), m.map(T::from_q))).collect();
        let mut out = VectorSeries::new(&psi.xi, psi.order, self.dim());
        for beta in self.output_support(psi) {
            let shifted = &psi.xi - &Weight::from_ints(&beta);
            let lap = T::from_q(&self.rs.pairing(&shifted, &shifted));
            let mut r: Vec<T> = psi.coeff(&beta).into_iter().map(|x| lap.clone() * x).collect();
            let pot = self.potential(psi, &beta, &mats, |n| T::from_q(&Q::from_integer(n.into())));
            for (a, x) in r.iter_mut().zip(pot) {
                *a = a.clone() - x;
            }
            out.add_to(&beta, &r);
        }
        Ok(out)
    }

    /// R with H_pψ = −πi·R, where
    /// R_β = 2(ξ−β, λ_p) c_β + Σ_{s≠p} [(Z_p+Z_s)/(Z_p−Z_s) Ω c_β
    ///       + Σ_{α>0} D_α (c_β + 2 Σ_{n≥1} c_{β−nα})].
    pub fn hp_reduced<T: Scalar>(&self, psi: &VectorSeries<T>, zs: &[T], p: usize) -> Result<VectorSeries<T>> {
        self.check(psi)?;
        if zs.len() != self.n || p >= self.n {
            return Err(Error::InvalidInput(format!("{} points for {} factors, p = {p}", zs.len(), self.n)));
        }
        for a in 0..self.n {
            for b in 0..a {
                if (zs[a].clone() - zs[b].clone()).is_zero() {
                    return Err(Error::Singular(format!("points {b} and {a} coincide")));
                }
            }
        }
        let d = self.dim();
        // constant part Σ_s [(Z_p+Z_s)/(Z_p−Z_s) Ω + Σ_α D_α]
        let mut constant = Matrix::<T>::zeros(d, d);
        let mut mats: Vec<(Lattice, Matrix<T>)> =
            self.casimirs.iter().map(|(a, _)| (a.clone(), Matrix::zeros(d, d))).collect();
        for s in 0..self.n {
            if s == p {
                continue;
            }
            let w = (zs[p].clone() + zs[s].clone()) / (zs[p].clone() - zs[s].clone());
            constant = &constant + &self.omega[p][s].map(|x| T::from_q(x) * w.clone());
            for (k, dm) in self.diff[p][s].iter().enumerate() {
                let dt = dm.map(T::from_q);
                constant = &constant + &dt;
                mats[k].1 = &mats[k].1 + &dt;
            }
        }
        let two = T::from_q(&Q::from_integer(2.into()));
        let mut out = VectorSeries::new(&psi.xi, psi.order, d);
        for beta in self.output_support(psi) {
            let shifted = &psi.xi - &Weight::from_ints(&beta);
            let c = psi.coeff(&beta);
            let mut r = constant.mul_vec(&c);
            for (k, a) in r.iter_mut().enumerate() {
                let lam = T::from_q(&self.rs.pairing(&shifted, &self.weights[k][p]));
                *a = a.clone() + two.clone() * lam * c[k].clone();
            }
            let pot = self.potential(psi, &beta, &mats, |_| two.clone());
            for (a, x) in r.iter_mut().zip(pot) {
                *a = a.clone() + x;
            }
            out.add_to(&beta, &r);
        }
        Ok(out)
    }

    /// H₀ψ with the πi factor applied.
    pub fn h0_apply(&self, psi: &VectorSeries<C64>) -> Result<VectorSeries<C64>> {
        Ok(self.h0_reduced(psi)?.scale(&C64::new(0.0, std::f64::consts::PI)))
    }

    /// H_pψ with the −πi factor applied.
    pub fn hp_apply(&self, psi: &VectorSeries<C64>, zs: &[C64], p: usize) -> Result<VectorSeries<C64>> {
        Ok(self.hp_reduced(psi, zs, p)?.scale(&C64::new(0.0, -std::f64::consts::PI)))
    }

    /// Σ_{p,s} Ω₀^{(p,s)} on V[0]: (Σ_p λ_p, Σ_s λ_s) = 0 on every basis vector.
    /// Multiplication part of H₀ on V[0] at the point λ with α_j(λ) = y_j:
    /// −(1/4πi) Σ_{α>0} π²/sin²(πα(λ)) C_α.
    pub fn h0_potential(&self, y: &[C64]) -> Matrix<C64> {
        let pi = std::f64::consts::PI;
        let d = self.dim();
        let mut acc = Matrix::zeros(d, d);
        let pref = C64::new(0.0, pi / 4.0);
        for (alpha, c) in &self.casimirs {
            let a: C64 = alpha.iter().zip(y).map(|(&k, v)| v * k as f64).sum();
            let w = pref / (a * pi).sin().powi(2);
            acc = &acc + &c.to_c64().scale(&w);
        }
        acc
    }

    /// Multiplication part of H_p on V[0] at λ (α_j(λ) = y_j) and points z:
    /// π Σ_{s≠p} [cot π(z_p − z_s) Ω − Σ_{α>0} cot πα(λ) (Ω_α − Ω_{−α})].
    pub fn hp_potential(&self, z: &[C64], y: &[C64], p: usize) -> Matrix<C64> {
        let pi = std::f64::consts::PI;
        let cot = |x: C64| (x * pi).cos() / (x * pi).sin();
        let d = self.dim();
        let mut acc = Matrix::zeros(d, d);
        for s in 0..self.n {
            if s == p {
                continue;
            }
            acc = &acc + &self.omega[p][s].to_c64().scale(&(cot(z[p] - z[s]) * pi));
            for (k, (alpha, _)) in self.casimirs.iter().enumerate() {
                let a: C64 = alpha.iter().zip(y).map(|(&m, v)| v * m as f64).sum();
                acc = &acc - &self.diff[p][s][k].to_c64().scale(&(cot(a) * pi));
            }
        }
        acc
    }

    pub fn omega0_total_on_zero(&self) -> Vec<Q> {
        self.weights
            .iter()
            .map(|ws| {
                let mut acc = Q::zero();
                for a in ws {
                    for b in ws {
                        acc += self.rs.pairing(a, b);
                    }
                }
                acc
            })
            .collect()
    }
}
