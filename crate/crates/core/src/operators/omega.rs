//! The invariant tensor Ω split into Cartan and root parts on pairs of
//! tensor factors, and Casimir elements.

use crate::arith::{Matrix, Scalar, SparseMatrix, Q};
use crate::error::Result;
use crate::hwmod::{root_vectors, Rep, RootVector, TensorModule};
use crate::rootsys::Weight;

/// Root-vector matrices on every factor of a tensor module.
#[derive(Clone, Debug)]
pub struct OmegaData {
    pub roots: Vec<RootVector>,
    /// e_α^{(p)} = E_α on factor p, f_α^{(p)} = F_α/c_α on factor p, so that
    /// Ω_α = e_α ⊗ f_α and Ω_{−α} = f_α ⊗ e_α.
    pub e_fac: Vec<Vec<SparseMatrix<Q>>>,
    pub f_fac: Vec<Vec<SparseMatrix<Q>>>,
    pub n: usize,
    pub dim: usize,
    /// Factor weights per basis index.
    factor_weights: Vec<Vec<Weight>>,
    rs: crate::rootsys::RootSystem,
}

impl OmegaData {
    pub fn new(v: &TensorModule) -> Result<Self> {
        let rs = v.rep.rs.clone();
        let roots = root_vectors(&rs)?;
        let n = v.n_factors();
        let mut e_fac = Vec::with_capacity(n);
        let mut f_fac = Vec::with_capacity(n);
        for p in 0..n {
            let rep = &v.factors[p].rep;
            let mut es = Vec::new();
            let mut fs = Vec::new();
            for rv in &roots {
                let inv_c = Q::from_integer(1.into()) / &rv.c;
                es.push(v.embed_factor(p, &rep.e_poly_matrix(&rv.e)));
                fs.push(v.embed_factor(p, &rep.f_poly_matrix(&rv.f).scale(&inv_c)));
            }
            e_fac.push(es);
            f_fac.push(fs);
        }
        let factor_weights =
            (0..v.dim()).map(|idx| (0..n).map(|p| v.factor_weight(idx, p).clone()).collect()).collect();
        Ok(OmegaData { roots, e_fac, f_fac, n, dim: v.dim(), factor_weights, rs })
    }

    /// Ω₀^{(p,s)}: acts on a basis tuple by (λ_p, λ_s).
    pub fn omega0(&self, p: usize, s: usize) -> SparseMatrix<Q> {
        SparseMatrix::diagonal(
            self.factor_weights.iter().map(|w| self.rs.pairing(&w[p], &w[s])).collect(),
        )
    }

    /// Σ_{α>0} Ω_α^{(p,s)}
    pub fn omega_pos(&self, p: usize, s: usize) -> SparseMatrix<Q> {
        let mut acc = SparseMatrix::zeros(self.dim, self.dim);
        for k in 0..self.roots.len() {
            acc = acc.plus(&self.e_fac[p][k].compose(&self.f_fac[s][k]));
        }
        acc
    }

    /// Σ_{α>0} Ω_{−α}^{(p,s)}
    pub fn omega_neg(&self, p: usize, s: usize) -> SparseMatrix<Q> {
        let mut acc = SparseMatrix::zeros(self.dim, self.dim);
        for k in 0..self.roots.len() {
            acc = acc.plus(&self.f_fac[p][k].compose(&self.e_fac[s][k]));
        }
        acc
    }

    /// Ω_α^{(p,s)} − Ω_{−α}^{(p,s)} for the k-th positive root.
    pub fn omega_diff(&self, p: usize, s: usize, k: usize) -> SparseMatrix<Q> {
        self.e_fac[p][k].compose(&self.f_fac[s][k]).minus(&self.f_fac[p][k].compose(&self.e_fac[s][k]))
    }

    pub fn omega(&self, p: usize, s: usize) -> SparseMatrix<Q> {
        self.omega0(p, s).plus(&self.omega_pos(p, s)).plus(&self.omega_neg(p, s))
    }

    /// Ω₊ = ½Ω₀ + Σ_{α>0} Ω_α
    pub fn omega_plus(&self, p: usize, s: usize) -> SparseMatrix<Q> {
        self.omega0(p, s).scale(&half()).plus(&self.omega_pos(p, s))
    }

    /// Ω₋ = ½Ω₀ + Σ_{α>0} Ω_{−α}
    pub fn omega_minus(&self, p: usize, s: usize) -> SparseMatrix<Q> {
        self.omega0(p, s).scale(&half()).plus(&self.omega_neg(p, s))
    }

    /// Casimir of factor p.
    pub fn casimir_factor(&self, p: usize) -> SparseMatrix<Q> {
        let mut acc = self.omega0(p, p);
        for k in 0..self.roots.len() {
            let ef = self.e_fac[p][k].compose(&self.f_fac[p][k]);
            let fe = self.f_fac[p][k].compose(&self.e_fac[p][k]);
            acc = acc.plus(&ef).plus(&fe);
        }
        acc
    }

    /// Casimir of the diagonal action on factors p and s together.
    pub fn casimir_pair(&self, p: usize, s: usize) -> SparseMatrix<Q> {
        let diag: Vec<Q> = self
            .factor_weights
            .iter()
            .map(|w| {
                let t = &w[p] + &w[s];
                self.rs.pairing(&t, &t)
            })
            .collect();
        let mut acc = SparseMatrix::diagonal(diag);
        for k in 0..self.roots.len() {
            let e = self.e_fac[p][k].plus(&self.e_fac[s][k]);
            let f = self.f_fac[p][k].plus(&self.f_fac[s][k]);
            acc = acc.plus(&e.compose(&f)).plus(&f.compose(&e));
        }
        acc
    }

    /// C_α summed over positive roots of the total action, per root:
    /// e_α e_{−α} + e_{−α} e_α.
    pub fn total_root_casimirs(&self) -> Vec<SparseMatrix<Q>> {
        (0..self.roots.len())
            .map(|k| {
                let mut e = SparseMatrix::zeros(self.dim, self.dim);
                let mut f = SparseMatrix::zeros(self.dim, self.dim);
                for p in 0..self.n {
                    e = e.plus(&self.e_fac[p][k]);
                    f = f.plus(&self.f_fac[p][k]);
                }
                e.compose(&f).plus(&f.compose(&e))
            })
            .collect()
    }

    /// h-element dual to ξ acting on factor p: (ξ, λ_p).
    pub fn cartan_on_factor(&self, xi: &Weight, p: usize) -> SparseMatrix<Q> {
        SparseMatrix::diagonal(self.factor_weights.iter().map(|w| self.rs.pairing(xi, &w[p])).collect())
    }
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

/// Casimir of a single representation: (λ,λ) on weights plus Σ (EF + FE)/c.
pub fn casimir(rep: &Rep) -> Result<SparseMatrix<Q>> {
    let roots = root_vectors(&rep.rs)?;
    let mut acc = SparseMatrix::diagonal(rep.weights.iter().map(|w| rep.rs.pairing(w, w)).collect());
    for rv in &roots {
        let e = rep.e_poly_matrix(&rv.e);
        let f = rep.f_poly_matrix(&rv.f).scale(&(Q::from_integer(1.into()) / &rv.c));
        acc = acc.plus(&e.compose(&f)).plus(&f.compose(&e));
    }
    Ok(acc)
}

/// An operator restricted to one weight space.
#[derive(Clone, Debug)]
pub struct EndoMap<T> {
    pub nu: Weight,
    pub indices: Vec<usize>,
    pub matrix: Matrix<T>,
}

impl<T: Scalar> EndoMap<T> {
    pub fn restrict(rep: &Rep, m: &SparseMatrix<T>, nu: &Weight) -> Self {
        let indices = rep.weight_space(nu);
        let matrix = m.restrict(&indices, &indices);
        EndoMap { nu: nu.clone(), indices, matrix }
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }
}

/// Whether an operator maps V[ν] into V[ν] for every ν.
pub fn preserves_weights<T: Scalar>(rep: &Rep, m: &SparseMatrix<T>) -> bool {
    (0..m.rows()).all(|i| m.row_entries(i).all(|(j, x)| x.is_zero() || rep.weights[i] == rep.weights[j]))
}
