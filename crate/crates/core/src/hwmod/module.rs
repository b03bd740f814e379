//! Finite-dimensional representations with a weight basis: irreducible
//! highest weight modules realized on words, and their tensor products.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::arith::{Matrix, Scalar, SparseMatrix, Q};
use crate::error::{Error, Result};
use crate::rootsys::{lattice_add, lattice_nonneg, lattice_sub, Lattice, RootSystem, Weight};

use super::gram::Shapovalov;
use super::words::{free_e_action, GenPoly, Word, WordComb};

/// Default cap on the dimension of a realized irreducible module.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// A representation on a weight basis: e_i, f_i as sparse matrices, the
/// weight of each basis vector, and the contravariant form.
#[derive(Clone, Debug)]
pub struct Rep {
    pub rs: RootSystem,
    pub weights: Vec<Weight>,
    pub e: Vec<SparseMatrix<Q>>,
    pub f: Vec<SparseMatrix<Q>>,
    pub gram: SparseMatrix<Q>,
}

impl Rep {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// h_i = α_i^∨ as a diagonal matrix.
    pub fn h(&self, i: usize) -> SparseMatrix<Q> {
        SparseMatrix::diagonal(self.weights.iter().map(|w| self.rs.simple_coroot(w, i)).collect())
    }

    /// Basis indices of V[ν].
    pub fn weight_space(&self, nu: &Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.weights[k] == *nu).collect()
    }

    pub fn distinct_weights(&self) -> Vec<Weight> {
        let mut ws: Vec<Weight> = self.weights.clone();
        ws.sort();
        ws.dedup();
        ws
    }

    /// Nonzero β ∈ Q₊ with V[ν+β] ≠ 0, plus β = 0 first.
    pub fn raising_support(&self, nu: &Weight) -> Vec<Lattice> {
        let mut out = vec![vec![0; self.rank()]];
        let mut rest: Vec<Lattice> = self
            .distinct_weights()
            .iter()
            .filter_map(|w| (w - nu).as_lattice())
            .filter(|b| lattice_nonneg(b) && b.iter().any(|&x| x != 0))
            .collect();
        rest.sort_by_key(|b| (b.iter().sum::<i64>(), b.clone()));
        out.extend(rest);
        out
    }

    pub fn apply<T: Scalar>(&self, m: &SparseMatrix<Q>, v: &[T]) -> Vec<T> {
        apply_q(m, v)
    }

    /// ω(F)v = (−1)^m e_{w0}···e_{w(m−1)} v.
    pub fn omega_word<T: Scalar>(&self, word: &[usize], v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for &i in word.iter().rev() {
            out = apply_q(&self.e[i], &out);
            out.iter_mut().for_each(|x| *x = -x.clone());
        }
        out
    }

    /// a(F)v = (−1)^m f_{w(m−1)}···f_{w0} v.
    pub fn antipode_word<T: Scalar>(&self, word: &[usize], v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for &i in word {
            out = apply_q(&self.f[i], &out);
            out.iter_mut().for_each(|x| *x = -x.clone());
        }
        out
    }

    /// F v = f_{w0}···f_{w(m−1)} v.
    pub fn f_word<T: Scalar>(&self, word: &[usize], v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for &i in word.iter().rev() {
            out = apply_q(&self.f[i], &out);
        }
        out
    }

    pub fn e_poly_matrix(&self, p: &GenPoly) -> SparseMatrix<Q> {
        self.poly_matrix(p, &self.e)
    }

    pub fn f_poly_matrix(&self, p: &GenPoly) -> SparseMatrix<Q> {
        self.poly_matrix(p, &self.f)
    }

    fn poly_matrix(&self, p: &GenPoly, gens: &[SparseMatrix<Q>]) -> SparseMatrix<Q> {
        let n = self.dim();
        let mut acc = SparseMatrix::zeros(n, n);
        for (w, c) in &p.terms {
            let mut m = SparseMatrix::identity(n);
            for &i in w {
                m = m.compose(&gens[i]);
            }
            acc = acc.axpy(c, &m);
        }
        acc
    }

    /// Contravariant form S(u, v).
    pub fn form<T: Scalar>(&self, u: &[T], v: &[T]) -> T {
        let gv = apply_q(&self.gram, v);
        crate::arith::dot(u, &gv)
    }

    /// Restriction of an operator to V[ν] (rows and columns).
    pub fn restrict(&self, m: &SparseMatrix<Q>, nu: &Weight) -> Matrix<Q> {
        let idx = self.weight_space(nu);
        m.restrict(&idx, &idx)
    }

    /// Embed coordinates on V[ν] into the full space.
    pub fn embed<T: Scalar>(&self, nu: &Weight, coords: &[T]) -> Vec<T> {
        let idx = self.weight_space(nu);
        assert_eq!(idx.len(), coords.len());
        let mut v = vec![T::zero(); self.dim()];
        for (k, &i) in idx.iter().enumerate() {
            v[i] = coords[k].clone();
        }
        v
    }

    pub fn extract<T: Scalar>(&self, nu: &Weight, v: &[T]) -> Vec<T> {
        self.weight_space(nu).iter().map(|&i| v[i].clone()).collect()
    }
}

pub fn apply_q<T: Scalar>(m: &SparseMatrix<Q>, v: &[T]) -> Vec<T> {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|i| {
            let mut acc = T::zero();
            for (j, a) in m.row_entries(i) {
                if !v[j].is_zero() {
                    acc = acc + T::from_q(a) * v[j].clone();
                }
            }
            acc
        })
        .collect()
}

/// Irreducible module L_Λ realized on words f_{w} v_Λ.
#[derive(Clone, Debug)]
pub struct HWModule {
    pub highest: Weight,
    pub rep: Rep,
    /// Basis word of each basis vector.
    pub words: Vec<Word>,
    /// Depth β = Λ − weight of each basis vector.
    pub depth: Vec<Lattice>,
}

impl HWModule {
    pub fn irreducible(rs: &RootSystem, lambda: &Weight) -> Result<Self> {
        Self::irreducible_capped(rs, lambda, DEFAULT_DIM_CAP)
    }

    pub fn irreducible_capped(rs: &RootSystem, lambda: &Weight, cap: usize) -> Result<Self> {
        if !rs.is_dominant_integral(lambda) {
            return Err(Error::InvalidInput(format!(
                "highest weight {lambda:?} is not dominant integral; infinite-dimensional quotients are unsupported"
            )));
        }
        let r = rs.rank();
        let mut sh = Shapovalov::new(rs, lambda);
        // depth → (basis words, Gram block on them)
        let mut levels: BTreeMap<Lattice, (Vec<Word>, Matrix<Q>)> = BTreeMap::new();
        levels.insert(vec![0; r], (vec![vec![]], Matrix::identity(1)));
        let mut frontier: Vec<Lattice> = vec![vec![0; r]];
        let mut dim = 1;
        while !frontier.is_empty() {
            let mut candidates: BTreeMap<Lattice, Vec<Word>> = BTreeMap::new();
            for beta in &frontier {
                for i in 0..r {
                    let mut next = beta.clone();
                    next[i] += 1;
                    let entry = candidates.entry(next).or_default();
                    for w in &levels[beta].0 {
                        let mut nw = vec![i];
                        nw.extend(w);
                        if !entry.contains(&nw) {
                            entry.push(nw);
                        }
                    }
                }
            }
            let mut next_frontier = Vec::new();
            for (beta, cands) in candidates {
                let g = sh.gram(&cands, &cands);
                let ech = g.echelon();
                if ech.rank == 0 {
                    continue;
                }
                let basis: Vec<Word> = ech.pivot_cols.iter().map(|&k| cands[k].clone()).collect();
                let gb = g.principal(&ech.pivot_cols);
                dim += basis.len();
                if dim > cap {
                    return Err(Error::Bound(format!("module of highest weight {lambda:?} exceeds dimension cap {cap}")));
                }
                levels.insert(beta.clone(), (basis, gb));
                next_frontier.push(beta);
            }
            frontier = next_frontier;
        }

        // global ordering: by height, then depth vector
        let mut order: Vec<&Lattice> = levels.keys().collect();
        order.sort_by_key(|b| (b.iter().sum::<i64>(), (*b).clone()));
        let mut words = Vec::new();
        let mut depth = Vec::new();
        let mut offset: HashMap<Lattice, usize> = HashMap::new();
        for b in &order {
            offset.insert((*b).clone(), words.len());
            for w in &levels[*b].0 {
                words.push(w.clone());
                depth.push((*b).clone());
            }
        }
        let n = words.len();
        let weights: Vec<Weight> = depth.iter().map(|b| lambda - &Weight::from_ints(b)).collect();
        let inverses: HashMap<Lattice, Matrix<Q>> =
            levels.iter().map(|(b, (_, g))| (b.clone(), g.inverse().expect("nondegenerate on L"))).collect();

        let mut gram = SparseMatrix::zeros(n, n);
        for (b, (ws, g)) in &levels {
            let o = offset[b];
            for a in 0..ws.len() {
                for c in 0..ws.len() {
                    gram.set(o + a, o + c, g[(a, c)].clone());
                }
            }
        }

        let mut e = vec![SparseMatrix::zeros(n, n); r];
        let mut f = vec![SparseMatrix::zeros(n, n); r];
        for col in 0..n {
            let b = &depth[col];
            for i in 0..r {
                // f_i: pair the prepended word against the basis one level down
                let up = lattice_add(b, &unit(r, i));
                if let Some((targets, _)) = levels.get(&up) {
                    let mut word = vec![i];
                    word.extend(&words[col]);
                    let p: Vec<Q> = targets.iter().map(|t| sh.pair(t, &word)).collect();
                    let x = inverses[&up].mul_vec(&p);
                    for (k, val) in x.into_iter().enumerate() {
                        f[i].set(offset[&up] + k, col, val);
                    }
                }
                // e_i: straighten, then re-express through the form
                let down = lattice_sub(b, &unit(r, i));
                if let Some((targets, _)) = levels.get(&down) {
                    let single: WordComb<Q> = [(words[col].clone(), Q::from_integer(1.into()))].into_iter().collect();
                    let img = free_e_action(rs, &single, i, lambda);
                    let p: Vec<Q> = targets
                        .iter()
                        .map(|t| img.iter().fold(Q::zero(), |acc, (w, c)| acc + c * sh.pair(t, w)))
                        .collect();
                    let x = inverses[&down].mul_vec(&p);
                    for (k, val) in x.into_iter().enumerate() {
                        e[i].set(offset[&down] + k, col, val);
                    }
                }
            }
        }
        Ok(HWModule { highest: lambda.clone(), rep: Rep { rs: rs.clone(), weights, e, f, gram }, words, depth })
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn highest_vector<T: Scalar>(&self) -> Vec<T> {
        let mut v = vec![T::zero(); self.dim()];
        v[0] = T::one();
        v
    }
}

fn unit(r: usize, i: usize) -> Lattice {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

/// V₁ ⊗ ··· ⊗ V_n with tuple basis in row-major order.
#[derive(Clone, Debug)]
pub struct TensorModule {
    pub factors: Vec<HWModule>,
    pub rep: Rep,
    dims: Vec<usize>,
    /// Per factor p and generator i: e_i^{(p)}, f_i^{(p)}.
    pub factor_e: Vec<Vec<SparseMatrix<Q>>>,
    pub factor_f: Vec<Vec<SparseMatrix<Q>>>,
}

impl TensorModule {
    pub fn new(factors: Vec<HWModule>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("tensor product needs at least one factor".into()));
        }
        let rs = factors[0].rep.rs.clone();
        if factors.iter().any(|m| m.rep.rs.cartan() != rs.cartan()) {
            return Err(Error::InvalidInput("tensor factors over different root systems".into()));
        }
        let r = rs.rank();
        let dims: Vec<usize> = factors.iter().map(|m| m.dim()).collect();
        let total: usize = dims.iter().product();
        let embed = |p: usize, x: &SparseMatrix<Q>| -> SparseMatrix<Q> {
            let mut acc = SparseMatrix::<Q>::identity(1);
            for (s, d) in dims.iter().enumerate() {
                acc = if s == p { acc.kron(x) } else { acc.kron(&SparseMatrix::identity(*d)) };
            }
            acc
        };
        let factor_e: Vec<Vec<SparseMatrix<Q>>> =
            (0..factors.len()).map(|p| (0..r).map(|i| embed(p, &factors[p].rep.e[i])).collect()).collect();
        let factor_f: Vec<Vec<SparseMatrix<Q>>> =
            (0..factors.len()).map(|p| (0..r).map(|i| embed(p, &factors[p].rep.f[i])).collect()).collect();
        let mut e = vec![SparseMatrix::zeros(total, total); r];
        let mut f = vec![SparseMatrix::zeros(total, total); r];
        for i in 0..r {
            for p in 0..factors.len() {
                e[i] = e[i].plus(&factor_e[p][i]);
                f[i] = f[i].plus(&factor_f[p][i]);
            }
        }
        let mut gram = SparseMatrix::<Q>::identity(1);
        for m in &factors {
            gram = gram.kron(&m.rep.gram);
        }
        let mut weights = Vec::with_capacity(total);
        for idx in 0..total {
            let t = tuple_of(&dims, idx);
            let mut w = Weight::zero(r);
            for (p, &k) in t.iter().enumerate() {
                w = &w + &factors[p].rep.weights[k];
            }
            weights.push(w);
        }
        Ok(TensorModule { rep: Rep { rs, weights, e, f, gram }, factors, dims, factor_e, factor_f })
    }

    pub fn n_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn tuple(&self, idx: usize) -> Vec<usize> {
        tuple_of(&self.dims, idx)
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.dims).fold(0, |acc, (&t, &d)| acc * d + t)
    }

    /// x^{(p)} for an operator x on factor p.
    pub fn embed_factor(&self, p: usize, x: &SparseMatrix<Q>) -> SparseMatrix<Q> {
        let mut acc = SparseMatrix::<Q>::identity(1);
        for (s, d) in self.dims.iter().enumerate() {
            acc = if s == p { acc.kron(x) } else { acc.kron(&SparseMatrix::identity(*d)) };
        }
        acc
    }

    /// Weight of factor p in basis tuple `idx`.
    pub fn factor_weight(&self, idx: usize, p: usize) -> &Weight {
        let t = self.tuple(idx);
        &self.factors[p].rep.weights[t[p]]
    }

    /// v₁ ⊗ ··· ⊗ v_n
    pub fn pure_tensor<T: Scalar>(&self, vs: &[Vec<T>]) -> Vec<T> {
        let mut acc = vec![T::one()];
        for v in vs {
            let mut next = Vec::with_capacity(acc.len() * v.len());
            for a in &acc {
                for b in v {
                    next.push(a.clone() * b.clone());
                }
            }
            acc = next;
        }
        acc
    }
}

fn tuple_of(dims: &[usize], mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; dims.len()];
    for p in (0..dims.len()).rev() {
        t[p] = idx % dims[p];
        idx /= dims[p];
    }
    t
}
