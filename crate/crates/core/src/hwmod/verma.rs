//! Vectors in M_μ ⊗ V with the Verma factor kept on free words, reduced to
//! a basis only when comparing or pairing.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::{Matrix, Scalar, SparseMatrix, Q};
use crate::error::Result;
use crate::rootsys::{Lattice, RootSystem, Weight};

use super::gram::{gram_block_with, GramBlock, Shapovalov};
use super::module::{apply_q, Rep};
use super::roots::{apply_e_poly_verma, apply_f_poly_verma};
use super::words::{comb_add, content, free_e_action, GenPoly, Word, WordComb};

/// Σ c · (F_w 1_μ) ⊗ b_k keyed by (word, basis index of V).
pub type VtVec<T> = BTreeMap<(Word, usize), T>;

pub fn vt_add<T: Scalar>(acc: &mut VtVec<T>, key: (Word, usize), c: T) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(key.clone()).or_insert_with(T::zero);
    *e = e.clone() + c;
    if e.is_zero() {
        acc.remove(&key);
    }
}

pub fn vt_axpy<T: Scalar>(acc: &mut VtVec<T>, s: &T, v: &VtVec<T>) {
    for (k, c) in v {
        vt_add(acc, k.clone(), s.clone() * c.clone());
    }
}

pub struct VermaTensor<'a> {
    pub rs: &'a RootSystem,
    pub mu: Weight,
    pub rep: &'a Rep,
    sh: RefCell<Shapovalov<'a>>,
    blocks: RefCell<BTreeMap<Lattice, GramBlock>>,
}

impl<'a> VermaTensor<'a> {
    pub fn new(rs: &'a RootSystem, mu: &Weight, rep: &'a Rep) -> Self {
        VermaTensor {
            rs,
            mu: mu.clone(),
            rep,
            sh: RefCell::new(Shapovalov::new(rs, mu)),
            blocks: RefCell::new(BTreeMap::new()),
        }
    }

    fn by_word<T: Scalar>(&self, v: &VtVec<T>) -> BTreeMap<Word, Vec<T>> {
        let mut out: BTreeMap<Word, Vec<T>> = BTreeMap::new();
        for ((w, k), c) in v {
            out.entry(w.clone()).or_insert_with(|| vec![T::zero(); self.rep.dim()])[*k] = c.clone();
        }
        out
    }

    fn by_index<T: Scalar>(&self, v: &VtVec<T>) -> BTreeMap<usize, WordComb<T>> {
        let mut out: BTreeMap<usize, WordComb<T>> = BTreeMap::new();
        for ((w, k), c) in v {
            out.entry(*k).or_default().insert(w.clone(), c.clone());
        }
        out
    }

    /// 1 ⊗ m applied on the V side.
    pub fn apply_v<T: Scalar>(&self, m: &SparseMatrix<Q>, v: &VtVec<T>) -> VtVec<T> {
        let mut out = VtVec::new();
        for (w, vec) in self.by_word(v) {
            for (k, c) in apply_q(m, &vec).into_iter().enumerate() {
                vt_add(&mut out, (w.clone(), k), c);
            }
        }
        out
    }

    /// e_i ⊗ 1 on the Verma side.
    pub fn e_verma<T: Scalar>(&self, i: usize, v: &VtVec<T>) -> VtVec<T> {
        let mut out = VtVec::new();
        for (k, comb) in self.by_index(v) {
            for (w, c) in free_e_action(self.rs, &comb, i, &self.mu) {
                vt_add(&mut out, (w, k), c);
            }
        }
        out
    }

    pub fn e_poly_verma<T: Scalar>(&self, p: &GenPoly, v: &VtVec<T>) -> VtVec<T> {
        let mut out = VtVec::new();
        for (k, comb) in self.by_index(v) {
            for (w, c) in apply_e_poly_verma(self.rs, p, &comb, &self.mu) {
                vt_add(&mut out, (w, k), c);
            }
        }
        out
    }

    pub fn f_poly_verma<T: Scalar>(&self, p: &GenPoly, v: &VtVec<T>) -> VtVec<T> {
        let mut out = VtVec::new();
        for (k, comb) in self.by_index(v) {
            for (w, c) in apply_f_poly_verma(p, &comb) {
                vt_add(&mut out, (w, k), c);
            }
        }
        out
    }

    /// Total e_i = e_i ⊗ 1 + 1 ⊗ e_i.
    pub fn e_total<T: Scalar>(&self, i: usize, v: &VtVec<T>) -> VtVec<T> {
        let mut out = self.e_verma(i, v);
        vt_axpy(&mut out, &T::one(), &self.apply_v(&self.rep.e[i], v));
        out
    }

    /// Weight of the Verma-side vector F_w 1_μ.
    pub fn verma_weight(&self, w: &[usize]) -> Weight {
        &self.mu - &Weight::from_ints(&content(w, self.rs.rank()))
    }

    fn block(&self, beta: &Lattice) -> Result<GramBlock> {
        if let Some(b) = self.blocks.borrow().get(beta) {
            return Ok(b.clone());
        }
        let b = gram_block_with(&mut self.sh.borrow_mut(), beta)?;
        self.blocks.borrow_mut().insert(beta.clone(), b.clone());
        Ok(b)
    }

    /// Coordinates on (content, basis word, V index); two vectors are equal in
    /// M_μ ⊗ V iff their coordinates agree (μ nondegenerate at the depths used).
    pub fn coordinates<T: Scalar>(&self, v: &VtVec<T>) -> Result<BTreeMap<(Lattice, usize, usize), T>> {
        let r = self.rs.rank();
        let mut grouped: BTreeMap<(Lattice, usize), Vec<(Word, T)>> = BTreeMap::new();
        for ((w, k), c) in v {
            grouped.entry((content(w, r), *k)).or_default().push((w.clone(), c.clone()));
        }
        let mut out = BTreeMap::new();
        for ((beta, k), terms) in grouped {
            let block = self.block(&beta)?;
            let basis = block.basis_words();
            let mut sh = self.sh.borrow_mut();
            let p: Vec<T> = basis
                .iter()
                .map(|b| terms.iter().fold(T::zero(), |acc, (w, c)| acc + T::from_q(&sh.pair(b, w)) * c.clone()))
                .collect();
            drop(sh);
            let inv: Matrix<T> = block.inverse_on_basis.map(T::from_q);
            for (j, x) in inv.mul_vec(&p).into_iter().enumerate() {
                if !x.is_zero() {
                    out.insert((beta.clone(), j, k), x);
                }
            }
        }
        Ok(out)
    }

    /// Largest coordinate magnitude.
    pub fn coord_norm<T: Scalar>(&self, v: &VtVec<T>) -> Result<f64> {
        Ok(self.coordinates(v)?.values().map(|x| x.magnitude()).fold(0.0, f64::max))
    }

    /// Tensor Shapovalov pairing S_μ ⊗ S_V.
    pub fn shapovalov<T: Scalar>(&self, a: &VtVec<T>, b: &VtVec<T>) -> T {
        let wa = self.by_word(a);
        let wb = self.by_word(b);
        let mut sh = self.sh.borrow_mut();
        let mut acc = T::zero();
        for (w1, v1) in &wa {
            for (w2, v2) in &wb {
                let s = sh.pair(w1, w2);
                if s.is_zero() {
                    continue;
                }
                acc = acc + T::from_q(&s) * self.rep.form(v1, v2);
            }
        }
        acc
    }

    pub fn from_xi_terms(terms: &[super::singular::XiTerm]) -> VtVec<Q> {
        let mut out = VtVec::new();
        for t in terms {
            for (k, c) in t.vector.iter().enumerate() {
                vt_add(&mut out, (t.word.clone(), k), c.clone());
            }
        }
        out
    }
}

/// Prepend f-words on the Verma side: (F ⊗ 1)·v.
pub fn verma_prepend<T: Scalar>(word: &[usize], v: &VtVec<T>) -> VtVec<T> {
    let mut out = VtVec::new();
    for ((w, k), c) in v {
        let mut nw = word.to_vec();
        nw.extend(w);
        vt_add(&mut out, (nw, *k), c.clone());
    }
    out
}

pub fn word_comb_single<T: Scalar>(w: Word, c: T) -> WordComb<T> {
    let mut out = WordComb::new();
    comb_add(&mut out, w, c);
    out
}
