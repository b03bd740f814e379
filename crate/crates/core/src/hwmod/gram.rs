//! The contravariant (Shapovalov) form on words over a highest weight
//! vector, Gram blocks with basis selection, and the determinant ratio.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::arith::{qi, Matrix, Q};
use crate::error::{Error, Result};
use crate::rootsys::{lattice_scale, lattice_sub, Lattice, RootSystem, Weight};

use super::words::{words_of_content, Word};

/// Memoized S_μ(F, G) on words. S_μ(F, G) is the coefficient of 1_μ in
/// e_{F[m-1]}···e_{F[0]} G 1_μ.
pub struct Shapovalov<'a> {
    rs: &'a RootSystem,
    mu: Weight,
    mu_coroot: Vec<Q>,
    memo: HashMap<(Word, Word), Q>,
}

impl<'a> Shapovalov<'a> {
    pub fn new(rs: &'a RootSystem, mu: &Weight) -> Self {
        let mu_coroot = rs.to_fundamental(mu);
        Shapovalov { rs, mu: mu.clone(), mu_coroot, memo: HashMap::new() }
    }

    pub fn mu(&self) -> &Weight {
        &self.mu
    }

    pub fn root_system(&self) -> &RootSystem {
        self.rs
    }

    pub fn pair(&mut self, f: &[usize], g: &[usize]) -> Q {
        if f.len() != g.len() {
            return Q::zero();
        }
        if f.is_empty() {
            return Q::one();
        }
        let mut cf = f.to_vec();
        let mut cg = g.to_vec();
        cf.sort_unstable();
        cg.sort_unstable();
        if cf != cg {
            return Q::zero();
        }
        let key = (f.to_vec(), g.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let i = f[0];
        let rest = &f[1..];
        let mut acc = Q::zero();
        let mut below = Q::zero();
        for k in (0..g.len()).rev() {
            if g[k] == i {
                let coef = &self.mu_coroot[i] - &below;
                if !coef.is_zero() {
                    let mut shorter = g.to_vec();
                    shorter.remove(k);
                    acc += coef * self.pair(rest, &shorter);
                }
            }
            below += qi(self.rs.cartan().entry(i, g[k]));
        }
        self.memo.insert(key, acc.clone());
        acc
    }

    pub fn gram(&mut self, rows: &[Word], cols: &[Word]) -> Matrix<Q> {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, f) in rows.iter().enumerate() {
            for (b, g) in cols.iter().enumerate() {
                m[(a, b)] = self.pair(f, g);
            }
        }
        m
    }
}

/// Gram matrix of S_μ on all words of content β with a selected basis.
#[derive(Clone, Debug)]
pub struct GramBlock {
    pub mu: Weight,
    pub beta: Lattice,
    pub words: Vec<Word>,
    pub matrix: Matrix<Q>,
    /// Indices into `words` of a basis of U(n₋)[−β]; the principal
    /// submatrix on them is invertible.
    pub basis_selection: Vec<usize>,
    pub inverse_on_basis: Matrix<Q>,
}

impl GramBlock {
    pub fn basis_words(&self) -> Vec<Word> {
        self.basis_selection.iter().map(|&k| self.words[k].clone()).collect()
    }

    pub fn basis_matrix(&self) -> Matrix<Q> {
        self.matrix.principal(&self.basis_selection)
    }
}

/// Vanishing χ_k^α(μ) with kα ≤ β, as (α, k).
pub fn vanishing_chis(rs: &RootSystem, mu: &Weight, beta: &[i64]) -> Vec<(Lattice, i64)> {
    let mut out = Vec::new();
    for alpha in rs.positive_roots() {
        let mut k = 1;
        while crate::rootsys::lattice_nonneg(&lattice_sub(beta, &lattice_scale(alpha, k))) {
            if rs.chi(alpha, k, mu).is_zero() {
                out.push((alpha.clone(), k));
            }
            k += 1;
        }
    }
    out
}

fn describe_chis(chis: &[(Lattice, i64)]) -> String {
    chis.iter().map(|(a, k)| format!("chi_{k}^{a:?}")).collect::<Vec<_>>().join(", ")
}

pub fn gram_block(rs: &RootSystem, mu: &Weight, beta: &[i64]) -> Result<GramBlock> {
    let mut sh = Shapovalov::new(rs, mu);
    gram_block_with(&mut sh, beta)
}

pub fn gram_block_with(sh: &mut Shapovalov<'_>, beta: &[i64]) -> Result<GramBlock> {
    let rs = sh.root_system();
    if !crate::rootsys::lattice_nonneg(beta) {
        return Err(Error::InvalidInput(format!("content {beta:?} is not in Q+")));
    }
    let p = rs.kostant_lattice(beta) as usize;
    let mu = sh.mu().clone();
    let words = words_of_content(beta);
    let matrix = sh.gram(&words, &words);
    let ech = matrix.echelon();
    if ech.rank < p {
        let chis = vanishing_chis(sh.root_system(), &mu, beta);
        return Err(Error::Degenerate(format!(
            "Shapovalov form at mu = {mu:?} has rank {} < P({beta:?}) = {p}; vanishing: {}",
            ech.rank,
            describe_chis(&chis)
        )));
    }
    debug_assert_eq!(ech.rank, p, "word Gram rank cannot exceed the partition count");
    let basis_selection = ech.pivot_cols;
    let inverse_on_basis =
        matrix.principal(&basis_selection).inverse().expect("principal block on independent columns of a symmetric matrix");
    Ok(GramBlock { mu, beta: beta.to_vec(), words, matrix, basis_selection, inverse_on_basis })
}

/// det(basis block) / Π_{α>0} Π_k χ_k^α(μ)^{P(β−kα)} at each sample; samples
/// with a vanishing χ are skipped and reported.
pub fn shapovalov_det_ratio(rs: &RootSystem, samples: &[Weight], beta: &[i64]) -> Result<DetRatioReport> {
    let mut ratios = Vec::new();
    let mut skipped = Vec::new();
    for mu in samples {
        if !vanishing_chis(rs, mu, beta).is_empty() {
            skipped.push(mu.clone());
            continue;
        }
        let block = gram_block(rs, mu, beta)?;
        let det = block.basis_matrix().det();
        let mut prod = Q::one();
        for alpha in rs.positive_roots() {
            let mut k = 1;
            loop {
                let rest = lattice_sub(beta, &lattice_scale(alpha, k));
                if !crate::rootsys::lattice_nonneg(&rest) {
                    break;
                }
                let e = rs.kostant_lattice(&rest);
                let chi = rs.chi(alpha, k, mu);
                for _ in 0..e {
                    prod *= &chi;
                }
                k += 1;
            }
        }
        ratios.push((mu.clone(), det / prod));
    }
    Ok(DetRatioReport { ratios, skipped })
}

#[derive(Clone, Debug)]
pub struct DetRatioReport {
    pub ratios: Vec<(Weight, Q)>,
    pub skipped: Vec<Weight>,
}

impl DetRatioReport {
    /// All computed ratios equal and nonzero, with at least two samples.
    pub fn is_constant(&self) -> bool {
        self.ratios.len() >= 2
            && !self.ratios[0].1.is_zero()
            && self.ratios.iter().all(|(_, r)| *r == self.ratios[0].1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn sl2_blocks() {
        let rs = RootSystem::of_type("A1").unwrap();
        let mu = Weight(vec![q(5, 7)]);
        let c = rs.simple_coroot(&mu, 0);
        let b1 = gram_block(&rs, &mu, &[1]).unwrap();
        assert_eq!(b1.matrix[(0, 0)], c);
        let b2 = gram_block(&rs, &mu, &[2]).unwrap();
        assert_eq!(b2.matrix[(0, 0)], qi(2) * &c * (&c - qi(1)));
    }

    #[test]
    fn degenerate_names_chi() {
        let rs = RootSystem::of_type("A1").unwrap();
        // ⟨μ, α^∨⟩ = 1 kills f² 1_μ
        let mu = Weight(vec![q(1, 2)]);
        let err = gram_block(&rs, &mu, &[2]).unwrap_err();
        assert!(matches!(err, Error::Degenerate(ref s) if s.contains("chi_2^[1]")), "{err}");
    }
}
