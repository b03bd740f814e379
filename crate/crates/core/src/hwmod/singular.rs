//! Singular vectors Ξ(μ)(1 ⊗ u) in M_μ ⊗ V, the annihilator test for
//! V[ν]_μ, the operator 𝒬(ξ) and the form ⟨u, v⟩_ξ = S(u, 𝒬(ξ)v).

use num_traits::Zero;

use crate::arith::{qi, Matrix, Q};
use crate::error::{Error, Result};
use crate::rootsys::{Lattice, RootSystem, Weight};

use super::gram::{gram_block_with, Shapovalov};
use super::module::Rep;
use super::words::{words_of_content, Word};

/// One term F_j ⊗ u_j of Ξ(μ)(1 ⊗ u).
#[derive(Clone, Debug)]
pub struct XiTerm {
    pub beta: Lattice,
    pub word: Word,
    pub vector: Vec<Q>,
}

/// μ = ξ − ρ − ν/2
pub fn shifted_mu(rs: &RootSystem, xi: &Weight, nu: &Weight) -> Weight {
    &(xi - rs.rho()) - &nu.scale(&Q::new(1.into(), 2.into()))
}

/// Whether Σ c_j ω(F_j) u = 0 for every kernel vector Σ c_j F_j 1_μ of the
/// Shapovalov form, over all depths β with V[ν+β] ≠ 0.
pub fn annihilator_test(rs: &RootSystem, rep: &Rep, mu: &Weight, nu: &Weight, u: &[Q]) -> bool {
    let mut sh = Shapovalov::new(rs, mu);
    rep.raising_support(nu).iter().skip(1).all(|beta| annihilated_at(&mut sh, rep, beta, u))
}

fn annihilated_at(sh: &mut Shapovalov<'_>, rep: &Rep, beta: &[i64], u: &[Q]) -> bool {
    let words = words_of_content(beta);
    let g = sh.gram(&words, &words);
    let images: Vec<Vec<Q>> = words.iter().map(|w| rep.omega_word(w, u)).collect();
    g.nullspace().iter().all(|kv| {
        let mut acc = vec![Q::zero(); rep.dim()];
        for (c, img) in kv.iter().zip(&images) {
            if c.is_zero() {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(img) {
                *a += c * b;
            }
        }
        acc.iter().all(|x| x.is_zero())
    })
}

/// Terms of Ξ(μ)(1 ⊗ u) for u ∈ V[ν]: u_j = Σ_k (S_μ^{-1})_{jk} ω(F_k) u over
/// basis words F_j, truncated exactly where V[ν+β] = 0. The empty word
/// carries u itself.
pub fn xi_expand(rs: &RootSystem, rep: &Rep, mu: &Weight, nu: &Weight, u: &[Q]) -> Result<Vec<XiTerm>> {
    let mut sh = Shapovalov::new(rs, mu);
    let mut out = Vec::new();
    for beta in rep.raising_support(nu) {
        if beta.iter().all(|&x| x == 0) {
            out.push(XiTerm { beta, word: vec![], vector: u.to_vec() });
            continue;
        }
        let block = match gram_block_with(&mut sh, &beta) {
            Ok(b) => b,
            Err(Error::Degenerate(msg)) => {
                let inside = annihilated_at(&mut sh, rep, &beta, u);
                return Err(Error::Degenerate(if inside {
                    format!("{msg}; regularization at degenerate mu is not supported")
                } else {
                    format!("{msg}; u is not annihilated by the kernel at depth {beta:?}")
                }));
            }
            Err(e) => return Err(e),
        };
        let basis = block.basis_words();
        let images: Vec<Vec<Q>> = basis.iter().map(|w| rep.omega_word(w, u)).collect();
        for (j, word) in basis.iter().enumerate() {
            let mut v = vec![Q::zero(); rep.dim()];
            for (k, img) in images.iter().enumerate() {
                let c = &block.inverse_on_basis[(j, k)];
                if c.is_zero() {
                    continue;
                }
                for (a, b) in v.iter_mut().zip(img) {
                    *a += c * b;
                }
            }
            if v.iter().any(|x| !x.is_zero()) {
                out.push(XiTerm { beta: beta.clone(), word: word.clone(), vector: v });
            }
        }
    }
    Ok(out)
}

/// 𝒬(ξ)u = Σ_{j,k} (S^{-1}_{ξ−ρ−ν/2})_{jk} a(F_j) ω(F_k) u.
pub fn q_apply(rs: &RootSystem, rep: &Rep, xi: &Weight, nu: &Weight, u: &[Q]) -> Result<Vec<Q>> {
    let mu = shifted_mu(rs, xi, nu);
    let terms = xi_expand(rs, rep, &mu, nu, u)?;
    let mut out = vec![Q::zero(); rep.dim()];
    for t in terms {
        let img = rep.antipode_word(&t.word, &t.vector);
        for (a, b) in out.iter_mut().zip(img) {
            *a += b;
        }
    }
    Ok(out)
}

/// Matrix of 𝒬(ξ) on the basis of V[ν].
pub fn q_matrix(rs: &RootSystem, rep: &Rep, xi: &Weight, nu: &Weight) -> Result<Matrix<Q>> {
    let idx = rep.weight_space(nu);
    let mut m = Matrix::zeros(idx.len(), idx.len());
    for (c, &i) in idx.iter().enumerate() {
        let mut u = vec![Q::zero(); rep.dim()];
        u[i] = qi(1);
        let img = q_apply(rs, rep, xi, nu, &u)?;
        for (r, &k) in idx.iter().enumerate() {
            m[(r, c)] = img[k].clone();
        }
    }
    Ok(m)
}

/// ⟨u, v⟩_ξ = S(u, 𝒬(ξ)v) for u, v ∈ V[ν].
pub fn form_xi(rs: &RootSystem, rep: &Rep, xi: &Weight, nu: &Weight, u: &[Q], v: &[Q]) -> Result<Q> {
    let qv = q_apply(rs, rep, xi, nu, v)?;
    Ok(rep.form(u, &qv))
}

/// Gram matrix of ⟨·,·⟩_ξ on the basis of V[ν].
pub fn form_xi_matrix(rs: &RootSystem, rep: &Rep, xi: &Weight, nu: &Weight) -> Result<Matrix<Q>> {
    let q = q_matrix(rs, rep, xi, nu)?;
    let s = rep.restrict(&rep.gram, nu);
    Ok(&s * &q)
}

/// ⟨u, v⟩_ξ evaluated as the tensor Shapovalov pairing of the two singular
/// vectors Ξ(μ)(1 ⊗ u), Ξ(μ)(1 ⊗ v) on M_μ ⊗ V.
pub fn form_xi_via_singular(rs: &RootSystem, rep: &Rep, xi: &Weight, nu: &Weight, u: &[Q], v: &[Q]) -> Result<Q> {
    let mu = shifted_mu(rs, xi, nu);
    let tu = xi_expand(rs, rep, &mu, nu, u)?;
    let tv = xi_expand(rs, rep, &mu, nu, v)?;
    let mut sh = Shapovalov::new(rs, &mu);
    let mut acc = Q::zero();
    for a in &tu {
        for b in &tv {
            if a.beta != b.beta {
                continue;
            }
            let s = sh.pair(&a.word, &b.word);
            if s.is_zero() {
                continue;
            }
            acc += s * rep.form(&a.vector, &b.vector);
        }
    }
    Ok(acc)
}
