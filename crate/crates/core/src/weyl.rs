//! Weyl group action on modules and eigenfunctions, and the dynamical Weyl
//! group operators T_w(ξ) on the zero weight space.

use num_traits::{One, Zero};

use crate::arith::{factorial, Matrix, SparseMatrix, C64, Q};
use crate::eigenfunc::{psi, EigenFunction};
use crate::error::{Error, Result};
use crate::hwmod::Rep;
use crate::rootsys::{RootSystem, Weight, WeylWord};

/// exp(x) for nilpotent x.
fn nil_exp(x: &SparseMatrix<Q>) -> SparseMatrix<Q> {
    let mut acc = SparseMatrix::identity(x.rows());
    let mut power = SparseMatrix::identity(x.rows());
    let mut n = 1i64;
    loop {
        power = power.compose(x).scale(&(Q::one() / Q::from_integer(n.into())));
        if power.is_zero() {
            return acc;
        }
        acc = acc.plus(&power);
        n += 1;
    }
}

/// s̃_j = exp(e_j) exp(−f_j) exp(e_j) on the whole module.
pub fn simple_reflection(rep: &Rep, j: usize) -> SparseMatrix<Q> {
    let e = nil_exp(&rep.e[j]);
    let f = nil_exp(&rep.f[j].scale(&-Q::one()));
    e.compose(&f).compose(&e)
}

/// w̃ = s̃_{i1}···s̃_{im} for w = s_{i1}···s_{im}.
pub fn weyl_matrix(rep: &Rep, w: &WeylWord) -> SparseMatrix<Q> {
    w.letters
        .iter()
        .fold(SparseMatrix::identity(rep.dim()), |acc, &j| acc.compose(&simple_reflection(rep, j)))
}

/// Action of w on V[0] in its basis.
pub fn zero_weight_action(rep: &Rep, w: &WeylWord) -> Matrix<Q> {
    rep.restrict(&weyl_matrix(rep, w), &Weight::zero(rep.rank()))
}

/// T_{s_j}(ξ) = Σ_ℓ (−1)^ℓ (1/ℓ!)² ξ_j/(ξ_j − ℓ) f_j^ℓ e_j^ℓ on V[0], ξ_j = (ξ, α_j^∨).
pub fn t_simple(rs: &RootSystem, rep: &Rep, xi: &Weight, j: usize) -> Result<Matrix<Q>> {
    let zero = Weight::zero(rs.rank());
    let xj = rs.simple_coroot(xi, j);
    let mut acc = rep.restrict(&SparseMatrix::identity(rep.dim()), &zero);
    let mut e_pow = SparseMatrix::identity(rep.dim());
    let mut f_pow = SparseMatrix::identity(rep.dim());
    let mut l = 1u64;
    loop {
        e_pow = rep.e[j].compose(&e_pow);
        f_pow = f_pow.compose(&rep.f[j]);
        let term = rep.restrict(&f_pow.compose(&e_pow), &zero);
        if term.is_zero() {
            return Ok(acc);
        }
        let den = &xj - Q::from_integer(l.into());
        if den.is_zero() {
            return Err(Error::Pole(format!("T_s{j}(ξ) has a pole: (ξ, α_{j}^∨) = {l}")));
        }
        let fl = factorial(l);
        let sign = if l.is_multiple_of(2) { Q::one() } else { -Q::one() };
        let c = sign * &xj / (den * &fl * &fl);
        acc = &acc + &term.scale(&c);
        l += 1;
    }
}

/// T_w(ξ) = T_{s_{i1}}(s_{i2}···s_{im}ξ) ··· T_{s_{im}}(ξ) for w = s_{i1}···s_{im}.
pub fn t_word(rs: &RootSystem, rep: &Rep, xi: &Weight, w: &WeylWord) -> Result<Matrix<Q>> {
    let d = rep.weight_space(&Weight::zero(rs.rank())).len();
    let mut acc = Matrix::identity(d);
    let mut cur = xi.clone();
    for &j in w.letters.iter().rev() {
        acc = &t_simple(rs, rep, &cur, j)? * &acc;
        cur = rs.reflect(&cur, j);
    }
    Ok(acc)
}

/// (1+ξ_j)···(k+ξ_j) / ((1−ξ_j)···(k−ξ_j)), the value of T_{s_j}(ξ) on a
/// (2k+1)-dimensional sl₂(j) constituent of V[0].
pub fn t_simple_closed_form(xj: &Q, k: u64) -> Result<Q> {
    let mut acc = Q::one();
    for l in 1..=k {
        let l = Q::from_integer(l.into());
        let den = &l - xj;
        if den.is_zero() {
            return Err(Error::Pole(format!("(ξ, α^∨) = {l}")));
        }
        acc = acc * (&l + xj) / den;
    }
    Ok(acc)
}

/// w₀ T_{w₀}(ξ) on V[0].
pub fn q_via_weyl(rs: &RootSystem, rep: &Rep, xi: &Weight) -> Result<Matrix<Q>> {
    let w0 = rs.longest_element()?;
    Ok(&zero_weight_action(rep, &w0) * &t_word(rs, rep, xi, &w0)?)
}

/// The simple reflection index j' with w₀ s_j w₀⁻¹ = s_{j'}.
pub fn w0_conjugate_index(rs: &RootSystem, j: usize) -> Result<usize> {
    let w0 = rs.longest_element()?;
    let img = rs.apply_word_lattice(&w0, &crate::rootsys::lattice_scale(&unit(rs.rank(), j), -1));
    (0..rs.rank())
        .find(|&i| img == unit(rs.rank(), i))
        .ok_or_else(|| Error::Consistency("−w₀α_j is not simple".into()))
}

fn unit(r: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

pub fn inverse(w: &WeylWord) -> WeylWord {
    WeylWord { letters: w.letters.iter().rev().cloned().collect(), reduced: w.reduced }
}

/// Coordinates α_j(w⁻¹λ) = (wα_j)(λ) of w⁻¹λ, given y_j = α_j(λ).
pub fn pull_back_point(rs: &RootSystem, w: &WeylWord, y: &[C64]) -> Vec<C64> {
    (0..rs.rank())
        .map(|j| {
            let wa = rs.apply_word_lattice(w, &unit(rs.rank(), j));
            wa.iter().zip(y).map(|(&k, v)| v * k as f64).sum()
        })
        .collect()
}

/// ψ(λ) = e^{2πiξ(λ)} φ(X), X_j = e^{−2πi y_j}, for λ with α_j(λ) = y_j.
pub fn eval_at(psi: &EigenFunction<C64>, y: &[C64]) -> Vec<C64> {
    let two_pi_i = C64::new(0.0, 2.0 * std::f64::consts::PI);
    let phase: C64 = psi.xi.coords().iter().zip(y).map(|(c, v)| v * crate::arith::q_to_f64(c)).sum();
    let x: Vec<C64> = y.iter().map(|v| (-two_pi_i * v).exp()).collect();
    let e = (two_pi_i * phase).exp();
    psi.eval(&x).into_iter().map(|v| v * e).collect()
}

/// (wψ)(λ) = w(ψ(w⁻¹λ)).
pub fn eval_transformed(rs: &RootSystem, rep: &Rep, w: &WeylWord, psi: &EigenFunction<C64>, y: &[C64]) -> Vec<C64> {
    let v = eval_at(psi, &pull_back_point(rs, w, y));
    zero_weight_action(rep, w).to_c64().mul_vec(&v)
}

#[derive(Clone, Debug)]
pub struct SignedTerm {
    pub word: WeylWord,
    /// (−1)^{l(w)}
    pub sign: i64,
    pub psi: EigenFunction<Q>,
}

/// The |W| terms (−1)^{l(w)} wψ_u^ξ = (−1)^{l(w)} ψ^{wξ}_{T_w(ξ)u} of ψ_u^{Wξ}.
pub fn antisymmetrize(rs: &RootSystem, rep: &Rep, xi: &Weight, u: &[Q]) -> Result<Vec<SignedTerm>> {
    rs.weyl_group()?
        .into_iter()
        .map(|w| {
            let tu = t_word(rs, rep, xi, &w)?.mul_vec(u);
            let f = psi(rs, rep, &rs.apply_word(&w, xi), &tu)?;
            Ok(SignedTerm { sign: w.sign(), word: w, psi: f })
        })
        .collect()
}
