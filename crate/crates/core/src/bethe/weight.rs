//! Weight functions u(t, z) and their Verma-extended versions u_𝒦(t, z).

use std::collections::BTreeMap;

use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::hwmod::verma::vt_add;
use crate::hwmod::{TensorModule, VtVec, Word};

use super::master::MasterSpec;

/// Every way to distribute the variables into `slots` ordered sequences,
/// i.e. every pair (b, σ) with b a composition of m into `slots` parts.
fn arrangements(m: usize, slots: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![vec![Vec::new(); slots]];
    for a in 0..m {
        let mut next = Vec::with_capacity(out.len() * (slots + a));
        for arr in &out {
            for p in 0..slots {
                for pos in 0..=arr[p].len() {
                    let mut na = arr.clone();
                    na[p].insert(pos, a);
                    next.push(na);
                }
            }
        }
        out = next;
    }
    out
}

/// 1/((s₁ − s₂)(s₂ − s₃)···(s_b − x)) for the sequence s; 1 when empty.
fn chain_factor<T: Scalar>(t: &[T], seq: &[usize], x: &T) -> Result<T> {
    let mut den = T::one();
    for w in seq.windows(2) {
        den = den * (t[w[0]].clone() - t[w[1]].clone());
    }
    if let Some(&last) = seq.last() {
        den = den * (t[last].clone() - x.clone());
    }
    if den.is_zero() {
        return Err(Error::Singular("weight function evaluated on a singular hyperplane".into()));
    }
    Ok(T::one() / den)
}

/// Coefficients of u grouped by the tuple of per-slot words.
fn word_coefficients<T: Scalar>(spec: &MasterSpec<T>, t: &[T], slot_points: &[T]) -> Result<BTreeMap<Vec<Word>, T>> {
    if t.len() != spec.n_vars() {
        return Err(Error::InvalidInput(format!("expected {} coordinates, got {}", spec.n_vars(), t.len())));
    }
    let colors = spec.colors();
    let mut acc: BTreeMap<Vec<Word>, T> = BTreeMap::new();
    for arr in arrangements(t.len(), slot_points.len()) {
        let mut c = T::one();
        for (seq, x) in arr.iter().zip(slot_points) {
            c = c * chain_factor(t, seq, x)?;
        }
        let words: Vec<Word> = arr.iter().map(|seq| seq.iter().map(|&a| colors[a]).collect()).collect();
        let e = acc.entry(words).or_insert_with(T::zero);
        *e = e.clone() + c;
    }
    Ok(acc)
}

fn check_module<T>(spec: &MasterSpec<T>, tm: &TensorModule) -> Result<()> {
    if tm.n_factors() != spec.lambdas.len() {
        return Err(Error::InvalidInput("module and master function have different numbers of points".into()));
    }
    if tm.factors.iter().zip(&spec.lambdas).any(|(f, l)| &f.highest != l) {
        return Err(Error::InvalidInput("module highest weights differ from Λ".into()));
    }
    Ok(())
}

/// u(t, z) = Σ_b Σ_σ u_b^σ f_b^σ v in V[ΣΛ − 𝐦_α].
pub fn weight_fn<T: Scalar>(spec: &MasterSpec<T>, tm: &TensorModule, t: &[T]) -> Result<Vec<T>> {
    check_module(spec, tm)?;
    let mut out = vec![T::zero(); tm.dim()];
    for (words, c) in word_coefficients(spec, t, &spec.points)? {
        if c.is_zero() {
            continue;
        }
        let vs: Vec<Vec<T>> =
            tm.factors.iter().zip(&words).map(|(f, w)| f.rep.f_word(w, &f.highest_vector::<T>())).collect();
        for (o, x) in out.iter_mut().zip(tm.pure_tensor(&vs)) {
            *o = o.clone() + c.clone() * x;
        }
    }
    Ok(out)
}

/// u_𝒦(t, z) in M_μ ⊗ V: a Verma slot at the origin precedes the points.
pub fn weight_fn_verma<T: Scalar>(spec: &MasterSpec<T>, tm: &TensorModule, t: &[T]) -> Result<VtVec<T>> {
    check_module(spec, tm)?;
    let mut slots = vec![T::zero()];
    slots.extend(spec.points.iter().cloned());
    let mut out = VtVec::new();
    for (words, c) in word_coefficients(spec, t, &slots)? {
        if c.is_zero() {
            continue;
        }
        let vs: Vec<Vec<T>> =
            tm.factors.iter().zip(&words[1..]).map(|(f, w)| f.rep.f_word(w, &f.highest_vector::<T>())).collect();
        for (k, x) in tm.pure_tensor(&vs).into_iter().enumerate() {
            vt_add(&mut out, (words[0].clone(), k), c.clone() * x);
        }
    }
    Ok(out)
}
