//! Words in the lowering generators and their straightening against a
//! highest weight vector.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::{Scalar, Q};
use crate::rootsys::{Lattice, RootSystem, Weight};

/// f_{w[0]}···f_{w[m-1]}; acting on a vector, the last letter acts first.
pub type Word = Vec<usize>;

/// Finite linear combination of words.
pub type WordComb<T> = BTreeMap<Word, T>;

pub fn content(word: &[usize], rank: usize) -> Lattice {
    let mut c = vec![0; rank];
    for &i in word {
        c[i] += 1;
    }
    c
}

pub fn comb_add<T: Scalar>(acc: &mut WordComb<T>, w: Word, c: T) {
    if c.is_zero() {
        return;
    }
    match acc.entry(w) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get().clone() + c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub fn comb_scale<T: Scalar>(v: &WordComb<T>, s: &T) -> WordComb<T> {
    v.iter()
        .filter_map(|(w, c)| {
            let x = c.clone() * s.clone();
            (!x.is_zero()).then(|| (w.clone(), x))
        })
        .collect()
}

/// e_i applied to Σ c_w f_w 1_μ in the Verma module, by commuting e_i to the
/// right: each occurrence of f_i at position k contributes
/// ⟨μ − Σ_{l>k} α_{w_l}, α_i^∨⟩ times the word with that letter removed.
pub fn free_e_action<T: Scalar>(rs: &RootSystem, v: &WordComb<T>, i: usize, mu: &Weight) -> WordComb<T> {
    let mu_i = rs.simple_coroot(mu, i);
    let mut out = WordComb::new();
    for (w, c) in v {
        // running ⟨Σ_{l>k} α_{w_l}, α_i^∨⟩ scanned from the right
        let mut below = Q::zero();
        for k in (0..w.len()).rev() {
            if w[k] == i {
                let coef = &mu_i - &below;
                if !coef.is_zero() {
                    let mut shorter = w.clone();
                    shorter.remove(k);
                    comb_add(&mut out, shorter, c.clone() * T::from_q(&coef));
                }
            }
            below += crate::arith::qi(rs.cartan().entry(i, w[k]));
        }
    }
    out
}

/// All distinct words with the given content.
pub fn words_of_content(beta: &[i64]) -> Vec<Word> {
    let mut out = Vec::new();
    let mut remaining: Vec<i64> = beta.to_vec();
    let total: i64 = beta.iter().sum();
    let mut cur = Vec::with_capacity(total as usize);
    fn rec(remaining: &mut Vec<i64>, cur: &mut Word, left: i64, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in 0..remaining.len() {
            if remaining[i] > 0 {
                remaining[i] -= 1;
                cur.push(i);
                rec(remaining, cur, left - 1, out);
                cur.pop();
                remaining[i] += 1;
            }
        }
    }
    rec(&mut remaining, &mut cur, total, &mut out);
    out
}

/// Noncommutative polynomial in one family of generators (all e's or all
/// f's): Σ c_w x_{w[0]}···x_{w[m-1]}, the last letter acting first.
#[derive(Clone, Debug, PartialEq)]
pub struct GenPoly {
    pub terms: Vec<(Word, Q)>,
}

impl GenPoly {
    pub fn generator(i: usize) -> Self {
        GenPoly { terms: vec![(vec![i], Q::from_integer(1.into()))] }
    }

    /// self·rhs (concatenation of words)
    pub fn mul(&self, rhs: &GenPoly) -> GenPoly {
        let mut acc: WordComb<Q> = WordComb::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let mut w = a.clone();
                w.extend(b);
                comb_add(&mut acc, w, x * y);
            }
        }
        GenPoly { terms: acc.into_iter().collect() }
    }

    pub fn sub(&self, rhs: &GenPoly) -> GenPoly {
        let mut acc: WordComb<Q> = self.terms.iter().cloned().collect();
        for (w, c) in &rhs.terms {
            comb_add(&mut acc, w.clone(), -c.clone());
        }
        GenPoly { terms: acc.into_iter().collect() }
    }

    /// [self, rhs]
    pub fn bracket(&self, rhs: &GenPoly) -> GenPoly {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qi};

    #[test]
    fn sl2_straightening() {
        let rs = RootSystem::of_type("A1").unwrap();
        let mu = Weight(vec![q(7, 3)]);
        let c = rs.simple_coroot(&mu, 0);
        let v: WordComb<Q> = [(vec![0], qi(1))].into_iter().collect();
        let out = free_e_action(&rs, &v, 0, &mu);
        assert_eq!(out.get(&vec![]), Some(&c));
        let v: WordComb<Q> = [(vec![0, 0], qi(1))].into_iter().collect();
        let out = free_e_action(&rs, &v, 0, &mu);
        assert_eq!(out.get(&vec![0]), Some(&(qi(2) * &c - qi(2))));
    }

    #[test]
    fn orthogonal_generators_commute() {
        let rs = RootSystem::of_type("A2").unwrap();
        let mu = Weight(vec![q(1, 2), q(3, 5)]);
        let v: WordComb<Q> = [(vec![1], qi(1))].into_iter().collect();
        assert!(free_e_action(&rs, &v, 0, &mu).is_empty());
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(words_of_content(&[2, 1]).len(), 3);
        assert_eq!(words_of_content(&[2, 2]).len(), 6);
        assert_eq!(words_of_content(&[0, 0]), vec![Vec::<usize>::new()]);
    }
}
