//! The map A_X from words in the lowering generators to rational functions
//! of X with word coefficients, summed over permutations of the letters.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::hwmod::Word;
use crate::rootsys::{lattice_add, Lattice};

use super::series::RationalTerm;

pub const DEFAULT_MAX_LEN: usize = 8;

/// One permutation's contribution: the letters reordered by σ and the
/// rational factor Π_k X_{β_σ(k)}^{a_k+1} / (1 − X_{β_σ(1)}···X_{β_σ(k)}).
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationFactor {
    /// σ as the list (σ(1), …, σ(m)) of 0-based letter positions.
    pub sigma: Vec<usize>,
    pub exponents: Vec<usize>,
    pub term: RationalTerm,
}

/// a_k = #{j ∈ [k, m−1] : σ(j) > σ(j+1)}, 1-indexed k and j.
pub fn descent_exponents(sigma: &[usize]) -> Vec<usize> {
    let m = sigma.len();
    let mut a = vec![0; m];
    let mut count = 0;
    for k in (0..m).rev() {
        if k + 1 < m && sigma[k] > sigma[k + 1] {
            count += 1;
        }
        a[k] = count;
    }
    a
}

/// Lexicographic successor; false after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Permutation factors for letters with the given contents.
pub fn a_x_factors(contents: &[Lattice], max_len: usize) -> Result<Vec<PermutationFactor>> {
    let m = contents.len();
    if m > max_len {
        return Err(Error::Bound(format!("word length {m} exceeds the bound {max_len}")));
    }
    if m == 0 {
        return Ok(vec![]);
    }
    let rank = contents[0].len();
    let mut sigma: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    loop {
        let a = descent_exponents(&sigma);
        let mut num = vec![0; rank];
        let mut partial = vec![0; rank];
        let mut dens = Vec::with_capacity(m);
        for k in 0..m {
            let b = &contents[sigma[k]];
            for (x, y) in num.iter_mut().zip(b) {
                *x += (a[k] as i64 + 1) * y;
            }
            partial = lattice_add(&partial, b);
            dens.push(partial.clone());
        }
        out.push(PermutationFactor {
            sigma: sigma.clone(),
            exponents: a,
            term: RationalTerm { coef: Q::one(), num, dens },
        });
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    Ok(out)
}

fn unit(rank: usize, i: usize) -> Lattice {
    let mut v = vec![0; rank];
    v[i] = 1;
    v
}

/// A_X(F_w) as (reordered word, rational factor) pairs; A_X(1) = 1.
pub fn a_x(word: &[usize], rank: usize, max_len: usize) -> Result<Vec<(Word, RationalTerm)>> {
    if word.is_empty() {
        return Ok(vec![(vec![], RationalTerm::one(rank))]);
    }
    let contents: Vec<Lattice> = word.iter().map(|&i| unit(rank, i)).collect();
    Ok(a_x_factors(&contents, max_len)?
        .into_iter()
        .map(|pf| (pf.sigma.iter().map(|&k| word[k]).collect(), pf.term))
        .collect())
}

/// A_{X^{-1}}(F_w), each factor rewritten so it is regular at X = 0.
pub fn a_x_inverse(word: &[usize], rank: usize, max_len: usize) -> Result<Vec<(Word, RationalTerm)>> {
    Ok(a_x(word, rank, max_len)?.into_iter().map(|(w, t)| (w, t.inverted())).collect())
}

/// Value of A_{X^{-1}}(F_w) at X = 0 from the inverted factors.
pub fn a_x_inverse_limit(word: &[usize], rank: usize, max_len: usize) -> Result<BTreeMap<Word, Q>> {
    let mut out: BTreeMap<Word, Q> = BTreeMap::new();
    for (w, t) in a_x_inverse(word, rank, max_len)? {
        if t.num.iter().any(|&x| x < 0) {
            return Err(Error::Consistency(format!("inverted factor not regular at 0: {:?}", t.num)));
        }
        if t.num.iter().all(|&x| x == 0) {
            *out.entry(w).or_insert_with(Q::zero) += t.coef;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// The antipode image (−1)^m · reversed word.
pub fn antipode(word: &[usize]) -> (Word, Q) {
    let sign = if word.len().is_multiple_of(2) { Q::one() } else { -Q::one() };
    (word.iter().rev().cloned().collect(), sign)
}

/// Σ_σ A_X^σ(F_{β_{w(1)}}···F_{β_{w(m)}}) as series keyed by the reordered
/// letter sequence, for formal letters with the given contents.
fn a_x_series_formal(
    word: &[usize],
    contents: &[Lattice],
    order: i64,
    acc: &mut BTreeMap<Word, BTreeMap<Lattice, Q>>,
    sign: &Q,
    expand_letter: &dyn Fn(usize) -> Vec<(Word, Q)>,
) -> Result<()> {
    let cs: Vec<Lattice> = word.iter().map(|&k| contents[k].clone()).collect();
    let grade = vec![1; contents[0].len()];
    for pf in a_x_factors(&cs, DEFAULT_MAX_LEN)? {
        let series = pf.term.expand(&grade, order)?;
        // expand each formal letter into words of simple letters
        let mut words: Vec<(Word, Q)> = vec![(vec![], sign.clone())];
        for &k in &pf.sigma {
            let mut next = Vec::new();
            for (w, c) in &words {
                for (piece, pc) in expand_letter(word[k]) {
                    let mut nw = w.clone();
                    nw.extend(piece);
                    next.push((nw, c * &pc));
                }
            }
            words = next;
        }
        for (w, c) in words {
            let slot = acc.entry(w).or_default();
            for (e, x) in &series {
                *slot.entry(e.clone()).or_insert_with(Q::zero) += &c * x;
            }
        }
    }
    Ok(())
}

/// Checks A_X(···F_ℓF_{ℓ+1}···) − A_X(···F_{ℓ+1}F_ℓ···) = A_X(···[F_ℓ, F_{ℓ+1}]···)
/// through series height `order` for a word of simple letters, with the
/// bracket kept as a letter of content β_ℓ + β_{ℓ+1} and expanded as a
/// commutator in the free algebra. Returns the number of mismatched
/// (word, exponent) coefficients.
pub fn bracket_relation_defect(word: &[usize], rank: usize, ell: usize, order: i64) -> Result<usize> {
    let m = word.len();
    if ell + 1 >= m {
        return Err(Error::InvalidInput(format!("position {ell} has no right neighbour in a word of length {m}")));
    }
    let simple: Vec<Lattice> = word.iter().map(|&i| unit(rank, i)).collect();
    let plain = |k: usize| vec![(vec![word[k]], Q::one())];
    let mut lhs: BTreeMap<Word, BTreeMap<Lattice, Q>> = BTreeMap::new();
    let ids: Vec<usize> = (0..m).collect();
    let mut swapped = ids.clone();
    swapped.swap(ell, ell + 1);
    a_x_series_formal(&ids, &simple, order, &mut lhs, &Q::one(), &plain)?;
    a_x_series_formal(&swapped, &simple, order, &mut lhs, &(-Q::one()), &plain)?;

    // merged letter m sits at position ℓ
    let mut merged = simple.clone();
    merged.push(lattice_add(&simple[ell], &simple[ell + 1]));
    let merged_ids: Vec<usize> = (0..m).filter(|&k| k != ell + 1).map(|k| if k == ell { m } else { k }).collect();
    let (a, b) = (word[ell], word[ell + 1]);
    let bracket = |k: usize| {
        if k == m {
            vec![(vec![a, b], Q::one()), (vec![b, a], -Q::one())]
        } else {
            vec![(vec![word[k]], Q::one())]
        }
    };
    let mut rhs: BTreeMap<Word, BTreeMap<Lattice, Q>> = BTreeMap::new();
    a_x_series_formal(&merged_ids, &merged, order, &mut rhs, &Q::one(), &bracket)?;

    let mut keys: std::collections::BTreeSet<(Word, Lattice)> = std::collections::BTreeSet::new();
    for side in [&lhs, &rhs] {
        for (w, s) in side {
            for e in s.keys() {
                keys.insert((w.clone(), e.clone()));
            }
        }
    }
    let get = |side: &BTreeMap<Word, BTreeMap<Lattice, Q>>, w: &Word, e: &Lattice| {
        side.get(w).and_then(|s| s.get(e)).cloned().unwrap_or_else(Q::zero)
    };
    Ok(keys.iter().filter(|(w, e)| get(&lhs, w, e) != get(&rhs, w, e)).count())
}
