//! Root vectors for non-simple roots as iterated commutators of simple
//! generators, normalized through their action on a Verma highest vector.

use num_traits::Zero;

use crate::arith::{q, Q};
use crate::error::{Error, Result};
use crate::rootsys::{Lattice, RootSystem, Weight};

use super::words::{free_e_action, GenPoly, WordComb};

/// E_α ∈ g_α, F_α ∈ g_{−α} with (E_α, F_α) = c; the dual pair for Ω_α is
/// (E_α, F_α / c).
#[derive(Clone, Debug)]
pub struct RootVector {
    pub alpha: Lattice,
    pub e: GenPoly,
    pub f: GenPoly,
    pub c: Q,
}

/// Generic sample weights used to read off c_α; all pairings with positive
/// roots are positive.
fn sample_weights(rs: &RootSystem) -> [Weight; 2] {
    let r = rs.rank();
    let a: Vec<Q> = (0..r).map(|k| q(7 + 3 * k as i64, 3 + k as i64)).collect();
    let b: Vec<Q> = (0..r).map(|k| q(13 + 5 * k as i64, 4 + 2 * k as i64)).collect();
    [rs.from_fundamental(&a), rs.from_fundamental(&b)]
}

/// Scalar by which E·F acts on 1_μ in the Verma module.
pub fn verma_ef_scalar(rs: &RootSystem, e: &GenPoly, f: &GenPoly, mu: &Weight) -> Q {
    let mut v: WordComb<Q> = WordComb::new();
    for (w, c) in &f.terms {
        super::words::comb_add(&mut v, w.clone(), c.clone());
    }
    let out = apply_e_poly_verma(rs, e, &v, mu);
    out.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
}

/// Σ c_w e_{w0}···e_{w(m−1)} applied to a Verma vector.
pub fn apply_e_poly_verma<T: crate::arith::Scalar>(
    rs: &RootSystem,
    e: &GenPoly,
    v: &WordComb<T>,
    mu: &Weight,
) -> WordComb<T> {
    let mut acc = WordComb::new();
    for (w, c) in &e.terms {
        let mut cur = v.clone();
        for &i in w.iter().rev() {
            cur = free_e_action(rs, &cur, i, mu);
        }
        for (word, x) in cur {
            super::words::comb_add(&mut acc, word, x * T::from_q(c));
        }
    }
    acc
}

/// Σ c_w f_{w0}···f_{w(m−1)} applied to a Verma vector (left multiplication).
pub fn apply_f_poly_verma<T: crate::arith::Scalar>(f: &GenPoly, v: &WordComb<T>) -> WordComb<T> {
    let mut acc = WordComb::new();
    for (w, c) in &f.terms {
        for (word, x) in v {
            let mut nw = w.clone();
            nw.extend(word);
            super::words::comb_add(&mut acc, nw, x.clone() * T::from_q(c));
        }
    }
    acc
}

fn normalize(rs: &RootSystem, alpha: &Lattice, e: GenPoly, f: GenPoly) -> Option<RootVector> {
    let aw = Weight::from_ints(alpha);
    let [m1, m2] = sample_weights(rs);
    let c1 = verma_ef_scalar(rs, &e, &f, &m1) / rs.pairing(&m1, &aw);
    let c2 = verma_ef_scalar(rs, &e, &f, &m2) / rs.pairing(&m2, &aw);
    (c1 == c2 && !c1.is_zero()).then(|| RootVector { alpha: alpha.clone(), e, f, c: c1 })
}

/// Root vectors for all positive roots, in the order of `positive_roots`.
pub fn root_vectors(rs: &RootSystem) -> Result<Vec<RootVector>> {
    let mut out: Vec<RootVector> = Vec::with_capacity(rs.positive_roots().len());
    for (k, alpha) in rs.positive_roots().iter().enumerate() {
        if rs.is_simple(k) {
            let i = alpha.iter().position(|&x| x == 1).unwrap();
            let rv = normalize(rs, alpha, GenPoly::generator(i), GenPoly::generator(i))
                .ok_or_else(|| Error::Consistency(format!("simple root vector {alpha:?} failed to normalize")))?;
            out.push(rv);
            continue;
        }
        // recorded parent first, then the alternative decompositions
        let mut paths = vec![rs.parent(k).unwrap()];
        paths.extend(rs.decompositions(k).into_iter().filter(|p| Some(*p) != rs.parent(k)));
        let mut found = None;
        for (j, i) in paths {
            let prev = &out[j];
            let e = GenPoly::generator(i).bracket(&prev.e);
            let f = prev.f.bracket(&GenPoly::generator(i));
            if e.is_zero() || f.is_zero() {
                continue;
            }
            if let Some(rv) = normalize(rs, alpha, e, f) {
                found = Some(rv);
                break;
            }
        }
        out.push(found.ok_or_else(|| Error::Consistency(format!("no bracket path normalizes root {alpha:?}")))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qi;

    #[test]
    fn simple_roots_have_unit_pairing_on_short_roots() {
        let rs = RootSystem::of_type("B2").unwrap();
        let rv = root_vectors(&rs).unwrap();
        // α₁ long with (α₁,α₁) = 4: c = 2/(α,α) = 1/2
        assert_eq!(rv[0].c, q(1, 2));
        assert_eq!(rv[1].c, qi(1));
        assert_eq!(rv.len(), 4);
    }

    #[test]
    fn g2_all_paths_normalize() {
        let rs = RootSystem::of_type("G2").unwrap();
        assert_eq!(root_vectors(&rs).unwrap().len(), 6);
    }
}
