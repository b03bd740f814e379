use kzb_core::arith::{q, qi, C64, Q};
use kzb_core::bethe::SolverOptions;
use kzb_core::jack::*;
use kzb_core::rootsys::{RootSystem, Weight};
use num_traits::{One, Zero};

fn fund(rs: &RootSystem, c: &[i64]) -> Weight {
    rs.from_fundamental(&c.iter().map(|&x| qi(x)).collect::<Vec<_>>())
}

/// (a)_n
fn rising(a: &Q, n: i64) -> Q {
    (0..n).fold(Q::one(), |acc, j| acc * (a + qi(j)))
}

/// Monic Gegenbauer C_n^{(k+1)}(cos θ) in X = X_ω: coefficient of X^{n−2j}
/// is (λ)_j (λ)_{n−j} / (j!(n−j)!) over the j = 0 one.
fn gegenbauer(n: i64, k: u32) -> SymLaurentPoly {
    let lam = qi(k as i64 + 1);
    let fact = |m: i64| (1..=m).fold(Q::one(), |acc, x| acc * qi(x));
    let c = |j: i64| rising(&lam, j) * rising(&lam, n - j) / (fact(j) * fact(n - j));
    let mut p = SymLaurentPoly::zero();
    for j in 0..=n {
        p.add_term(vec![n - 2 * j], c(j) / c(0));
    }
    p
}

#[test]
fn inner_product_by_hand() {
    let rs = RootSystem::of_type("A1").unwrap();
    let one = SymLaurentPoly::one(1);
    assert_eq!(inner_k(&rs, &one, &one, 1).unwrap(), qi(3));
    assert_eq!(inner_k(&rs, &one, &one, 0).unwrap(), qi(1));
    let m = orbit_sum(&rs, &rs.simple_root(0)).unwrap();
    assert_eq!(inner_k(&rs, &m, &one, 1).unwrap(), qi(-4));
    // A₂, k = 0: ⟨1,1⟩ = const Π_Δ(1 − X_α) / 6 = 1
    let rs2 = RootSystem::of_type("A2").unwrap();
    assert_eq!(inner_k(&rs2, &SymLaurentPoly::one(2), &SymLaurentPoly::one(2), 0).unwrap(), qi(1));
}

#[test]
fn sl2_jack_polynomials_are_gegenbauer() {
    let rs = RootSystem::of_type("A1").unwrap();
    assert_eq!(jack_gs(&rs, &Weight::zero(1), 1).unwrap(), SymLaurentPoly::one(1).mark_invariant(&rs));
    assert_eq!(jack_gs(&rs, &fund(&rs, &[1]), 2).unwrap(), orbit_sum(&rs, &fund(&rs, &[1])).unwrap());
    let p = jack_gs(&rs, &rs.simple_root(0), 1).unwrap();
    assert_eq!(p.coeff(&[0]), q(4, 3));
    for k in 0..=3 {
        for n in 0..=6 {
            let p = jack_gs(&rs, &fund(&rs, &[n]), k).unwrap();
            let mut g = gegenbauer(n, k);
            g.invariant = true;
            assert_eq!(p, g, "n = {n}, k = {k}");
        }
    }
}

fn dominant_up_to(rs: &RootSystem, max_h: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    for a in 0..=max_h {
        for b in 0..=max_h {
            let w = fund(rs, &[a, b]);
            if w.height() <= qi(max_h) {
                out.push(w);
            }
        }
    }
    out
}

#[test]
fn jack_polynomials_are_orthogonal() {
    let rs = RootSystem::of_type("A1").unwrap();
    for k in 0..=2 {
        let nus: Vec<Weight> = (0..=6).map(|n| fund(&rs, &[n])).filter(|w| w.height() <= qi(6)).collect();
        let ps = jack_family(&rs, &nus, k).unwrap();
        for a in 0..ps.len() {
            assert!(ps[a].invariant);
            for b in 0..a {
                assert!(inner_k(&rs, &ps[a], &ps[b], k).unwrap().is_zero());
            }
        }
    }
    let rs = RootSystem::of_type("A2").unwrap();
    for k in 0..=2 {
        let nus = dominant_up_to(&rs, 3);
        let ps = jack_family(&rs, &nus, k).unwrap();
        for a in 0..ps.len() {
            assert!(ps[a].invariant, "{:?}", nus[a]);
            // leading monomial X_{−ν}
            let lead: Vec<i64> = rs.to_fundamental(&nus[a]).iter().map(|x| -x.to_integer().to_string().parse::<i64>().unwrap()).collect();
            assert_eq!(ps[a].coeff(&lead), qi(1));
            for b in 0..a {
                assert!(inner_k(&rs, &ps[a], &ps[b], k).unwrap().is_zero(), "{:?} {:?} k = {k}", nus[a], nus[b]);
            }
        }
    }
}

#[test]
fn weyl_denominator_factorizes() {
    for ty in ["A1", "A2", "A3"] {
        let rs = RootSystem::of_type(ty).unwrap();
        let pi = pi_poly(&rs);
        for k in 0..=2u32 {
            let lhs = pi.pow(k + 1, rs.rank()).mul(&pi.negated().pow(k + 1, rs.rank()));
            let mut rhs = weight_density(&rs, k);
            rhs.invariant = false;
            assert_eq!(lhs, rhs, "{ty} k = {k}");
        }
    }
}

#[test]
fn jack_from_antisymmetrized_eigenfunction() {
    let rs = RootSystem::of_type("A1").unwrap();
    for k in 1..=2 {
        let params = JackParams::new(&rs, k).unwrap();
        for n in 0..=3 {
            let nu = fund(&rs, &[n]);
            let got = jack_from_psi(&params, &params.xi_for(&nu), 2).unwrap();
            assert_eq!(got, jack_gs(&rs, &nu, k).unwrap(), "n = {n}, k = {k}");
        }
    }
    let rs = RootSystem::of_type("A2").unwrap();
    let params = JackParams::new(&rs, 1).unwrap();
    // every positive-root value of ξ = ν + 2ρ must exceed 2 to keep the
    // Verma modules at wξ − ρ nondegenerate within the depth of V
    for nu in [fund(&rs, &[1, 1]), fund(&rs, &[2, 1]), fund(&rs, &[1, 2])] {
        let got = jack_from_psi(&params, &params.xi_for(&nu), 1).unwrap();
        assert_eq!(got, jack_gs(&rs, &nu, 1).unwrap(), "{nu:?}");
    }
    for nu in [fund(&rs, &[0, 0]), fund(&rs, &[1, 0])] {
        assert!(matches!(jack_from_psi(&params, &params.xi_for(&nu), 1), Err(kzb_core::Error::Degenerate(_))));
    }
    assert!(JackParams::new(&RootSystem::of_type("B2").unwrap(), 1).is_err());
    assert!(jack_from_psi(&params, &fund(&rs, &[1, 2]), 1).is_err());
}

#[test]
fn jack_norm_matches_hessian() {
    let rs = RootSystem::of_type("A1").unwrap();
    for k in 1..=2 {
        let params = JackParams::new(&rs, k).unwrap();
        for n in [0, 1, 2, 3] {
            let rec = jack_norm_via_bethe(&params, &fund(&rs, &[n]), &SolverOptions::default()).unwrap();
            assert_eq!(rec.status, JackNormStatus::Compared);
            assert!(rec.rel_diff.unwrap() < 1e-8, "k = {k}, n = {n}: {rec:?}");
            let (lhs, psi) = (rec.lhs.unwrap(), rec.psi_norm.expect("ψ defined in rank one"));
            assert!((lhs - psi).norm() < 1e-8 * psi.norm(), "{lhs} vs {psi}");
        }
    }
    let rs = RootSystem::of_type("A2").unwrap();
    let params = JackParams::new(&rs, 1).unwrap();
    for nu in [fund(&rs, &[0, 0]), fund(&rs, &[1, 0]), fund(&rs, &[1, 1])] {
        let rec = jack_norm_via_bethe(&params, &nu, &SolverOptions::default()).unwrap();
        assert_eq!(rec.status, JackNormStatus::Compared);
        assert!(rec.rel_diff.unwrap() < 1e-8, "{nu:?}: {rec:?}");
        if let Some(psi) = rec.psi_norm {
            let lhs: C64 = rec.lhs.unwrap();
            assert!((lhs - psi).norm() < 1e-8 * psi.norm(), "{nu:?}: {lhs} vs {psi}");
        }
    }
}
