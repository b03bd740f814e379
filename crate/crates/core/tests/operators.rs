use kzb_core::arith::{q, qi, Matrix, SparseMatrix, Q};
use kzb_core::eigenfunc::VectorSeries;
use kzb_core::hwmod::{HWModule, TensorModule};
use kzb_core::operators::*;
use kzb_core::rootsys::{RootSystem, Weight};
use num_traits::Zero;

fn tensor(rs: &RootSystem, highest: &[Weight]) -> TensorModule {
    TensorModule::new(highest.iter().map(|l| HWModule::irreducible(rs, l).unwrap()).collect()).unwrap()
}

fn a1_doublets() -> (RootSystem, TensorModule) {
    let rs = RootSystem::of_type("A1").unwrap();
    let w = rs.fundamental_weight(0);
    let v = tensor(&rs, &[w.clone(), w]);
    (rs, v)
}

/// v and f v in V_ω.
fn doublet_basis(v: &TensorModule) -> (Vec<Q>, Vec<Q>) {
    let m = &v.factors[0];
    let top: Vec<Q> = m.highest_vector();
    let low = m.rep.apply(&m.rep.f[0], &top);
    (top, low)
}

fn assert_zero(m: &SparseMatrix<Q>) {
    assert!(m.is_zero(), "expected zero, got {} nonzero entries", m.nnz());
}

#[test]
fn omega_on_doublets_by_hand() {
    let (_, v) = a1_doublets();
    let om = OmegaData::new(&v).unwrap();
    let (top, low) = doublet_basis(&v);
    let x = v.pure_tensor(&[low.clone(), top.clone()]);
    let y = v.pure_tensor(&[top, low]);
    let got = om.omega(0, 1).apply(&x);
    let want: Vec<Q> = x.iter().zip(&y).map(|(a, b)| -a * q(1, 2) + b).collect();
    assert_eq!(got, want);
}

#[test]
fn rational_gaudin_on_singular_vector() {
    let (_, v) = a1_doublets();
    let om = OmegaData::new(&v).unwrap();
    let (top, low) = doublet_basis(&v);
    let a = v.pure_tensor(&[low.clone(), top.clone()]);
    let b = v.pure_tensor(&[top, low]);
    let u: Vec<Q> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let k1 = gaudin_rational(&om, &[qi(0), qi(1)], 0).unwrap();
    assert_eq!(k1.apply(&u), u.iter().map(|x| x * q(3, 2)).collect::<Vec<_>>());
    assert!(gaudin_rational(&om, &[qi(2), qi(2)], 0).is_err());
}

#[test]
fn omega_is_symmetric_and_matches_casimir_difference() {
    let rs = RootSystem::of_type("B2").unwrap();
    let v = tensor(&rs, &[rs.fundamental_weight(0), rs.fundamental_weight(1)]);
    let om = OmegaData::new(&v).unwrap();
    let g = v.rep.gram.to_dense();
    let o = om.omega(0, 1).to_dense();
    assert_eq!(&o.transpose() * &g, &g * &o);
    let half = q(1, 2);
    let diff = om.casimir_pair(0, 1).minus(&om.casimir_factor(0)).minus(&om.casimir_factor(1)).scale(&half);
    assert_zero(&diff.minus(&om.omega(0, 1)));
    assert_zero(&om.omega_plus(0, 1).plus(&om.omega_minus(0, 1)).minus(&om.omega(0, 1)));
}

#[test]
fn casimir_is_scalar_on_irreducibles() {
    for (ty, hw) in [("A1", vec![3]), ("A2", vec![1, 1]), ("A2", vec![2, 0]), ("B2", vec![0, 1]), ("G2", vec![1, 0])] {
        let rs = RootSystem::of_type(ty).unwrap();
        let lam = rs.from_fundamental(&hw.iter().map(|&x| qi(x)).collect::<Vec<_>>());
        let m = HWModule::irreducible(&rs, &lam).unwrap();
        let c = casimir(&m.rep).unwrap();
        let shifted = &lam + &rs.rho().scale(&qi(2));
        let val = rs.pairing(&lam, &shifted);
        assert_zero(&c.minus(&SparseMatrix::identity(m.dim()).scale(&val)));
    }
}

fn three_points() -> (RootSystem, TensorModule) {
    let rs = RootSystem::of_type("A2").unwrap();
    let w = rs.fundamental_weight(0);
    let v = tensor(&rs, &[w.clone(), w.clone(), w]);
    (rs, v)
}

#[test]
fn rational_gaudin_commute_and_are_invariant() {
    let (_, v) = three_points();
    let om = OmegaData::new(&v).unwrap();
    let z = [q(1, 3), q(-2, 5), qi(2)];
    let ks: Vec<SparseMatrix<Q>> = (0..3).map(|p| gaudin_rational(&om, &z, p).unwrap()).collect();
    for a in 0..3 {
        for b in 0..a {
            assert_zero(&ks[a].commutator(&ks[b]));
        }
        for i in 0..2 {
            assert_zero(&ks[a].commutator(&v.rep.e[i]));
            assert_zero(&ks[a].commutator(&v.rep.f[i]));
        }
        assert!(preserves_weights(&v.rep, &ks[a]));
        // S(K u, w) = S(u, K w)
        let g = v.rep.gram.to_dense();
        let k = ks[a].to_dense();
        assert_eq!(&k.transpose() * &g, &g * &k);
    }
}

#[test]
fn trigonometric_gaudin_commute_with_each_other_and_cartan() {
    let (rs, v) = three_points();
    let om = OmegaData::new(&v).unwrap();
    let zs = [q(3, 2), q(-1, 4), q(5, 7)];
    let xi = Weight(vec![q(7, 3), q(-2, 9)]);
    let ks: Vec<SparseMatrix<Q>> = (0..3).map(|p| gaudin_trig(&om, &zs, &xi, p).unwrap()).collect();
    for a in 0..3 {
        for b in 0..a {
            assert_zero(&ks[a].commutator(&ks[b]));
        }
        for i in 0..rs.rank() {
            assert_zero(&ks[a].commutator(&v.rep.h(i)));
        }
    }
    assert!(gaudin_trig(&om, &[qi(1), qi(1), qi(2)], &xi, 0).is_err());
    assert!(gaudin_trig(&om, &[qi(0), qi(1), qi(2)], &xi, 0).is_err());
}

#[test]
fn cartan_part_vanishes_on_zero_weight_space() {
    let (_, v) = three_points();
    let om = OmegaData::new(&v).unwrap();
    let ops = ZeroWeightOps::new(&v, &om);
    assert!(ops.dim() > 0);
    assert!(ops.omega0_total_on_zero().iter().all(|x| x.is_zero()));
}

fn random_series(ops: &ZeroWeightOps, xi: &Weight, order: i64, seed: i64) -> VectorSeries<Q> {
    let mut s = VectorSeries::new(xi, order, ops.dim());
    let r = xi.rank();
    let mut k = seed;
    for h in 0..=order {
        for b in kzb_core::rootsys::lattice_of_height(r, h) {
            let v: Vec<Q> = (0..ops.dim())
                .map(|_| {
                    k = (k * 37 + 11) % 101;
                    q(k - 50, 7 + k % 5)
                })
                .collect();
            s.add_to(&b, &v);
        }
    }
    s
}

#[test]
fn h0_on_constant_series() {
    let (rs, v) = a1_doublets();
    let om = OmegaData::new(&v).unwrap();
    let ops = ZeroWeightOps::new(&v, &om);
    let xi = rs.from_fundamental(&[q(5, 3)]);
    let mut s = VectorSeries::new(&xi, 0, ops.dim());
    let u = vec![qi(2), qi(-1)];
    s.add_to(&[0], &u);
    let r = ops.h0_reduced(&s).unwrap();
    let lap = rs.pairing(&xi, &xi);
    assert_eq!(r.coeff(&[0]), u.iter().map(|x| x * &lap).collect::<Vec<_>>());
}

#[test]
fn kzb_series_operators_commute() {
    for (rs, v) in [a1_doublets(), three_points()] {
        let om = OmegaData::new(&v).unwrap();
        let ops = ZeroWeightOps::new(&v, &om);
        let xi = Weight((0..rs.rank()).map(|k| q(3 + 2 * k as i64, 7)).collect());
        let order = if rs.rank() == 1 { 6 } else { 3 };
        let s = random_series(&ops, &xi, order, 5);
        let zs: Vec<Q> = (0..v.n_factors()).map(|k| q(2 + 3 * k as i64, 5 - k as i64)).collect();
        for p in 0..v.n_factors() {
            let a = ops.hp_reduced(&ops.h0_reduced(&s).unwrap(), &zs, p).unwrap();
            let b = ops.h0_reduced(&ops.hp_reduced(&s, &zs, p).unwrap()).unwrap();
            assert!(ops.dim() > 0);
            assert!(a.sub(&b).is_zero(), "[H0, H_{p}] nonzero in rank {}", rs.rank());
        }
    }
}

#[test]
fn endomap_restriction_has_weight_space_size() {
    let (_, v) = a1_doublets();
    let om = OmegaData::new(&v).unwrap();
    let m = EndoMap::restrict(&v.rep, &om.omega(0, 1), &Weight::zero(1));
    assert_eq!(m.dim(), 2);
    let expected = Matrix::from_rows(vec![vec![q(-1, 2), qi(1)], vec![qi(1), q(-1, 2)]]);
    assert_eq!(m.matrix, expected);
}

#[test]
fn elliptic_coefficients_reach_trigonometric_limits() {
    use kzb_core::arith::C64;
    let (t, w) = (C64::new(0.3, 0.0), C64::new(0.7, 0.0));
    let r = elliptic_limit_check(C64::new(0.0, 8.0), t, w).unwrap();
    assert!(r.max() < 1e-18, "{r:?}");
    assert!(r.as_array().iter().all(|&x| x > 0.0));
    for row in decay_exponents(&[6.0, 8.0, 10.0], t, w).unwrap() {
        for x in row {
            assert!((x - 1.0).abs() < 0.05, "decay exponent {x}");
        }
    }
    // complex test points and an η independent of t
    let r = elliptic_limit_check(C64::new(0.1, 7.0), C64::new(0.2, 0.1), C64::new(0.55, -0.05)).unwrap();
    assert!(r.max() < 1e-15, "{r:?}");
    assert!(elliptic_limit_check(C64::new(0.0, 1.5), t, w).is_err());
}
