use kzb_core::arith::{q, qi, Matrix, Q};
use kzb_core::bethe::{master_grad, master_hess, weight_fn, MasterSpec};
use kzb_core::eigenfunc::psi;
use kzb_core::hwmod::{form_xi_matrix, q_matrix, HWModule, Rep, TensorModule};
use kzb_core::jack::{inner_k, SymLaurentPoly};
use kzb_core::rootsys::{RootSystem, Weight, WeylWord};
use kzb_core::weyl::{q_via_weyl, t_simple, t_simple_closed_form, t_word};
use proptest::prelude::*;

/// Rationals with denominators from {7, 11, 13} and numerators prime to them.
fn nonintegral() -> impl Strategy<Value = Q> {
    (prop::sample::select(vec![7i64, 11, 13]), -60i64..60).prop_map(|(d, n)| if n % d == 0 { q(n + 1, d) } else { q(n, d) })
}

fn rational() -> impl Strategy<Value = Q> {
    (-30i64..30, 1i64..9).prop_map(|(n, d)| q(n, d))
}

fn irrep(rs: &RootSystem, fund: &[i64]) -> Rep {
    let lam = rs.from_fundamental(&fund.iter().map(|&x| qi(x)).collect::<Vec<_>>());
    HWModule::irreducible(rs, &lam).unwrap().rep
}

fn laurent(rank: usize) -> impl Strategy<Value = SymLaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, rank), -5i64..=5), 0..5).prop_map(|terms| {
        let mut p = SymLaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, qi(c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn weyl_words_act_by_isometries(a in rational(), b in rational(), c in rational(), d in rational(), idx in 0usize..6) {
        let rs = RootSystem::of_type("A2").unwrap();
        let w: WeylWord = rs.weyl_group().unwrap()[idx].clone();
        let (x, y) = (Weight(vec![a, b]), Weight(vec![c, d]));
        prop_assert_eq!(rs.pairing(&rs.apply_word(&w, &x), &rs.apply_word(&w, &y)), rs.pairing(&x, &y));
        for j in 0..2 {
            prop_assert_eq!(rs.reflect(&rs.reflect(&x, j), j), x.clone());
        }
    }

    #[test]
    fn simple_scattering_matches_closed_form(x in nonintegral(), k in 1u64..=4) {
        let rs = RootSystem::of_type("A1").unwrap();
        let rep = irrep(&rs, &[2 * k as i64]);
        let xi = rs.from_fundamental(std::slice::from_ref(&x));
        let want = t_simple_closed_form(&x, k).unwrap();
        prop_assert_eq!(t_simple(&rs, &rep, &xi, 0).unwrap(), Matrix::identity(1).scale(&want));
    }

    #[test]
    fn q_is_w0_scattering_on_sl2(x in nonintegral(), k in 1i64..=3) {
        let rs = RootSystem::of_type("A1").unwrap();
        let rep = irrep(&rs, &[2 * k]);
        let xi = rs.from_fundamental(&[x]);
        prop_assert_eq!(q_matrix(&rs, &rep, &xi, &Weight::zero(1)).unwrap(), q_via_weyl(&rs, &rep, &xi).unwrap());
    }

    #[test]
    fn xi_form_is_symmetric_and_weyl_invariant(a in nonintegral(), b in nonintegral(), idx in 0usize..6) {
        let rs = RootSystem::of_type("A2").unwrap();
        let rep = irrep(&rs, &[1, 1]);
        let xi = Weight(vec![a, b]);
        let zero = Weight::zero(2);
        let m = form_xi_matrix(&rs, &rep, &xi, &zero).unwrap();
        prop_assert!(m.is_symmetric());
        let w = rs.weyl_group().unwrap()[idx].clone();
        let t = t_word(&rs, &rep, &xi, &w).unwrap();
        let mw = form_xi_matrix(&rs, &rep, &rs.apply_word(&w, &xi), &zero).unwrap();
        prop_assert_eq!(&(&t.transpose() * &mw) * &t, m);
    }

    #[test]
    fn eigenfunction_leads_with_its_vector(x in nonintegral(), u in prop::collection::vec(rational(), 1)) {
        let rs = RootSystem::of_type("A1").unwrap();
        let rep = irrep(&rs, &[4]);
        let f = psi(&rs, &rep, &rs.from_fundamental(&[x]), &u).unwrap();
        prop_assert_eq!(f.leading(), u);
    }

    #[test]
    fn constant_term_product_is_symmetric_and_bilinear(p in laurent(2), r in laurent(2), s in laurent(2), c in -4i64..=4, k in 0u32..=1) {
        let rs = RootSystem::of_type("A2").unwrap();
        let pr = inner_k(&rs, &p, &r, k).unwrap();
        prop_assert_eq!(pr.clone(), inner_k(&rs, &r, &p, k).unwrap());
        let lhs = inner_k(&rs, &p.plus(&s.scale(&qi(c))), &r, k).unwrap();
        prop_assert_eq!(lhs, pr + qi(c) * inner_k(&rs, &s, &r, k).unwrap());
    }

    #[test]
    fn master_function_data_is_symmetric_in_same_color(t in prop::collection::vec(rational(), 3), z in rational()) {
        let rs = RootSystem::of_type("A2").unwrap();
        let lams = vec![rs.fundamental_weight(0), rs.fundamental_weight(1), rs.fundamental_weight(0)];
        let points = vec![qi(0), z.clone() + q(1, 101), qi(3)];
        let spec = MasterSpec::rational(&rs, lams.clone(), vec![2, 1], points).unwrap();
        let sing = |x: &Q| x.clone() == qi(0) || x.clone() == qi(3) || x.clone() == z.clone() + q(1, 101);
        prop_assume!(t.iter().all(|x| !sing(x)) && t[0] != t[1] && t[0] != t[2] && t[1] != t[2]);
        let h = master_hess(&spec, &t).unwrap();
        prop_assert!(h.is_symmetric());
        let swapped = vec![t[1].clone(), t[0].clone(), t[2].clone()];
        let (g, gs) = (master_grad(&spec, &t).unwrap(), master_grad(&spec, &swapped).unwrap());
        prop_assert_eq!((&g[0], &g[1], &g[2]), (&gs[1], &gs[0], &gs[2]));
        let tm = TensorModule::new(lams.iter().map(|l| HWModule::irreducible(&rs, l).unwrap()).collect()).unwrap();
        prop_assert_eq!(weight_fn(&spec, &tm, &t).unwrap(), weight_fn(&spec, &tm, &swapped).unwrap());
    }
}
