use kzb_core::arith::{q, qi, Q};
use kzb_core::hwmod::singular::form_xi_via_singular;
use kzb_core::hwmod::*;
use kzb_core::rootsys::{RootSystem, Weight};
use num_traits::Zero;

fn a1() -> RootSystem {
    RootSystem::of_type("A1").unwrap()
}

/// ξ with ⟨ξ, α^∨⟩ = x in rank one.
fn xi1(rs: &RootSystem, x: Q) -> Weight {
    rs.from_fundamental(&[x])
}

fn zero_weight_vector(rep: &Rep) -> Vec<Q> {
    let idx = rep.weight_space(&Weight::zero(rep.rank()));
    let mut u = vec![Q::zero(); rep.dim()];
    u[idx[0]] = qi(1);
    u
}

#[test]
fn q_on_adjoint_sl2_is_two_at_xi_three() {
    let rs = a1();
    let v = HWModule::irreducible(&rs, &Weight::from_ints(&[1])).unwrap();
    let u = zero_weight_vector(&v.rep);
    let nu = Weight::zero(1);
    let xi = xi1(&rs, qi(3));
    let qu = q_apply(&rs, &v.rep, &xi, &nu, &u).unwrap();
    assert_eq!(qu, u.iter().map(|x| x * qi(2)).collect::<Vec<_>>());
    assert_eq!(form_xi(&rs, &v.rep, &xi, &nu, &u, &u).unwrap(), qi(4));
}

#[test]
fn q_on_spin_two_at_xi_five() {
    let rs = a1();
    let v = HWModule::irreducible(&rs, &Weight::from_ints(&[2])).unwrap();
    let m = q_matrix(&rs, &v.rep, &xi1(&rs, qi(5)), &Weight::zero(1)).unwrap();
    assert_eq!(m[(0, 0)], q(7, 2));
}

#[test]
fn q_is_identity_without_higher_weights() {
    let rs = a1();
    let v = HWModule::irreducible(&rs, &Weight::from_ints(&[1])).unwrap();
    // the highest weight space has nothing above it
    let nu = Weight::from_ints(&[1]);
    let m = q_matrix(&rs, &v.rep, &xi1(&rs, q(7, 3)), &nu).unwrap();
    assert_eq!(m[(0, 0)], qi(1));
}

#[test]
fn xi_expansion_is_singular_and_matches_hand_formula() {
    let rs = a1();
    let v = HWModule::irreducible(&rs, &Weight::from_ints(&[1])).unwrap();
    let u = zero_weight_vector(&v.rep);
    let nu = Weight::zero(1);
    let mu = xi1(&rs, q(11, 4));
    let terms = xi_expand(&rs, &v.rep, &mu, &nu, &u).unwrap();
    // Ξ = 1⊗u − (1/c) f⊗(e u), c = ⟨μ, α^∨⟩
    let c = rs.simple_coroot(&mu, 0);
    let eu = v.rep.apply(&v.rep.e[0], &u);
    let t = terms.iter().find(|t| t.word == vec![0]).unwrap();
    assert_eq!(t.vector, eu.iter().map(|x| -x / &c).collect::<Vec<_>>());
    let vt = VermaTensor::new(&rs, &mu, &v.rep);
    let sv = VermaTensor::from_xi_terms(&terms);
    assert!(vt.coordinates(&vt.e_total(0, &sv)).unwrap().is_empty());
}

#[test]
fn a2_adjoint_xi_support_and_singularity() {
    let rs = RootSystem::of_type("A2").unwrap();
    let v = HWModule::irreducible(&rs, &Weight::from_ints(&[1, 1])).unwrap();
    let nu = Weight::zero(2);
    let mu = Weight(vec![q(3, 7), q(-2, 5)]);
    for &i in &v.rep.weight_space(&nu) {
        let mut u = vec![Q::zero(); v.dim()];
        u[i] = qi(1);
        let terms = xi_expand(&rs, &v.rep, &mu, &nu, &u).unwrap();
        for t in &terms {
            assert!([vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]].contains(&t.beta));
        }
        let vt = VermaTensor::new(&rs, &mu, &v.rep);
        let sv = VermaTensor::from_xi_terms(&terms);
        for k in 0..2 {
            assert!(vt.coordinates(&vt.e_total(k, &sv)).unwrap().is_empty());
        }
    }
}

#[test]
fn form_agrees_with_singular_vector_pairing() {
    let rs = RootSystem::of_type("A2").unwrap();
    let v = HWModule::irreducible(&rs, &Weight::from_ints(&[1, 1])).unwrap();
    let nu = Weight::zero(2);
    let xi = Weight(vec![q(5, 3), q(9, 7)]);
    let idx = v.rep.weight_space(&nu);
    for &a in &idx {
        for &b in &idx {
            let mut u = vec![Q::zero(); v.dim()];
            let mut w = vec![Q::zero(); v.dim()];
            u[a] = qi(1);
            w[b] = q(2, 3);
            w[a] += qi(1);
            let lhs = form_xi(&rs, &v.rep, &xi, &nu, &u, &w).unwrap();
            let rhs = form_xi_via_singular(&rs, &v.rep, &xi, &nu, &u, &w).unwrap();
            assert_eq!(lhs, rhs);
            let sym = form_xi(&rs, &v.rep, &xi, &nu, &w, &u).unwrap();
            assert_eq!(lhs, sym);
        }
    }
}

#[test]
fn annihilator_regimes() {
    let rs = a1();
    let nu = Weight::zero(1);
    // V_{2α}: ⟨μ+ρ, α^∨⟩ = 2 ≤ k = 2, e² u ≠ 0 on V[0]
    let v = HWModule::irreducible(&rs, &Weight::from_ints(&[2])).unwrap();
    let u = zero_weight_vector(&v.rep);
    let mu = xi1(&rs, qi(1));
    assert!(!annihilator_test(&rs, &v.rep, &mu, &nu, &u));
    // μ − kρ dominant: the whole zero weight space is admissible
    let mu = xi1(&rs, qi(4));
    assert!(annihilator_test(&rs, &v.rep, &mu, &nu, &u));
    // generic μ
    let mu = xi1(&rs, q(5, 7));
    assert!(annihilator_test(&rs, &v.rep, &mu, &nu, &u));
}

#[test]
fn gram_examples() {
    let rs = RootSystem::of_type("A2").unwrap();
    let mu = Weight(vec![q(1, 3), q(4, 5)]);
    let b = gram_block(&rs, &mu, &[1, 1]).unwrap();
    assert_eq!(b.words.len(), 2);
    assert_eq!(b.basis_selection.len(), 2);
    assert!(b.matrix.is_symmetric());
}

#[test]
fn det_ratio_sl2() {
    let rs = a1();
    let samples: Vec<Weight> = [q(3, 7), q(-5, 2), q(9, 4)].iter().map(|x| Weight(vec![x.clone()])).collect();
    let r = shapovalov_det_ratio(&rs, &samples, &[2]).unwrap();
    assert!(r.is_constant());
    assert_eq!(r.ratios[0].1, qi(2));
    let r = shapovalov_det_ratio(&rs, &samples, &[1]).unwrap();
    assert_eq!(r.ratios[0].1, qi(1));
}

#[test]
fn contravariance_on_modules() {
    let rs = RootSystem::of_type("B2").unwrap();
    let v = HWModule::irreducible(&rs, &rs.fundamental_weight(1)).unwrap();
    let g = v.rep.gram.to_dense();
    for i in 0..2 {
        let lhs = &v.rep.f[i].to_dense().transpose() * &g;
        let rhs = &g * &v.rep.e[i].to_dense();
        assert_eq!(lhs, rhs);
    }
}
