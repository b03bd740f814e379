use kzb_core::arith::{q, qi, q_to_c64, Scalar, C64, Q};
use kzb_core::eigenfunc::*;
use kzb_core::hwmod::{form_xi, HWModule, TensorModule};
use kzb_core::operators::{gaudin_trig, OmegaData, ZeroWeightOps};
use kzb_core::rootsys::{RootSystem, Weight};
use num_traits::{One, Zero};

fn module(rs: &RootSystem, highest: &[Weight]) -> TensorModule {
    TensorModule::new(highest.iter().map(|l| HWModule::irreducible(rs, l).unwrap()).collect()).unwrap()
}

/// sl₂ with V = V_{kα}, one tensor factor.
fn spin(k: i64) -> (RootSystem, TensorModule) {
    let rs = RootSystem::of_type("A1").unwrap();
    let v = module(&rs, &[Weight::from_ints(&[k])]);
    (rs, v)
}

fn xi1(rs: &RootSystem, x: Q) -> Weight {
    rs.from_fundamental(&[x])
}

fn full(v: &TensorModule, u: &[Q]) -> Vec<Q> {
    v.rep.embed(&Weight::zero(v.rep.rank()), u)
}

#[test]
fn a_x_small_words() {
    let t = a_x(&[0], 1, 8).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].1, RationalTerm { coef: qi(1), num: vec![1], dens: vec![vec![1]] });
    // X²/(1−X)² = Σ (n−1) X^n
    let mut total = std::collections::BTreeMap::new();
    for (w, term) in a_x(&[0, 0], 1, 8).unwrap() {
        assert_eq!(w, vec![0, 0]);
        for (e, c) in term.expand(&[1], 8).unwrap() {
            *total.entry(e).or_insert_with(Q::zero) += c;
        }
    }
    for n in 0..=8i64 {
        let want = if n >= 2 { qi(n - 1) } else { Q::zero() };
        assert_eq!(total.get(&vec![n]).cloned().unwrap_or_else(Q::zero), want);
    }
    assert_eq!(descent_exponents(&[1, 0]), vec![1, 0]);
    assert_eq!(descent_exponents(&[2, 0, 1]), vec![1, 0, 0]);
    assert!(a_x(&[0; 9], 1, 8).is_err());
}

#[test]
fn bracket_relation_on_a2_words() {
    for m in 2..=4usize {
        for code in 0..(1usize << m) {
            let word: Vec<usize> = (0..m).map(|k| (code >> k) & 1).collect();
            for ell in 0..m - 1 {
                assert_eq!(bracket_relation_defect(&word, 2, ell, 6).unwrap(), 0, "word {word:?}, position {ell}");
            }
        }
    }
}

#[test]
fn inverse_limit_is_antipode() {
    let lim = a_x_inverse_limit(&[0], 2, 8).unwrap();
    assert_eq!(lim.get(&vec![0]), Some(&qi(-1)));
    let lim = a_x_inverse_limit(&[0, 1], 2, 8).unwrap();
    assert_eq!(lim.len(), 1);
    assert_eq!(lim.get(&vec![1, 0]), Some(&qi(1)));
    for w in [vec![0, 1, 1], vec![1, 0, 1, 0], vec![0, 0, 1]] {
        let lim = a_x_inverse_limit(&w, 2, 8).unwrap();
        let (rev, sign) = antipode(&w);
        assert_eq!(lim.len(), 1);
        assert_eq!(lim.get(&rev), Some(&sign));
    }
    // numerically at X = 10⁻⁶ from the unregularized factors
    let x = C64::new(1e-6, 0.0);
    let inv = C64::new(1.0, 0.0) / x;
    let total: C64 = a_x(&[0, 0], 1, 8).unwrap().iter().map(|(_, t)| t.eval(&[inv])).sum();
    assert!((total - C64::new(1.0, 0.0)).norm() < 1e-5);
}

fn falling(x: &Q, j: i64) -> Q {
    (1..=j).fold(Q::one(), |acc, i| acc * (x - qi(i)))
}

fn factorial(n: i64) -> Q {
    (1..=n).fold(Q::one(), |acc, i| acc * qi(i))
}

/// Coefficient of X^n in Σ_j (−1)^j (k+j)!/(j!(k−j)!) · (X/(1−X))^j / Π_{i≤j}(ξ₁−i).
fn closed_form_coeff(k: i64, x: &Q, n: i64) -> Q {
    let mut acc = Q::zero();
    for j in 0..=k.min(n) {
        // (X/(1−X))^j = Σ_{n≥j} C(n−1, j−1) X^n for j ≥ 1
        let binom = if j == 0 {
            if n == 0 { Q::one() } else { Q::zero() }
        } else {
            factorial(n - 1) / (factorial(j - 1) * factorial(n - j))
        };
        let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
        acc += sign * factorial(k + j) / (factorial(j) * factorial(k - j)) / falling(x, j) * binom;
    }
    acc
}

#[test]
fn sl2_eigenfunction_matches_closed_form() {
    for k in 1..=4 {
        let (rs, v) = spin(k);
        for x in [q(7, 2), q(23, 5), q(-5, 3), qi(9)] {
            if x > qi(0) && x <= qi(k) {
                continue;
            }
            let xi = xi1(&rs, x.clone());
            let f = psi(&rs, &v.rep, &xi, &[qi(1)]).unwrap();
            let s = f.series(7).unwrap();
            for n in 0..=7 {
                assert_eq!(s.coeff(&[n]), vec![closed_form_coeff(k, &x, n)], "k={k}, xi1={x}, n={n}");
            }
        }
    }
    // ξ₁ = 3: coefficient of X is −u
    let (rs, v) = spin(1);
    let s = psi(&rs, &v.rep, &xi1(&rs, qi(3)), &[qi(1)]).unwrap().series(2).unwrap();
    assert_eq!(s.coeff(&[1]), vec![qi(-1)]);
}

#[test]
fn psi_rejects_resonant_exponent() {
    let (rs, v) = spin(2);
    // (ξ−α, ξ−α) = (ξ, ξ) when ξ₁ = 1
    assert!(psi(&rs, &v.rep, &xi1(&rs, qi(1)), &[qi(1)]).is_err());
}

fn zero_ops(v: &TensorModule) -> ZeroWeightOps {
    ZeroWeightOps::new(v, &OmegaData::new(v).unwrap())
}

fn adjoint_a2() -> (RootSystem, TensorModule) {
    let rs = RootSystem::of_type("A2").unwrap();
    let v = module(&rs, &[Weight::from_ints(&[1, 1])]);
    (rs, v)
}

fn basis(d: usize, k: usize) -> Vec<Q> {
    let mut u = vec![Q::zero(); d];
    u[k] = qi(1);
    u
}

#[test]
fn psi_agrees_with_recursion_and_is_eigen() {
    let cases: Vec<(RootSystem, TensorModule, Weight, i64)> = vec![
        {
            let (rs, v) = spin(2);
            let xi = xi1(&rs, q(17, 5));
            (rs, v, xi, 6)
        },
        {
            let (rs, v) = adjoint_a2();
            (rs, v, Weight(vec![q(9, 7), q(-4, 11)]), 5)
        },
    ];
    for (rs, v, xi, order) in cases {
        let ops = zero_ops(&v);
        for k in 0..ops.dim() {
            let u = basis(ops.dim(), k);
            let f = psi(&rs, &v.rep, &xi, &u).unwrap();
            assert_eq!(f.leading(), u);
            let s = f.series(order).unwrap();
            let rec = psi_series_recursive(&ops, &xi, &u, order).unwrap();
            assert!(s.sub(&rec).is_zero(), "psi and recursion differ for basis vector {k}");
            let lap = rs.pairing(&xi, &xi);
            assert!(ops.h0_reduced(&s).unwrap().sub(&s.scale(&lap)).is_zero());
        }
    }
}

#[test]
fn hp_intertwines_with_trigonometric_gaudin() {
    let rs = RootSystem::of_type("A1").unwrap();
    let w = rs.fundamental_weight(0);
    let v = module(&rs, &[w.clone(), w.clone(), Weight::from_ints(&[1])]);
    let om = OmegaData::new(&v).unwrap();
    let ops = ZeroWeightOps::new(&v, &om);
    let xi = xi1(&rs, q(13, 4));
    let zs = [qi(1), q(-3, 2), q(2, 7)];
    let map = PsiMap::new(&rs, &v.rep, &xi).unwrap();
    let order = 4;
    for p in 0..3 {
        let kp = gaudin_trig(&om, &zs, &xi, p).unwrap().restrict(&ops.indices, &ops.indices);
        for k in 0..ops.dim() {
            let u = basis(ops.dim(), k);
            let lhs = ops.hp_reduced(&map.apply_q(&u).unwrap().series(order).unwrap(), &zs, p).unwrap();
            let img: Vec<Q> = kp.mul_vec(&u).iter().map(|x| x * qi(2)).collect();
            let rhs = map.apply_q(&img).unwrap().series(order).unwrap();
            assert!(lhs.sub(&rhs).is_zero(), "p = {p}, k = {k}");
        }
    }
}

#[test]
fn constant_term_pairing_is_the_form() {
    let (rs, v) = spin(1);
    let xi = xi1(&rs, qi(3));
    let f = psi(&rs, &v.rep, &xi, &[qi(1)]).unwrap();
    assert_eq!(pair_constant_term(&v.rep, &f, &f).unwrap(), qi(4));

    let (rs, v) = adjoint_a2();
    let xi = Weight(vec![q(5, 3), q(9, 7)]);
    let d = v.rep.weight_space(&Weight::zero(2)).len();
    let nu = Weight::zero(2);
    for a in 0..d {
        for b in 0..d {
            let (u, w) = (basis(d, a), basis(d, b));
            let fu = psi(&rs, &v.rep, &xi, &u).unwrap();
            let fw = psi(&rs, &v.rep, &xi, &w).unwrap();
            let want = form_xi(&rs, &v.rep, &xi, &nu, &full(&v, &u), &full(&v, &w)).unwrap();
            assert_eq!(pair_constant_term(&v.rep, &fu, &fw).unwrap(), want);
        }
    }
}

#[test]
fn different_exponents_are_orthogonal() {
    let (rs, v) = spin(2);
    let xi = xi1(&rs, q(13, 6));
    let shifted = &xi - &Weight::from_ints(&[1]);
    let f = psi(&rs, &v.rep, &xi, &[qi(1)]).unwrap();
    let g = psi(&rs, &v.rep, &shifted, &[qi(1)]).unwrap();
    assert_eq!(pair_constant_term(&v.rep, &f, &g).unwrap(), Q::zero());
    assert_eq!(pair_constant_term(&v.rep, &g, &f).unwrap(), Q::zero());
    let quad = pair_quadrature(&v.rep, &f.to_c64(), &g.to_c64(), 0.5, 64).unwrap();
    assert!(quad.value.norm() < 1e-10, "{:?}", quad.value);
    let bad = psi(&rs, &v.rep, &xi1(&rs, q(1, 3)), &[qi(1)]).unwrap();
    assert!(pair_constant_term(&v.rep, &f, &bad).is_err());
}

#[test]
fn quadrature_matches_constant_term() {
    for k in 1..=2 {
        let (rs, v) = spin(k);
        let xi = xi1(&rs, q(19, 4));
        let f = psi(&rs, &v.rep, &xi, &[qi(1)]).unwrap();
        let exact = q_to_c64(&pair_constant_term(&v.rep, &f, &f).unwrap());
        let fc = f.to_c64();
        let a = pair_quadrature(&v.rep, &fc, &fc, 0.5, 64).unwrap();
        assert!((a.value - exact).norm() < 1e-8 * exact.norm());
        let b = pair_quadrature(&v.rep, &fc, &fc, 0.4, 64).unwrap();
        let c = pair_quadrature(&v.rep, &fc, &fc, 0.6, 64).unwrap();
        assert!((b.value - c.value).norm() < 1e-8 * exact.norm());
        let coarse = pair_quadrature(&v.rep, &fc, &fc, 0.5, 8).unwrap();
        assert!(a.error_estimate < coarse.error_estimate);
    }
}

#[test]
fn quadrature_is_symmetric_on_a2() {
    let (rs, v) = adjoint_a2();
    let xi = Weight(vec![q(5, 3), q(9, 7)]);
    let d = v.rep.weight_space(&Weight::zero(2)).len();
    let fu = psi(&rs, &v.rep, &xi, &basis(d, 0)).unwrap();
    let mut w = basis(d, 1);
    w[0] = q(1, 2);
    let fw = psi(&rs, &v.rep, &xi, &w).unwrap();
    let exact = pair_constant_term(&v.rep, &fu, &fw).unwrap().to_c64();
    let a = pair_quadrature(&v.rep, &fu.to_c64(), &fw.to_c64(), 0.5, 32).unwrap();
    let b = pair_quadrature(&v.rep, &fw.to_c64(), &fu.to_c64(), 0.5, 32).unwrap();
    assert!((a.value - exact).norm() < 1e-8 * exact.norm().max(1.0));
    assert!((a.value - b.value).norm() < 1e-9 * exact.norm().max(1.0));
}

#[test]
fn evaluator_agrees_with_series() {
    let (rs, v) = adjoint_a2();
    let xi = Weight(vec![q(5, 3), q(9, 7)]);
    let d = v.rep.weight_space(&Weight::zero(2)).len();
    let f = psi(&rs, &v.rep, &xi, &basis(d, 1)).unwrap();
    let s = f.series(30).unwrap();
    let x = [C64::new(0.05, 0.02), C64::new(-0.03, 0.04)];
    let direct = f.eval(&x);
    let mut summed = vec![C64::zero(); d];
    for (e, c) in &s.coeffs {
        let mono = x[0].powi(e[0] as i32) * x[1].powi(e[1] as i32);
        for (a, b) in summed.iter_mut().zip(c) {
            *a += mono * b.to_c64();
        }
    }
    for (a, b) in direct.iter().zip(&summed) {
        assert!((a - b).norm() < 1e-12);
    }
}
