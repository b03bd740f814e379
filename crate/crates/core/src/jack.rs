//! Jack polynomials of type A: Gram–Schmidt against the constant-term
//! inner product, extraction from antisymmetrized eigenfunctions, and the
//! comparison of their norms with master-function Hessians.
//!
//! Laurent polynomials are stored in the fundamental-weight lattice: the
//! exponent e stands for X_{Σ e_j ω_j}, X_μ = e^{−2πiμ(λ)}.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{Matrix, C64, Q};
use crate::bethe::{solve_critical, weight_fn, MasterSpec, SolverOptions};
use crate::eigenfunc::{pair_constant_term, PsiMap};
use crate::error::{Error, Result};
use crate::hwmod::{HWModule, TensorModule};
use crate::rootsys::{lattice_add, lattice_height, lattice_of_height, lattice_sub, lattice_to_weight, Lattice, RootSystem, Weight};
use crate::weyl::antisymmetrize;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SymLaurentPoly {
    pub coeffs: BTreeMap<Lattice, Q>,
    /// Set once the support and coefficients were checked to be W-invariant.
    pub invariant: bool,
}

impl SymLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], Q::one())
    }

    pub fn monomial(e: Lattice, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn add_term(&mut self, e: Lattice, c: Q) {
        let slot = self.coeffs.entry(e.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
        self.invariant = false;
    }

    pub fn coeff(&self, e: &[i64]) -> Q {
        self.coeffs.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        out.invariant = self.invariant && other.invariant;
        out
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), c * s)).collect(), invariant: self.invariant }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                out.add_term(lattice_add(a, b), x * y);
            }
        }
        out
    }

    pub fn pow(&self, n: u32, rank: usize) -> Self {
        (0..n).fold(Self::one(rank), |acc, _| acc.mul(self))
    }

    /// φ(−λ): every X_μ becomes X_{−μ}.
    pub fn negated(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone())).collect(), invariant: self.invariant }
    }

    pub fn constant_term(&self) -> Q {
        self.coeffs.iter().find(|(e, _)| e.iter().all(|&x| x == 0)).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    /// Whether c(w·e) = c(e) for every simple reflection.
    pub fn check_invariant(&self, rs: &RootSystem) -> bool {
        self.coeffs.iter().all(|(e, c)| (0..rs.rank()).all(|j| &self.coeff(&reflect_fundamental(rs, e, j)) == c))
    }

    pub fn mark_invariant(mut self, rs: &RootSystem) -> Self {
        self.invariant = self.check_invariant(rs);
        self
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        self.coeffs
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(crate::arith::q_to_c64(c), |acc, (&k, xi)| acc * xi.powi(k as i32)))
            .sum()
    }
}

/// s_j on fundamental coordinates: e ↦ e − e_j α_j.
fn reflect_fundamental(rs: &RootSystem, e: &[i64], j: usize) -> Lattice {
    let a = fundamental_of_lattice(rs, &unit(rs.rank(), j));
    e.iter().zip(&a).map(|(x, y)| x - e[j] * y).collect()
}

fn unit(r: usize, j: usize) -> Lattice {
    let mut v = vec![0; r];
    v[j] = 1;
    v
}

/// Fundamental coordinates (μ, α_j^∨) of an integral weight.
pub fn fundamental_exponent(rs: &RootSystem, mu: &Weight) -> Result<Lattice> {
    rs.to_fundamental(mu)
        .iter()
        .map(|x| if x.is_integer() { Ok(x.to_integer().try_into().unwrap_or(i64::MAX)) } else { Err(Error::InvalidInput(format!("{mu:?} is not integral"))) })
        .collect()
}

fn fundamental_of_lattice(rs: &RootSystem, b: &[i64]) -> Lattice {
    fundamental_exponent(rs, &lattice_to_weight(b)).expect("root lattice is integral")
}

fn is_type_a(rs: &RootSystem) -> bool {
    let r = rs.rank();
    (0..r).all(|i| {
        (0..r).all(|j| {
            let want = if i == j {
                2
            } else if i.abs_diff(j) == 1 {
                -1
            } else {
                0
            };
            rs.cartan().entry(i, j) == want
        })
    })
}

/// W-orbit of an integral weight, without repeats.
pub fn orbit(rs: &RootSystem, mu: &Weight) -> Result<Vec<Weight>> {
    let mut out: Vec<Weight> = Vec::new();
    for w in rs.weyl_group()? {
        let v = rs.apply_word(&w, mu);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// m_μ = Σ_{μ' ∈ Wμ} X_{−μ'}.
pub fn orbit_sum(rs: &RootSystem, mu: &Weight) -> Result<SymLaurentPoly> {
    let mut p = SymLaurentPoly::zero();
    for v in orbit(rs, mu)? {
        p.add_term(fundamental_exponent(rs, &v)?.iter().map(|x| -x).collect(), Q::one());
    }
    p.invariant = true;
    Ok(p)
}

fn one_minus(rs: &RootSystem, root: &[i64]) -> SymLaurentPoly {
    let r = rs.rank();
    let mut p = SymLaurentPoly::one(r);
    p.add_term(fundamental_of_lattice(rs, root), -Q::one());
    p
}

/// Π_{α ∈ Δ} (1 − X_α)^{k+1}.
pub fn weight_density(rs: &RootSystem, k: u32) -> SymLaurentPoly {
    let r = rs.rank();
    let mut acc = SymLaurentPoly::one(r);
    for a in rs.positive_roots() {
        let neg: Lattice = a.iter().map(|x| -x).collect();
        acc = acc.mul(&one_minus(rs, a)).mul(&one_minus(rs, &neg));
    }
    acc.pow(k + 1, r).mark_invariant(rs)
}

/// Π = X_{−ρ} Π_{α > 0} (1 − X_α).
pub fn pi_poly(rs: &RootSystem) -> SymLaurentPoly {
    let rho = fundamental_exponent(rs, rs.rho()).expect("ρ is integral");
    let mut acc = SymLaurentPoly::monomial(rho.iter().map(|x| -x).collect(), Q::one());
    for a in rs.positive_roots() {
        acc = acc.mul(&one_minus(rs, a));
    }
    acc
}

/// Constant term of a·b·c without forming the product.
fn triple_constant(a: &SymLaurentPoly, b: &SymLaurentPoly, c: &SymLaurentPoly) -> Q {
    let mut acc = Q::zero();
    for (ea, xa) in &a.coeffs {
        for (eb, xb) in &b.coeffs {
            let need: Lattice = ea.iter().zip(eb).map(|(x, y)| -x - y).collect();
            if let Some(xc) = c.coeffs.get(&need) {
                acc += xa * xb * xc;
            }
        }
    }
    acc
}

/// ⟨φ₁, φ₂⟩_k = (1/|W|) const φ₁(λ) φ₂(−λ) Π_{α∈Δ}(1 − X_α)^{k+1}.
pub fn inner_k(rs: &RootSystem, p: &SymLaurentPoly, q: &SymLaurentPoly, k: u32) -> Result<Q> {
    let w = rs.weyl_group()?.len() as i64;
    Ok(inner_with_density(p, q, &weight_density(rs, k)) / Q::from_integer(w.into()))
}

fn inner_with_density(p: &SymLaurentPoly, q: &SymLaurentPoly, density: &SymLaurentPoly) -> Q {
    triple_constant(p, &q.negated(), density)
}

/// Dominant integral μ ≠ ν with ν − μ ∈ Q₊, highest first.
pub fn dominant_below(rs: &RootSystem, nu: &Weight) -> Result<Vec<Weight>> {
    if !rs.is_dominant_integral(nu) {
        return Err(Error::InvalidInput(format!("{nu:?} is not dominant integral")));
    }
    // dominant weights have nonnegative root coordinates, so ν − μ fits in the box below ν
    let bound: Vec<i64> = nu.coords().iter().map(|x| x.floor().to_integer().try_into().unwrap_or(0)).collect();
    let max_h: i64 = bound.iter().sum();
    let mut out = Vec::new();
    for h in 1..=max_h {
        for b in lattice_of_height(rs.rank(), h) {
            if b.iter().zip(&bound).any(|(x, y)| x > y) {
                continue;
            }
            let mu = nu - &lattice_to_weight(&b);
            if rs.is_dominant_integral(&mu) {
                out.push(mu);
            }
        }
    }
    Ok(out)
}

/// P_ν^{(k)} = m_ν + Σ_{μ<ν} c_μ m_μ orthogonal to every lower m_μ, solved
/// as one exact linear system.
pub fn jack_gs(rs: &RootSystem, nu: &Weight, k: u32) -> Result<SymLaurentPoly> {
    let lower = dominant_below(rs, nu)?;
    let density = weight_density(rs, k);
    let top = orbit_sum(rs, nu)?;
    if lower.is_empty() {
        return Ok(top);
    }
    let ms: Vec<SymLaurentPoly> = lower.iter().map(|m| orbit_sum(rs, m)).collect::<Result<_>>()?;
    let n = ms.len();
    let mut g = Matrix::zeros(n, n);
    let mut rhs = vec![Q::zero(); n];
    for a in 0..n {
        for b in 0..n {
            g[(a, b)] = inner_with_density(&ms[b], &ms[a], &density);
        }
        rhs[a] = -inner_with_density(&top, &ms[a], &density);
    }
    let c = g.solve(&rhs).ok_or_else(|| Error::Degenerate(format!("singular Gram matrix below {nu:?} at k = {k}")))?;
    let mut p = top;
    for (m, x) in ms.iter().zip(&c) {
        p = p.plus(&m.scale(x));
    }
    Ok(p.mark_invariant(rs))
}

/// P_ν^{(k)} for several ν in parallel.
pub fn jack_family(rs: &RootSystem, nus: &[Weight], k: u32) -> Result<Vec<SymLaurentPoly>> {
    nus.par_iter().map(|nu| jack_gs(rs, nu, k)).collect()
}

/// sl_{r+1} with V = S^{k(r+1)} ℂ^{r+1}, highest weight k(r+1)ω₁.
#[derive(Clone, Debug)]
pub struct JackParams {
    pub rs: RootSystem,
    pub k: u32,
    pub module: HWModule,
}

impl JackParams {
    pub fn new(rs: &RootSystem, k: u32) -> Result<Self> {
        if !is_type_a(rs) {
            return Err(Error::InvalidInput("Jack polynomials are only built for type A".into()));
        }
        let r = rs.rank() as i64;
        let lam = rs.fundamental_weight(0).scale(&Q::from_integer((k as i64 * (r + 1)).into()));
        let module = HWModule::irreducible(rs, &lam)?;
        let d0 = module.rep.weight_space(&Weight::zero(rs.rank())).len();
        if d0 != 1 {
            return Err(Error::Consistency(format!("V[0] has dimension {d0}, expected 1")));
        }
        Ok(JackParams { rs: rs.clone(), k, module })
    }

    pub fn highest(&self) -> &Weight {
        &self.module.highest
    }

    /// ξ = ν + (k+1)ρ.
    pub fn xi_for(&self, nu: &Weight) -> Weight {
        nu + &self.rs.rho().scale(&Q::from_integer((self.k as i64 + 1).into()))
    }
}

fn positive_density(rs: &RootSystem, k: u32) -> BTreeMap<Lattice, Q> {
    let r = rs.rank();
    let mut acc: BTreeMap<Lattice, Q> = BTreeMap::from([(vec![0; r], Q::one())]);
    for _ in 0..=k {
        for a in rs.positive_roots() {
            let mut next = acc.clone();
            for (e, c) in &acc {
                let s = next.entry(lattice_add(e, a)).or_insert_with(Q::zero);
                *s -= c;
            }
            next.retain(|_, c| !c.is_zero());
            acc = next;
        }
    }
    acc
}

/// Reads P_{ξ−(k+1)ρ}^{(k)} off ψ_u^{Wξ} = Π^{k+1} P u with u = 1 spanning V[0],
/// by dividing the root-lattice series of e^{−2πiξ(λ)}ψ_u^{Wξ} by
/// Π_{α>0}(1 − X_α)^{k+1}. The quotient must vanish past the height of
/// ν − w₀ν; `extra` further heights are checked.
pub fn jack_from_psi(params: &JackParams, xi: &Weight, extra: i64) -> Result<SymLaurentPoly> {
    let rs = &params.rs;
    let k = params.k;
    let nu = xi - &rs.rho().scale(&Q::from_integer((k as i64 + 1).into()));
    if !rs.is_dominant_integral(&nu) {
        return Err(Error::InvalidInput(format!("ξ − (k+1)ρ = {nu:?} is not dominant integral")));
    }
    let w0 = rs.longest_element()?;
    let span = (&nu - &rs.apply_word(&w0, &nu)).as_lattice().ok_or_else(|| Error::Consistency("ν − w₀ν not in the root lattice".into()))?;
    let top = lattice_height(&span);
    let order = top + extra.max(1);

    let rep = &params.module.rep;
    let mut total: BTreeMap<Lattice, Q> = BTreeMap::new();
    for term in antisymmetrize(rs, rep, xi, &[Q::one()])? {
        let shift = (xi - &term.psi.xi).as_lattice().ok_or_else(|| Error::Consistency("ξ − wξ not in the root lattice".into()))?;
        let sh = lattice_height(&shift);
        if sh > order {
            continue;
        }
        let sign = Q::from_integer(term.sign.into());
        for (b, v) in term.psi.series(order - sh)?.coeffs {
            let s = total.entry(lattice_add(&b, &shift)).or_insert_with(Q::zero);
            *s += &sign * &v[0];
        }
    }

    // power-series division by Π_{α>0}(1 − X_α)^{k+1}, constant term 1
    let dens = positive_density(rs, k);
    let mut quot: BTreeMap<Lattice, Q> = BTreeMap::new();
    for h in 0..=order {
        for b in lattice_of_height(rs.rank(), h) {
            let mut x = total.get(&b).cloned().unwrap_or_else(Q::zero);
            for (g, d) in &dens {
                if lattice_height(g) == 0 || lattice_height(g) > h {
                    continue;
                }
                let rest = lattice_sub(&b, g);
                if rest.iter().any(|&y| y < 0) {
                    continue;
                }
                if let Some(r) = quot.get(&rest) {
                    x -= d * r;
                }
            }
            if !x.is_zero() {
                if h > top {
                    return Err(Error::Consistency(format!("nonzero remainder at X^{b:?} past height {top}")));
                }
                quot.insert(b, x);
            }
        }
    }
    let lead = quot.get(&vec![0; rs.rank()]).cloned().unwrap_or_else(Q::zero);
    if lead.is_zero() {
        return Err(Error::Consistency("antisymmetrized eigenfunction has zero leading term".into()));
    }
    let base = fundamental_exponent(rs, &nu)?;
    let mut p = SymLaurentPoly::zero();
    for (b, c) in quot {
        let e: Lattice = fundamental_of_lattice(rs, &b).iter().zip(&base).map(|(x, y)| x - y).collect();
        p.add_term(e, c / &lead);
    }
    let p = p.mark_invariant(rs);
    if !p.invariant {
        return Err(Error::Consistency("quotient is not Weyl invariant".into()));
    }
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JackNormStatus {
    Compared,
    /// No isolated critical point was found.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct JackNormRecord {
    pub status: JackNormStatus,
    pub jack_norm: Q,
    /// ⟨P, P⟩_k S(u(t_cr), u(t_cr)).
    pub lhs: Option<C64>,
    /// Hess_t Φ at t_cr.
    pub rhs: Option<C64>,
    /// ⟨ψ^ξ_u, ψ^ξ_u⟩ for ξ = ν + (k+1)ρ.
    pub psi_norm: Option<C64>,
    pub rel_diff: Option<f64>,
    pub t_cr: Option<Vec<C64>>,
}

/// Both sides of ⟨P_ν, P_ν⟩_k S(u, u) = Hess Φ at a critical point of the
/// KZB master function with one point at Z = 1 and ξ = ν + (k+1)ρ.
pub fn jack_norm_via_bethe(params: &JackParams, nu: &Weight, opts: &SolverOptions) -> Result<JackNormRecord> {
    let rs = &params.rs;
    let p = jack_gs(rs, nu, params.k)?;
    let jack_norm = inner_k(rs, &p, &p, params.k)?;
    let xi = params.xi_for(nu);
    let lam = params.highest().clone();
    let spec = MasterSpec::kzb(rs, vec![lam.clone()], vec![C64::new(1.0, 0.0)], &xi)?;
    let found = solve_critical(&spec, opts);
    let Some(cp) = found.iter().find(|c| c.isolated) else {
        return Ok(JackNormRecord { status: JackNormStatus::Inconclusive, jack_norm, lhs: None, rhs: None, psi_norm: None, rel_diff: None, t_cr: None });
    };
    let tm = TensorModule::new(vec![params.module.clone()])?;
    let zero = Weight::zero(rs.rank());
    let u = tm.rep.extract(&zero, &weight_fn(&spec, &tm, &cp.t)?);
    let g = tm.rep.restrict(&tm.rep.gram, &zero).map(crate::arith::q_to_c64);
    let s = crate::arith::dot(&u, &g.mul_vec(&u));
    let lhs = crate::arith::q_to_c64(&jack_norm) * s;
    // at integral ξ the Shapovalov form may degenerate within the depth of V
    let psi_norm = match PsiMap::new(rs, &tm.rep, &xi) {
        Ok(map) => Some(pair_constant_term(&tm.rep, &map.apply_c64(&u)?, &map.apply_c64(&u)?)?),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e),
    };
    let rhs = cp.hess_det;
    Ok(JackNormRecord {
        status: JackNormStatus::Compared,
        jack_norm,
        lhs: Some(lhs),
        rhs: Some(rhs),
        psi_norm,
        rel_diff: Some((lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE)),
        t_cr: Some(cp.t.clone()),
    })
}
