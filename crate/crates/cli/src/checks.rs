//! Check families. Each family turns an experiment into check records;
//! errors while setting a family up are config errors, errors inside a single
//! check become failing or inconclusive records.

use std::collections::BTreeMap;
use std::time::Instant;

use kzb_core::arith::{dot, q_to_c64, qi, vec_to_c64, Matrix, C64, Q};
use kzb_core::bethe::{
    eigen_residual, master_z_partial, solve_critical, trig_eigenvalue, weight_fn, xi_form_c64, CriticalPoint, MasterKind,
    MasterSpec,
};
use kzb_core::eigenfunc::{bracket_relation_defect, pair_constant_term, pair_quadrature, psi, psi_series_recursive, PsiMap, VectorSeries};
use kzb_core::error::Error;
use kzb_core::hwmod::{form_xi_matrix, q_matrix, shapovalov_det_ratio, HWModule, TensorModule};
use kzb_core::jack::{inner_k, jack_from_psi, jack_gs, jack_norm_via_bethe, JackNormStatus, JackParams};
use kzb_core::operators::{decay_exponents, elliptic_limit_check, gaudin_rational, gaudin_trig, OmegaData, ZeroWeightOps};
use kzb_core::rootsys::{lattice_box, lattice_height, RootSystem, Weight, WeylWord};
use kzb_core::weyl::{q_via_weyl, t_simple, t_simple_closed_form, t_word};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{num_to_c64, ConfigError, Experiment};
use crate::report::{CheckRecord, SolverLog, Status, Val};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Roots,
    Shapovalov,
    Bethe,
    Eigen,
    Weyl,
    Jack,
    Limits,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::Roots, Family::Shapovalov, Family::Bethe, Family::Eigen, Family::Weyl, Family::Jack, Family::Limits];

    pub fn name(self) -> &'static str {
        match self {
            Family::Roots => "roots",
            Family::Shapovalov => "shapovalov",
            Family::Bethe => "bethe",
            Family::Eigen => "eigen",
            Family::Weyl => "weyl",
            Family::Jack => "jack",
            Family::Limits => "limits",
        }
    }

    /// Check names with a one-line description each.
    pub fn checks(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Family::Roots => &[
                ("roots.rho", "ρ pairs to 1 with every simple coroot"),
                ("roots.longest_length", "length of w₀ equals the number of positive roots"),
                ("roots.weyl_order", "|W| equals the product of (exponent + 1) read off root heights"),
            ],
            Family::Shapovalov => &[("shapovalov.det_ratio[β]", "Gram determinant over the Kac-Kazhdan product is constant in μ")],
            Family::Bethe => &[
                ("bethe.norm[i]", "norm of the Bethe vector (or eigenfunction) equals the Hessian determinant"),
                ("bethe.quadrature[i]", "KZB only: torus quadrature of the eigenfunction norm equals the Hessian"),
                ("bethe.orthogonal[i,j]", "vectors of distinct isolated orbits are orthogonal"),
            ],
            Family::Eigen => &[
                ("eigen.residual[i,p]", "Bethe vector is an eigenvector of the p-th Hamiltonian"),
                ("eigen.value[i,p]", "its eigenvalue equals the z_p-derivative of the master function (relative to max(|ε|, 1))"),
                ("eigen.h0[i]", "KZB only: reduced H₀ eigenvalue equals (ξ, ξ)"),
                ("eigen.recursion[b]", "closed-form eigenfunction series equals the recursion, exactly"),
                ("eigen.h0_exact[b]", "reduced H₀ acts on the exact series by (ξ, ξ)"),
                ("eigen.pairing[a,b]", "torus quadrature of the eigenfunction pairing equals the ξ-form"),
                ("eigen.bracket[w,l]", "bracket relation of A_X at letters l, l+1 of w, exactly"),
            ],
            Family::Weyl => &[
                ("weyl.q_equals_w0", "dynamical operator Q equals the w₀ scattering matrix on V[0]"),
                ("weyl.word_independence", "scattering matrix of w₀ agrees for a reduced word and its reverse"),
                ("weyl.form_invariance[w]", "ξ-form is invariant under the scattering matrices"),
                ("weyl.closed_form", "rank one, V = V_{kα}: T_s(ξ) equals its product formula"),
            ],
            Family::Jack => &[
                ("jack.dual_construction[ν]", "Jack polynomial from the eigenfunction equals Gram-Schmidt"),
                ("jack.norm[ν]", "⟨P, P⟩_k S(u, u) equals the Hessian of the KZB master function"),
            ],
            Family::Limits => &[
                ("limits.residual", "elliptic coefficients reach their trigonometric limits"),
                ("limits.decay.<coeff>[j]", "residuals decay like e^{2πiτ}"),
            ],
        }
    }

    /// Whether the experiment carries the inputs this family needs.
    pub fn applicable(self, ex: &Experiment) -> bool {
        match self {
            Family::Roots => true,
            Family::Shapovalov => ex.file.shapovalov.is_some(),
            Family::Bethe => ex.kind.is_some(),
            Family::Eigen => ex.kind.is_some() || ex.series_inputs() || ex.file.bracket_max_len.is_some(),
            Family::Weyl => !ex.lambdas.is_empty() && ex.xi.is_some(),
            Family::Jack => ex.file.jack.is_some(),
            Family::Limits => ex.file.limits.is_some(),
        }
    }

    pub fn missing_inputs(self) -> &'static str {
        match self {
            Family::Roots => "",
            Family::Shapovalov => "a \"shapovalov\" section",
            Family::Bethe => "\"master_kind\", \"modules\" and \"points\"",
            Family::Eigen => "\"master_kind\", or \"modules\" with \"xi\", or \"bracket_max_len\"",
            Family::Weyl => "\"modules\" and \"xi\"",
            Family::Jack => "a \"jack\" section",
            Family::Limits => "a \"limits\" section",
        }
    }
}

#[derive(Default)]
pub struct FamilyOut {
    pub checks: Vec<CheckRecord>,
    pub logs: Vec<SolverLog>,
    pub data: BTreeMap<String, Value>,
}

fn setup<T>(what: &str, r: Result<T, Error>) -> Result<T, ConfigError> {
    r.map_err(|e| ConfigError(format!("{what}: {e}")))
}

/// Status for an error raised inside one check.
fn error_status(e: &Error) -> Status {
    match e {
        Error::Degenerate(_) | Error::Pole(_) | Error::Singular(_) => Status::Inconclusive,
        _ => Status::Fail,
    }
}

fn failed(rec: CheckRecord, e: &Error) -> CheckRecord {
    rec.status(error_status(e)).detail(e.to_string())
}

fn timed(f: impl FnOnce() -> CheckRecord) -> CheckRecord {
    let start = Instant::now();
    let mut r = f();
    r.wall_time = start.elapsed().as_secs_f64();
    r
}

fn fund_json(rs: &RootSystem, w: &Weight) -> Value {
    json!(rs.to_fundamental(w).iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn fund_label(rs: &RootSystem, w: &Weight) -> String {
    let f: Vec<String> = rs.to_fundamental(w).iter().map(|x| x.to_string()).collect();
    format!("[{}]", f.join(","))
}

fn word_label(w: &WeylWord) -> String {
    if w.letters.is_empty() {
        "[e]".into()
    } else {
        format!("[{}]", w.letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("."))
    }
}

fn tensor(rs: &RootSystem, lambdas: &[Weight]) -> Result<TensorModule, ConfigError> {
    let factors = setup("modules", lambdas.iter().map(|l| HWModule::irreducible(rs, l)).collect::<Result<Vec<_>, _>>())?;
    setup("modules", TensorModule::new(factors))
}

fn complex_vals(v: &[C64]) -> Vec<Val> {
    v.iter().map(|&z| Val::complex(z)).collect()
}

/// Exact matrix comparison: lhs and rhs carry the sum of squared entries.
fn matrix_check(rec: CheckRecord, a: &Matrix<Q>, b: &Matrix<Q>) -> CheckRecord {
    let sq = |m: &Matrix<Q>| {
        let mut s = Q::zero();
        for i in 0..m.rows() {
            for x in m.row(i) {
                s += x * x;
            }
        }
        s
    };
    let rec = rec.compare_exact(&sq(a), &sq(b));
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return rec.status(Status::Fail).detail("shapes differ");
    }
    let mut differing = 0;
    let mut worst = 0.0f64;
    for i in 0..a.rows() {
        for (x, y) in a.row(i).iter().zip(b.row(i)) {
            if x != y {
                differing += 1;
                worst = worst.max(kzb_core::arith::q_to_f64(&(x - y)).abs());
            }
        }
    }
    let mut rec = rec;
    rec.abs_err = Some(worst);
    if differing == 0 {
        rec.status(Status::Pass).detail(format!("{}x{} matrices equal", a.rows(), a.cols()))
    } else {
        rec.status(Status::Fail).detail(format!("{differing} entries differ"))
    }
}

pub fn roots(ex: &Experiment) -> Result<FamilyOut, ConfigError> {
    let rs = &ex.rs;
    let r = rs.rank();
    let mut out = FamilyOut::default();
    let group = setup("Weyl group", rs.weyl_group())?;
    let w0 = group.last().cloned().unwrap_or_else(WeylWord::identity);
    let pos: Vec<Vec<i64>> = rs.positive_roots().to_vec();
    out.data.insert(
        "roots".into(),
        json!({
            "rank": r,
            "cartan": rs.cartan().entries(),
            "positive_roots": pos,
            "n_positive_roots": pos.len(),
            "rho_fundamental": fund_json(rs, rs.rho()),
            "weyl_order": group.len(),
            "longest_word": w0.letters,
        }),
    );
    let inputs = json!({ "cartan": rs.cartan().entries() });
    out.checks.push(timed(|| {
        let ones = (0..r).filter(|&i| rs.simple_coroot(rs.rho(), i).is_one()).count();
        CheckRecord::new("roots.rho", inputs.clone(), 0.0).compare_exact(&qi(ones as i64), &qi(r as i64))
    }));
    out.checks.push(timed(|| {
        CheckRecord::new("roots.longest_length", inputs.clone(), 0.0)
            .compare_exact(&qi(w0.length() as i64), &qi(pos.len() as i64))
    }));
    out.checks.push(timed(|| {
        // exponent m occurs (#roots of height m) − (#roots of height m+1) times
        let top = pos.iter().map(|b| lattice_height(b)).max().unwrap_or(0);
        let count = |h: i64| pos.iter().filter(|b| lattice_height(b) == h).count() as i64;
        let mut prod = Q::one();
        for m in 1..=top {
            for _ in 0..(count(m) - count(m + 1)) {
                prod *= qi(m + 1);
            }
        }
        CheckRecord::new("roots.weyl_order", inputs.clone(), 0.0).compare_exact(&qi(group.len() as i64), &prod)
    }));
    Ok(out)
}

/// Weights with every coordinate non-integral: denominators from
/// {7, 11, 13, 17}, numerators prime to them.
pub fn generic_samples(r: usize, n: usize, seed: u64) -> Vec<Weight> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dens = [7i64, 11, 13, 17];
    (0..n)
        .map(|_| {
            Weight(
                (0..r)
                    .map(|_| {
                        let d = dens[rng.gen_range(0..dens.len())];
                        let mut a: i64 = rng.gen_range(-40..=40);
                        if a % d == 0 {
                            a += 1;
                        }
                        Q::new(a.into(), d.into())
                    })
                    .collect(),
            )
        })
        .collect()
}

pub fn shapovalov(ex: &Experiment) -> Result<FamilyOut, ConfigError> {
    let sh = ex.file.shapovalov.as_ref().ok_or_else(|| ConfigError("missing shapovalov section".into()))?;
    let samples = generic_samples(ex.rs.rank(), sh.samples, ex.file.seed);
    let betas: Vec<Vec<i64>> = lattice_box(&sh.beta_max).into_iter().filter(|b| b.iter().any(|&x| x != 0)).collect();
    let checks = betas
        .par_iter()
        .map(|beta| {
            timed(|| {
                let inputs = json!({
                    "beta": beta,
                    "samples": samples.iter().map(|m| m.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                });
                let rec = CheckRecord::new(format!("shapovalov.det_ratio[{}]", beta.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")), inputs, 0.0);
                match shapovalov_det_ratio(&ex.rs, &samples, beta) {
                    Err(e) => failed(rec, &e),
                    Ok(rep) if rep.ratios.len() < 2 => {
                        rec.status(Status::Inconclusive).detail(format!("{} of {} samples hit a vanishing factor", rep.skipped.len(), samples.len()))
                    }
                    Ok(rep) => {
                        let first = &rep.ratios[0].1;
                        let other = rep.ratios.iter().map(|(_, x)| x).find(|x| *x != first).unwrap_or(&rep.ratios[rep.ratios.len() - 1].1);
                        let ok = rep.is_constant();
                        rec.compare_exact(first, other)
                            .status(if ok { Status::Pass } else { Status::Fail })
                            .detail(format!("{} samples, {} skipped", rep.ratios.len(), rep.skipped.len()))
                    }
                }
            })
        })
        .collect();
    Ok(FamilyOut { checks, ..Default::default() })
}

/// Critical points of one master function and their Bethe vectors.
pub struct BetheRun {
    pub kind: MasterKind,
    pub spec: MasterSpec<C64>,
    pub qspec: Option<MasterSpec<Q>>,
    pub tm: TensorModule,
    pub xi: Option<Weight>,
    /// Weight of the Bethe vectors.
    pub nu: Weight,
    pub found: Vec<CriticalPoint>,
    pub iso: Vec<CriticalPoint>,
    pub us: Vec<Vec<C64>>,
}

fn lift(spec: &MasterSpec<Q>) -> MasterSpec<C64> {
    MasterSpec {
        kind: spec.kind,
        rs: spec.rs.clone(),
        lambdas: spec.lambdas.clone(),
        m: spec.m.clone(),
        points: vec_to_c64(&spec.points),
        mu: spec.mu.clone(),
        include_point_term: spec.include_point_term,
    }
}

impl BetheRun {
    pub fn new(ex: &Experiment) -> Result<Self, ConfigError> {
        let rs = &ex.rs;
        let kind = ex.kind.ok_or_else(|| ConfigError("master_kind is required".into()))?;
        let tm = tensor(rs, &ex.lambdas)?;
        let total = ex.lambdas.iter().fold(Weight::zero(rs.rank()), |a, l| &a + l);
        let (spec, qspec, nu) = match kind {
            MasterKind::Kzb => {
                let xi = ex.xi.as_ref().expect("validated");
                let spec = setup("master function", MasterSpec::kzb(rs, ex.lambdas.clone(), ex.complex_points(), xi))?;
                (spec, None, Weight::zero(rs.rank()))
            }
            MasterKind::Rational | MasterKind::Trigonometric => {
                let m = ex.m.clone().expect("validated");
                let ma = Weight::from_ints(&m.iter().map(|&x| x as i64).collect::<Vec<_>>());
                let nu = &total - &ma;
                let pts = ex.exact_points().expect("validated");
                let qspec = if kind == MasterKind::Rational {
                    setup("master function", MasterSpec::rational(rs, ex.lambdas.clone(), m, pts))?
                } else {
                    let xi = ex.xi.as_ref().expect("validated");
                    let mu = &(xi - rs.rho()) - &nu.scale(&Q::new(1.into(), 2.into()));
                    setup("master function", MasterSpec::trigonometric(rs, ex.lambdas.clone(), m, pts, mu))?
                };
                (lift(&qspec), Some(qspec), nu)
            }
        };
        let found = solve_critical(&spec, &ex.solver);
        let iso: Vec<CriticalPoint> = found.iter().filter(|c| c.isolated).cloned().collect();
        let us = iso.iter().map(|cp| weight_fn(&spec, &tm, &cp.t)).collect::<Result<Vec<_>, _>>();
        let us = setup("Bethe vectors", us)?;
        Ok(BetheRun { kind, spec, qspec, tm, xi: ex.xi.clone(), nu, found, iso, us })
    }

    pub fn log(&self, ex: &Experiment) -> SolverLog {
        SolverLog {
            label: format!("{:?}", self.kind).to_lowercase(),
            seed: ex.solver.seed,
            n_starts: ex.solver.n_starts,
            orbits: self.found.len(),
            isolated: self.iso.len(),
            points: self.found.iter().map(|c| complex_vals(&c.t)).collect(),
            grad_norms: self.found.iter().map(|c| c.grad_norm).collect(),
            hess_dets: self.found.iter().map(|c| Val::complex(c.hess_det)).collect(),
        }
    }

    fn zero(&self) -> Weight {
        Weight::zero(self.spec.rs.rank())
    }

    fn psi_map(&self) -> Result<PsiMap, Error> {
        PsiMap::new(&self.spec.rs, &self.tm.rep, self.xi.as_ref().expect("KZB run has ξ"))
    }

    /// Norm of the i-th vector in the form matching the kind.
    fn norm(&self, a: usize, b: usize, map: Option<&PsiMap>) -> Result<C64, Error> {
        let rs = &self.spec.rs;
        let (u, v) = (&self.us[a], &self.us[b]);
        match self.kind {
            MasterKind::Rational => Ok(self.tm.rep.form(u, v)),
            MasterKind::Trigonometric => xi_form_c64(rs, &self.tm.rep, self.xi.as_ref().expect("validated"), &self.nu, u, v),
            MasterKind::Kzb => {
                let map = map.ok_or_else(|| Error::Degenerate("no eigenfunction map".into()))?;
                let z = self.zero();
                let fa = map.apply_c64(&self.tm.rep.extract(&z, u))?;
                let fb = map.apply_c64(&self.tm.rep.extract(&z, v))?;
                pair_constant_term(&self.tm.rep, &fa, &fb)
            }
        }
    }

    fn inputs(&self, i: usize) -> Value {
        json!({ "kind": format!("{:?}", self.kind).to_lowercase(), "orbit": i, "t": complex_vals(&self.iso[i].t) })
    }
}

pub fn bethe(ex: &Experiment, run: &BetheRun, tol: f64) -> Result<FamilyOut, ConfigError> {
    let map = if run.kind == MasterKind::Kzb { Some(run.psi_map()) } else { None };
    let map_ref = match &map {
        Some(Ok(m)) => Some(m),
        _ => None,
    };
    let map_err = match &map {
        Some(Err(e)) => Some(e.clone()),
        _ => None,
    };
    let n = run.iso.len();
    let mut checks: Vec<CheckRecord> = (0..n)
        .into_par_iter()
        .map(|i| {
            timed(|| {
                let rec = CheckRecord::new(format!("bethe.norm[{i}]"), run.inputs(i), tol);
                if let Some(e) = &map_err {
                    return failed(rec, e);
                }
                match run.norm(i, i, map_ref) {
                    Ok(x) => rec.compare(x, run.iso[i].hess_det),
                    Err(e) => failed(rec, &e),
                }
            })
        })
        .collect();
    if let Some(map) = map_ref {
        let q = &ex.file.quadrature;
        let z = run.zero();
        checks.par_extend((0..n).into_par_iter().map(|i| {
            timed(|| {
                let mut inputs = run.inputs(i);
                inputs["eps"] = json!(q.eps);
                inputs["nodes"] = json!(q.n);
                let rec = CheckRecord::new(format!("bethe.quadrature[{i}]"), inputs, tol);
                let f = match map.apply_c64(&run.tm.rep.extract(&z, &run.us[i])) {
                    Ok(f) => f,
                    Err(e) => return failed(rec, &e),
                };
                match pair_quadrature(&run.tm.rep, &f, &f, q.eps, q.n) {
                    Ok(r) => rec.compare(r.value, run.iso[i].hess_det).detail(format!("quadrature error estimate {:.1e}", r.error_estimate)),
                    Err(e) => failed(rec, &e),
                }
            })
        }));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..a).map(move |b| (a, b))).collect();
    checks.par_extend(pairs.par_iter().map(|&(a, b)| {
        timed(|| {
            let rec = CheckRecord::new(format!("bethe.orthogonal[{a},{b}]"), json!({ "orbits": [a, b] }), tol);
            if let Some(e) = &map_err {
                return failed(rec, e);
            }
            let vals = (run.norm(a, b, map_ref), run.norm(a, a, map_ref), run.norm(b, b, map_ref));
            match vals {
                (Ok(x), Ok(na), Ok(nb)) => {
                    let scale = (na.norm() * nb.norm()).sqrt().max(f64::MIN_POSITIVE);
                    let mut rec = rec;
                    rec.lhs = Some(Val::complex(x));
                    rec.rhs = Some(Val::complex(C64::zero()));
                    rec.abs_err = Some(x.norm());
                    rec.rel_err = Some(x.norm() / scale);
                    let ok = x.norm() <= tol * scale;
                    rec.status(if ok { Status::Pass } else { Status::Fail }).detail("relative to the geometric mean of the two norms")
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => failed(rec, &e),
            }
        })
    }));
    if run.iso.is_empty() {
        checks.push(
            CheckRecord::new("bethe.norm", json!({}), tol)
                .status(Status::Inconclusive)
                .detail(format!("no isolated critical point among {} orbits", run.found.len())),
        );
    }
    Ok(FamilyOut { checks, logs: vec![run.log(ex)], ..Default::default() })
}

pub fn eigen(ex: &Experiment, run: Option<&BetheRun>, tol: f64) -> Result<FamilyOut, ConfigError> {
    let mut checks = match run {
        Some(run) => hamiltonians(ex, run, tol)?,
        None => Vec::new(),
    };
    if ex.series_inputs() {
        checks.extend(series_checks(ex, tol)?);
    }
    if let Some(n) = ex.file.bracket_max_len {
        checks.extend(bracket_checks(ex, n));
    }
    Ok(FamilyOut { checks, ..Default::default() })
}

fn exact_series(rec: CheckRecord, a: &VectorSeries<Q>, b: &VectorSeries<Q>) -> CheckRecord {
    let d = a.sub(b);
    let rec = rec.within(a.max_norm(), b.max_norm());
    let mut rec = rec.status(if d.is_zero() { Status::Pass } else { Status::Fail });
    rec.tolerance = 0.0;
    rec.abs_err = Some(d.max_norm());
    rec.detail("lhs and rhs are the largest coefficients")
}

fn series_checks(ex: &Experiment, tol: f64) -> Result<Vec<CheckRecord>, ConfigError> {
    let rs = &ex.rs;
    let tm = tensor(rs, &ex.lambdas)?;
    let om = setup("Casimir data", OmegaData::new(&tm))?;
    let ops = ZeroWeightOps::new(&tm, &om);
    let xi = ex.xi.as_ref().expect("checked");
    let order = ex.file.order;
    let lap = rs.pairing(xi, xi);
    let d = ops.dim();
    let basis = |b: usize| -> Vec<Q> { (0..d).map(|k| if k == b { Q::one() } else { Q::zero() }).collect() };
    let mut out: Vec<CheckRecord> = (0..d)
        .into_par_iter()
        .flat_map_iter(|b| {
            let inputs = json!({ "basis": b, "order": order, "xi": fund_json(rs, xi) });
            let start = Instant::now();
            let rec = CheckRecord::new(format!("eigen.recursion[{b}]"), inputs.clone(), 0.0);
            let h0 = CheckRecord::new(format!("eigen.h0_exact[{b}]"), inputs, 0.0);
            let u = basis(b);
            let s = psi(rs, &tm.rep, xi, &u).and_then(|f| f.series(order));
            let mut recs = match s {
                Err(e) => vec![failed(rec, &e), failed(h0, &e)],
                Ok(s) => {
                    let r1 = match psi_series_recursive(&ops, xi, &u, order) {
                        Ok(r) => exact_series(rec, &s, &r),
                        Err(e) => failed(rec, &e),
                    };
                    let r2 = match ops.h0_reduced(&s) {
                        Ok(h) => exact_series(h0, &h, &s.scale(&lap)),
                        Err(e) => failed(h0, &e),
                    };
                    vec![r1, r2]
                }
            };
            let t = start.elapsed().as_secs_f64() / 2.0;
            recs.iter_mut().for_each(|r| r.wall_time = t);
            recs
        })
        .collect();
    let q = &ex.file.quadrature;
    let z = Weight::zero(rs.rank());
    let prep = PsiMap::new(rs, &tm.rep, xi).and_then(|m| Ok((m, form_xi_matrix(rs, &tm.rep, xi, &z)?)));
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (0..=a).map(move |b| (a, b))).collect();
    out.par_extend(pairs.par_iter().map(|&(a, b)| {
        timed(|| {
            let rec = CheckRecord::new(format!("eigen.pairing[{a},{b}]"), json!({ "basis": [a, b], "eps": q.eps, "nodes": q.n }), tol);
            let (map, m) = match &prep {
                Ok(p) => p,
                Err(e) => return failed(rec, e),
            };
            let f = |k: usize| map.apply_q(&basis(k)).map(|f| f.to_c64());
            let got = f(a).and_then(|fa| pair_quadrature(&tm.rep, &fa, &f(b)?, q.eps, q.n));
            match got {
                Ok(r) => {
                    let scale = q_to_c64(&m[(a, a)]).norm().max(q_to_c64(&m[(b, b)]).norm()).max(1.0);
                    rec.compare_floor(r.value, q_to_c64(&m[(a, b)]), scale)
                        .detail(format!("relative to the larger diagonal entry; error estimate {:.1e}", r.error_estimate))
                }
                Err(e) => failed(rec, &e),
            }
        })
    }));
    Ok(out)
}

fn bracket_checks(ex: &Experiment, max_len: usize) -> Vec<CheckRecord> {
    let r = ex.rs.rank();
    let order = ex.file.order;
    let mut jobs = Vec::new();
    for len in 2..=max_len {
        for code in 0..r.pow(len as u32) {
            let w: Vec<usize> = (0..len).map(|i| (code / r.pow(i as u32)) % r).collect();
            for ell in 0..len - 1 {
                jobs.push((w.clone(), ell));
            }
        }
    }
    jobs.par_iter()
        .map(|(w, ell)| {
            timed(|| {
                let label = w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".");
                let rec = CheckRecord::new(format!("eigen.bracket[{label},{ell}]"), json!({ "word": w, "position": ell, "order": order }), 0.0);
                match bracket_relation_defect(w, r, *ell, order) {
                    Ok(n) => rec.compare_exact(&qi(n as i64), &Q::zero()).detail("lhs counts mismatched coefficients"),
                    Err(e) => failed(rec, &e),
                }
            })
        })
        .collect()
}

fn hamiltonians(ex: &Experiment, run: &BetheRun, tol: f64) -> Result<Vec<CheckRecord>, ConfigError> {
    let om = setup("Casimir data", OmegaData::new(&run.tm))?;
    let n_pts = run.tm.n_factors();
    let jobs: Vec<(usize, usize)> = (0..run.iso.len()).flat_map(|i| (0..n_pts).map(move |p| (i, p))).collect();
    let mut checks = Vec::new();
    match run.kind {
        MasterKind::Rational | MasterKind::Trigonometric => {
            let qspec = run.qspec.as_ref().expect("exact spec");
            let out: Vec<Vec<CheckRecord>> = jobs
                .par_iter()
                .map(|&(i, p)| {
                    let start = Instant::now();
                    let inputs = json!({ "orbit": i, "point": p });
                    let res = CheckRecord::new(format!("eigen.residual[{i},{p}]"), inputs.clone(), tol);
                    let val = CheckRecord::new(format!("eigen.value[{i},{p}]"), inputs, tol);
                    let op = if run.kind == MasterKind::Rational {
                        gaudin_rational(&om, &qspec.points, p)
                    } else {
                        gaudin_trig(&om, &qspec.points, run.xi.as_ref().expect("validated"), p)
                    };
                    let want = if run.kind == MasterKind::Rational {
                        master_z_partial(&run.spec, &run.iso[i].t, p)
                    } else {
                        trig_eigenvalue(&run.spec, &run.iso[i].t, p)
                    };
                    let mut recs = match (op, want) {
                        (Ok(op), Ok(want)) => {
                            let r = eigen_residual(&op, &run.us[i]);
                            vec![res.within(r.residual, 0.0), val.compare_floor(r.eigenvalue, want, 1.0)]
                        }
                        (Err(e), _) | (_, Err(e)) => vec![failed(res, &e), failed(val, &e)],
                    };
                    let t = start.elapsed().as_secs_f64() / 2.0;
                    recs.iter_mut().for_each(|r| r.wall_time = t);
                    recs
                })
                .collect();
            checks.extend(out.into_iter().flatten());
        }
        MasterKind::Kzb => {
            let ops = ZeroWeightOps::new(&run.tm, &om);
            let zs = ex.complex_points();
            let order = ex.file.order;
            let xi = run.xi.as_ref().expect("validated");
            let lap = q_to_c64(&ex.rs.pairing(xi, xi));
            let z = run.zero();
            let map = run.psi_map();
            let series: Vec<Result<_, Error>> = (0..run.iso.len())
                .into_par_iter()
                .map(|i| match &map {
                    Ok(m) => m.apply_c64(&run.tm.rep.extract(&z, &run.us[i]))?.series(order),
                    Err(e) => Err(e.clone()),
                })
                .collect();
            let rayleigh = |h: &VectorSeries<C64>, s: &VectorSeries<C64>| {
                let lead = s.coeff(&vec![0; ex.rs.rank()]);
                let eig = dot(&h.coeff(&vec![0; ex.rs.rank()]), &lead) / dot(&lead, &lead);
                let r = h.sub(&s.scale(&eig)).max_norm() / s.max_norm();
                (eig, r)
            };
            let out: Vec<Vec<CheckRecord>> = jobs
                .par_iter()
                .map(|&(i, p)| {
                    let start = Instant::now();
                    let inputs = json!({ "orbit": i, "point": p, "order": order });
                    let res = CheckRecord::new(format!("eigen.residual[{i},{p}]"), inputs.clone(), tol);
                    let val = CheckRecord::new(format!("eigen.value[{i},{p}]"), inputs, tol);
                    let s = match &series[i] {
                        Ok(s) => s,
                        Err(e) => return vec![failed(res, e), failed(val, e)],
                    };
                    let got = ops.hp_apply(s, &zs, p);
                    let want = trig_eigenvalue(&run.spec, &run.iso[i].t, p);
                    let mut recs = match (got, want) {
                        (Ok(h), Ok(w)) => {
                            let (eig, r) = rayleigh(&h, s);
                            let w = C64::new(0.0, -2.0 * std::f64::consts::PI) * w;
                            vec![res.within(r, 0.0), val.compare_floor(eig, w, 1.0)]
                        }
                        (Err(e), _) | (_, Err(e)) => vec![failed(res, &e), failed(val, &e)],
                    };
                    let t = start.elapsed().as_secs_f64() / 2.0;
                    recs.iter_mut().for_each(|r| r.wall_time = t);
                    recs
                })
                .collect();
            checks.extend(out.into_iter().flatten());
            checks.extend((0..run.iso.len()).map(|i| {
                timed(|| {
                    let rec = CheckRecord::new(format!("eigen.h0[{i}]"), json!({ "orbit": i, "order": order }), tol);
                    match &series[i] {
                        Err(e) => failed(rec, e),
                        Ok(s) => match ops.h0_reduced(s) {
                            Ok(h) => {
                                let (eig, r) = rayleigh(&h, s);
                                rec.compare(eig, lap).detail(format!("series residual {r:.1e}"))
                            }
                            Err(e) => failed(rec, &e),
                        },
                    }
                })
            }));
        }
    }
    Ok(checks)
}

pub fn weyl(ex: &Experiment) -> Result<FamilyOut, ConfigError> {
    let rs = &ex.rs;
    let tm = tensor(rs, &ex.lambdas)?;
    let rep = &tm.rep;
    let xi = ex.xi.as_ref().ok_or_else(|| ConfigError("weyl checks need xi".into()))?;
    let z = Weight::zero(rs.rank());
    let group = setup("Weyl group", rs.weyl_group())?;
    let w0 = group.last().cloned().unwrap_or_else(WeylWord::identity);
    let inputs = json!({ "xi": fund_json(rs, xi), "dim_zero_weight": rep.weight_space(&z).len() });
    let mut checks = Vec::new();
    checks.push(timed(|| {
        let rec = CheckRecord::new("weyl.q_equals_w0", inputs.clone(), 0.0);
        match (q_matrix(rs, rep, xi, &z), q_via_weyl(rs, rep, xi)) {
            (Ok(a), Ok(b)) => matrix_check(rec, &a, &b),
            (Err(e), _) | (_, Err(e)) => failed(rec, &e),
        }
    }));
    checks.push(timed(|| {
        let rec = CheckRecord::new("weyl.word_independence", json!({ "word": w0.letters }), 0.0);
        let rev = WeylWord { letters: w0.letters.iter().rev().cloned().collect(), reduced: true };
        match (t_word(rs, rep, xi, &w0), t_word(rs, rep, xi, &rev)) {
            (Ok(a), Ok(b)) => matrix_check(rec, &a, &b),
            (Err(e), _) | (_, Err(e)) => failed(rec, &e),
        }
    }));
    if let ([lam], 1) = (&ex.lambdas[..], rs.rank()) {
        let k = rs.to_fundamental(lam)[0].clone();
        if (&k / qi(2)).is_integer() {
            let k = (&k / qi(2)).to_integer();
            checks.push(timed(|| {
                let rec = CheckRecord::new("weyl.closed_form", json!({ "k": k.to_string(), "xi": fund_json(rs, xi) }), 0.0);
                let k: u64 = k.try_into().expect("small highest weight");
                match (t_simple(rs, rep, xi, 0), t_simple_closed_form(&rs.simple_coroot(xi, 0), k)) {
                    (Ok(t), Ok(c)) => matrix_check(rec, &t, &Matrix::identity(1).scale(&c)),
                    (Err(e), _) | (_, Err(e)) => failed(rec, &e),
                }
            }));
        }
    }
    let base = form_xi_matrix(rs, rep, xi, &z);
    checks.par_extend(group.par_iter().map(|w| {
        timed(|| {
            let rec = CheckRecord::new(format!("weyl.form_invariance{}", word_label(w)), json!({ "word": w.letters }), 0.0);
            let m = match &base {
                Ok(m) => m,
                Err(e) => return failed(rec, e),
            };
            let wxi = rs.apply_word(w, xi);
            match (t_word(rs, rep, xi, w), form_xi_matrix(rs, rep, &wxi, &z)) {
                (Ok(t), Ok(mw)) => matrix_check(rec, &(&(&t.transpose() * &mw) * &t), m),
                (Err(e), _) | (_, Err(e)) => failed(rec, &e),
            }
        })
    }));
    Ok(FamilyOut { checks, ..Default::default() })
}

pub fn jack(ex: &Experiment, tol: f64) -> Result<FamilyOut, ConfigError> {
    let rs = &ex.rs;
    let j = ex.file.jack.as_ref().ok_or_else(|| ConfigError("missing jack section".into()))?;
    let params = setup("jack", JackParams::new(rs, j.k))?;
    let nus: Vec<Weight> = j.nu.iter().map(|f| rs.from_fundamental(&f.iter().map(|&x| qi(x)).collect::<Vec<_>>())).collect();
    let out: Vec<Vec<CheckRecord>> = nus
        .par_iter()
        .map(|nu| {
            let label = fund_label(rs, nu);
            let inputs = json!({ "k": j.k, "nu": fund_json(rs, nu), "xi": fund_json(rs, &params.xi_for(nu)) });
            let dual = timed(|| {
                let rec = CheckRecord::new(format!("jack.dual_construction{label}"), inputs.clone(), 0.0);
                let gs = match jack_gs(rs, nu, j.k) {
                    Ok(p) => p,
                    Err(e) => return failed(rec, &e),
                };
                match jack_from_psi(&params, &params.xi_for(nu), 2) {
                    Ok(p) => {
                        let norms = (inner_k(rs, &p, &p, j.k), inner_k(rs, &gs, &gs, j.k));
                        let rec = match norms {
                            (Ok(a), Ok(b)) => rec.compare_exact(&a, &b),
                            (Err(e), _) | (_, Err(e)) => return failed(rec, &e),
                        };
                        if p == gs {
                            rec.status(Status::Pass).detail(format!("{} terms agree; lhs and rhs are the k-norms", gs.len()))
                        } else {
                            rec.status(Status::Fail).detail("polynomials differ")
                        }
                    }
                    Err(e) => failed(rec, &e),
                }
            });
            let norm = timed(|| {
                let rec = CheckRecord::new(format!("jack.norm{label}"), inputs.clone(), tol);
                match jack_norm_via_bethe(&params, nu, &ex.solver) {
                    Err(e) => failed(rec, &e),
                    Ok(r) => match (r.status, r.lhs, r.rhs) {
                        (JackNormStatus::Compared, Some(l), Some(h)) => {
                            let psi = r.psi_norm.map_or("not available (degenerate ξ)".to_string(), |x| format!("{x}"));
                            rec.compare(l, h).detail(format!("⟨P, P⟩_k = {}, eigenfunction norm {psi}", r.jack_norm))
                        }
                        _ => rec.status(Status::Inconclusive).detail("no isolated critical point"),
                    },
                }
            });
            vec![dual, norm]
        })
        .collect();
    Ok(FamilyOut { checks: out.into_iter().flatten().collect(), ..Default::default() })
}

pub fn limits(ex: &Experiment) -> Result<FamilyOut, ConfigError> {
    let l = ex.file.limits.clone().unwrap_or_default();
    let t = num_to_c64(&l.t, "limits.t")?;
    let w = num_to_c64(&l.w, "limits.w")?;
    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    let bad = !(l.tau_im > 0.0) || l.steps.len() < 2 || l.steps.iter().any(|&s| !(s > 0.0));
    if bad {
        return Err(ConfigError("limits needs tau_im > 0 and at least two positive steps".into()));
    }
    let tau = C64::new(0.0, l.tau_im);
    let mut checks = Vec::new();
    // the residuals are O(e^{2πiτ})
    let bound = 1e4 * (-2.0 * std::f64::consts::PI * l.tau_im).exp();
    checks.push(timed(|| {
        let rec = CheckRecord::new("limits.residual", json!({ "tau": Val::complex(tau), "t": Val::complex(t), "w": Val::complex(w) }), bound);
        match elliptic_limit_check(tau, t, w) {
            Ok(r) => rec.within(r.max(), 0.0).detail(format!("ρ {:.1e}, σ {:.1e}, η {:.1e}, φ {:.1e}", r.rho, r.sigma, r.eta, r.phi)),
            Err(e) => failed(rec, &e),
        }
    }));
    let start = Instant::now();
    match decay_exponents(&l.steps, t, w) {
        Ok(rows) => {
            let each = start.elapsed().as_secs_f64() / (4 * rows.len()).max(1) as f64;
            for (j, row) in rows.iter().enumerate() {
                for (name, x) in ["rho", "sigma", "eta", "phi"].iter().zip(row) {
                    let inputs = json!({ "from_im": l.steps[j], "to_im": l.steps[j + 1] });
                    let mut rec = CheckRecord::new(format!("limits.decay.{name}[{j}]"), inputs, 0.05).within(*x, 1.0);
                    rec.wall_time = each;
                    checks.push(rec);
                }
            }
        }
        Err(e) => checks.push(failed(CheckRecord::new("limits.decay", json!({ "steps": l.steps }), 0.05), &e)),
    }
    Ok(FamilyOut { checks, ..Default::default() })
}
