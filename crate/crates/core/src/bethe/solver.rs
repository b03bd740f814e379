//! Multistart damped Newton search for critical points of a master function.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{norm2, Matrix, C64};

use super::master::{master_grad, master_hess, MasterSpec};

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub n_starts: usize,
    /// Convergence threshold on ‖∇Φ‖, relative to the data scale.
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub max_halvings: usize,
    /// Merge tolerance for orbit keys, relative to the data scale.
    pub merge_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { n_starts: 200, tol: 1e-12, seed: 0, max_iter: 200, max_halvings: 40, merge_tol: 1e-8 }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub t: Vec<C64>,
    pub grad_norm: f64,
    pub hessian: Matrix<C64>,
    pub hess_det: C64,
    /// Coordinates sorted within each color.
    pub orbit_key: Vec<C64>,
    pub isolated: bool,
}

const SNAP: f64 = 1e-8;

fn snap(x: f64) -> f64 {
    (x / SNAP).round() * SNAP
}

/// Canonical representative of the Σ_𝐦 orbit of t.
pub fn orbit_key(m: &[usize], t: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(t.len());
    let mut start = 0;
    for &n in m {
        let mut block = t[start..start + n].to_vec();
        block.sort_by(|a, b| {
            (snap(a.re), snap(a.im)).partial_cmp(&(snap(b.re), snap(b.im))).unwrap_or(std::cmp::Ordering::Equal)
        });
        out.extend(block);
        start += n;
    }
    out
}

fn max_dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Singular hyperplanes: the points, the origin for trigonometric kinds, and
/// coincidences between coordinates.
fn min_clearance(spec: &MasterSpec<C64>, t: &[C64]) -> f64 {
    let mut d = f64::INFINITY;
    for (a, x) in t.iter().enumerate() {
        for z in &spec.points {
            d = d.min((x - z).norm());
        }
        if spec.is_trig() {
            d = d.min(x.norm());
        }
        for y in &t[..a] {
            d = d.min((x - y).norm());
        }
    }
    d
}

fn random_start(spec: &MasterSpec<C64>, rng: &mut ChaCha8Rng, scale: f64) -> Vec<C64> {
    let mut centers = spec.points.clone();
    if spec.is_trig() {
        centers.push(C64::new(0.0, 0.0));
    }
    loop {
        let t: Vec<C64> = (0..spec.n_vars())
            .map(|_| {
                let c = centers[rng.gen_range(0..centers.len())];
                let r = rng.gen_range(0.1..3.0) * scale;
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                c + C64::from_polar(r, phi)
            })
            .collect();
        if min_clearance(spec, &t) > 1e-3 * scale {
            return t;
        }
    }
}

/// Iterates leaving this many data scales are treated as escaping.
const ESCAPE: f64 = 1e4;

/// Residual F_a = w_a ∂Φ/∂t_a with w_a = Π_s (t_a − z_s) (times t_a for the
/// trigonometric kinds) and its Jacobian. The weights keep a coordinate
/// running off to infinity from looking like a zero of the residual, and
/// F has the same zeros as ∇Φ away from the points.
fn weighted_system(spec: &MasterSpec<C64>, t: &[C64]) -> Option<(Vec<C64>, Matrix<C64>, f64)> {
    let g = master_grad(spec, t).ok()?;
    let h = master_hess(spec, t).ok()?;
    let n = t.len();
    let mut f = Vec::with_capacity(n);
    let mut jac = Matrix::zeros(n, n);
    for a in 0..n {
        let mut w = C64::new(1.0, 0.0);
        let mut dlog = C64::new(0.0, 0.0);
        for z in &spec.points {
            w *= t[a] - z;
            dlog += (t[a] - z).inv();
        }
        if spec.is_trig() {
            w *= t[a];
            dlog += t[a].inv();
        }
        f.push(w * g[a]);
        for b in 0..n {
            jac[(a, b)] = w * h[(a, b)];
        }
        jac[(a, a)] += w * dlog * g[a];
    }
    Some((f, jac, norm2(&g)))
}

fn newton(spec: &MasterSpec<C64>, mut t: Vec<C64>, opts: &SolverOptions, tol: f64) -> Option<(Vec<C64>, f64)> {
    let bound = ESCAPE * spec.scale();
    let (mut f, mut jac, mut gn) = weighted_system(spec, &t)?;
    let mut fnorm = norm2(&f);
    for _ in 0..opts.max_iter {
        if gn < tol {
            return Some((t, gn));
        }
        let rhs: Vec<C64> = f.iter().map(|x| -x).collect();
        let step = jac.solve(&rhs)?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<C64> = t.iter().zip(&step).map(|(x, d)| x + d * lambda).collect();
            if let Some((ft, jt, gt)) = weighted_system(spec, &trial) {
                let n = norm2(&ft);
                if n.is_finite() && n < fnorm {
                    t = trial;
                    (f, jac, gn, fnorm) = (ft, jt, gt, n);
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted || t.iter().any(|x| x.norm() > bound) {
            break;
        }
    }
    (gn < tol).then_some((t, gn))
}

/// Critical points found from `n_starts` random starts, one per Σ_𝐦 orbit,
/// sorted by orbit key. Non-isolated points are kept and flagged.
pub fn solve_critical(spec: &MasterSpec<C64>, opts: &SolverOptions) -> Vec<CriticalPoint> {
    let scale = spec.scale();
    let m = spec.n_vars();
    let tol = opts.tol * scale;
    let finish = |t: Vec<C64>, gn: f64| -> Option<CriticalPoint> {
        let hessian = master_hess(spec, &t).ok()?;
        let hess_det = if m == 0 { C64::new(1.0, 0.0) } else { hessian.det() };
        let isolated = hess_det.norm() > 1e-10 * scale.powi(m as i32);
        Some(CriticalPoint { orbit_key: orbit_key(&spec.m, &t), t, grad_norm: gn, hessian, hess_det, isolated })
    };
    if m == 0 {
        return finish(vec![], 0.0).into_iter().collect();
    }
    let found: Vec<CriticalPoint> = (0..opts.n_starts)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k as u64));
            let start = random_start(spec, &mut rng, scale);
            let (t, gn) = newton(spec, start, opts, tol)?;
            if min_clearance(spec, &t) < opts.merge_tol * scale {
                return None;
            }
            finish(t, gn)
        })
        .collect();
    let mut out: Vec<CriticalPoint> = Vec::new();
    for cp in found {
        if !out.iter().any(|o| max_dist(&o.orbit_key, &cp.orbit_key) < opts.merge_tol * scale) {
            out.push(cp);
        }
    }
    out.sort_by(|a, b| {
        let ka: Vec<(f64, f64)> = a.orbit_key.iter().map(|z| (z.re, z.im)).collect();
        let kb: Vec<(f64, f64)> = b.orbit_key.iter().map(|z| (z.re, z.im)).collect();
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}
