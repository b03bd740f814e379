//! JSON run reports.

use std::collections::BTreeMap;

use kzb_core::arith::{C64, Q};
use serde::Serialize;
use serde_json::Value;

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// A compared quantity: exact rationals keep their string form.
#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(untagged)]
pub enum Val {
    Exact { exact: String, approx: f64 },
    Complex { re: f64, im: f64 },
    Real(f64),
}

impl Val {
    pub fn exact(x: &Q) -> Val {
        Val::Exact { exact: x.to_string(), approx: kzb_core::arith::q_to_f64(x) }
    }

    pub fn complex(z: C64) -> Val {
        Val::Complex { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs: Value,
    pub lhs: Option<Val>,
    pub rhs: Option<Val>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
    pub wall_time: f64,
    pub detail: String,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, inputs: Value, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            inputs,
            lhs: None,
            rhs: None,
            abs_err: None,
            rel_err: None,
            tolerance,
            status: Status::Inconclusive,
            wall_time: 0.0,
            detail: String::new(),
        }
    }

    /// Relative comparison of two complex numbers against the tolerance.
    pub fn compare(self, lhs: C64, rhs: C64) -> Self {
        self.compare_floor(lhs, rhs, f64::MIN_POSITIVE)
    }

    /// As `compare`, measured against max(|lhs|, |rhs|, floor) so that
    /// values that should vanish are compared absolutely.
    pub fn compare_floor(mut self, lhs: C64, rhs: C64, floor: f64) -> Self {
        let abs = (lhs - rhs).norm();
        let rel = abs / lhs.norm().max(rhs.norm()).max(floor);
        self.lhs = Some(Val::complex(lhs));
        self.rhs = Some(Val::complex(rhs));
        self.abs_err = Some(abs);
        self.rel_err = Some(rel);
        self.status = if rel <= self.tolerance { Status::Pass } else { Status::Fail };
        self
    }

    /// Exact equality; the tolerance is recorded as 0.
    pub fn compare_exact(mut self, lhs: &Q, rhs: &Q) -> Self {
        let d = kzb_core::arith::q_to_f64(&(lhs - rhs)).abs();
        self.tolerance = 0.0;
        self.lhs = Some(Val::exact(lhs));
        self.rhs = Some(Val::exact(rhs));
        self.abs_err = Some(d);
        let scale = kzb_core::arith::q_to_f64(lhs).abs().max(kzb_core::arith::q_to_f64(rhs).abs());
        self.rel_err = Some(if d == 0.0 { 0.0 } else { d / scale.max(f64::MIN_POSITIVE) });
        self.status = if lhs == rhs { Status::Pass } else { Status::Fail };
        self
    }

    /// Absolute bound: pass iff |value − target| ≤ tolerance.
    pub fn within(mut self, value: f64, target: f64) -> Self {
        let abs = (value - target).abs();
        self.lhs = Some(Val::Real(value));
        self.rhs = Some(Val::Real(target));
        self.abs_err = Some(abs);
        self.rel_err = if target == 0.0 { None } else { Some(abs / value.abs().max(target.abs())) };
        self.status = if abs <= self.tolerance { Status::Pass } else { Status::Fail };
        self
    }

    pub fn status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverLog {
    pub label: String,
    pub seed: u64,
    pub n_starts: usize,
    pub orbits: usize,
    pub isolated: usize,
    pub points: Vec<Vec<Val>>,
    pub grad_norms: Vec<f64>,
    pub hess_dets: Vec<Val>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub threads: usize,
    pub config: Value,
    pub data: BTreeMap<String, Value>,
    pub checks: Vec<CheckRecord>,
    pub solver_logs: Vec<SolverLog>,
    pub summary: Summary,
}

impl Report {
    pub fn summarize(&mut self) {
        let mut s = Summary::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Inconclusive => s.inconclusive += 1,
            }
        }
        self.summary = s;
    }

    pub fn all_pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.status == Status::Pass)
    }
}
