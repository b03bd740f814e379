//! Experiment configs: JSON with exact rationals as {"num", "den"} (or bare
//! integers) and complex points as {"re", "im"}.

use kzb_core::arith::{q_to_c64, C64, Q};
use kzb_core::bethe::{MasterKind, SolverOptions};
use kzb_core::rootsys::{CartanMatrix, RootSystem, Weight};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum NumIn {
    Int(i64),
    Ratio { num: i64, den: i64 },
    Complex { re: f64, im: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootSystemIn {
    Label(String),
    Cartan { cartan: Vec<Vec<i64>> },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum KindIn {
    Rational,
    Trigonometric,
    Kzb,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverIn {
    pub n_starts: Option<usize>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub merge_tol: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureIn {
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_nodes")]
    pub n: usize,
}

impl Default for QuadratureIn {
    fn default() -> Self {
        QuadratureIn { eps: default_eps(), n: default_nodes() }
    }
}

fn default_eps() -> f64 {
    0.5
}

fn default_nodes() -> usize {
    64
}

fn default_order() -> i64 {
    6
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapovalovIn {
    /// Upper corner of the box of depths β, simple-root coordinates.
    pub beta_max: Vec<i64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    5
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JackIn {
    pub k: u32,
    /// Dominant weights ν in fundamental coordinates.
    pub nu: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsIn {
    #[serde(default = "default_tau_im")]
    pub tau_im: f64,
    #[serde(default = "default_t")]
    pub t: NumIn,
    #[serde(default = "default_w")]
    pub w: NumIn,
    #[serde(default = "default_steps")]
    pub steps: Vec<f64>,
}

impl Default for LimitsIn {
    fn default() -> Self {
        LimitsIn { tau_im: default_tau_im(), t: default_t(), w: default_w(), steps: default_steps() }
    }
}

fn default_tau_im() -> f64 {
    8.0
}

fn default_t() -> NumIn {
    NumIn::Ratio { num: 3, den: 10 }
}

fn default_w() -> NumIn {
    NumIn::Ratio { num: 7, den: 10 }
}

fn default_steps() -> Vec<f64> {
    vec![6.0, 8.0, 10.0]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub root_system: RootSystemIn,
    /// Highest weights of the tensor factors, fundamental coordinates.
    #[serde(default)]
    pub modules: Vec<Vec<i64>>,
    /// z (rational kind) or Z (trigonometric and KZB kinds).
    #[serde(default)]
    pub points: Vec<NumIn>,
    /// ξ in fundamental coordinates.
    #[serde(default)]
    pub xi: Option<Vec<NumIn>>,
    #[serde(default)]
    pub master_kind: Option<KindIn>,
    /// Color multiplicities; defaults to the full weight ΣΛ for the KZB kind.
    #[serde(default)]
    pub m: Option<Vec<usize>>,
    #[serde(default)]
    pub solver: SolverIn,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_order")]
    pub order: i64,
    #[serde(default)]
    pub quadrature: QuadratureIn,
    #[serde(default)]
    pub shapovalov: Option<ShapovalovIn>,
    #[serde(default)]
    pub jack: Option<JackIn>,
    #[serde(default)]
    pub limits: Option<LimitsIn>,
    /// Longest word for the A_X bracket-relation checks.
    #[serde(default)]
    pub bracket_max_len: Option<usize>,
    /// Restricts the run to these check names.
    #[serde(default)]
    pub checks: Option<Vec<String>>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// A validated config resolved into core types.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub file: ConfigFile,
    pub rs: RootSystem,
    pub lambdas: Vec<Weight>,
    pub points: Vec<Point>,
    pub xi: Option<Weight>,
    pub kind: Option<MasterKind>,
    pub m: Option<Vec<usize>>,
    pub solver: SolverOptions,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Exact(Q),
    Complex(C64),
}

impl Point {
    pub fn to_c64(&self) -> C64 {
        match self {
            Point::Exact(x) => q_to_c64(x),
            Point::Complex(z) => *z,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

pub fn num_to_q(x: &NumIn, field: &str) -> Result<Q, ConfigError> {
    match x {
        NumIn::Int(n) => Ok(Q::from_integer((*n).into())),
        NumIn::Ratio { num, den } => {
            if *den == 0 {
                return bad(format!("{field}: zero denominator"));
            }
            Ok(Q::new((*num).into(), (*den).into()))
        }
        NumIn::Complex { .. } => bad(format!("{field}: expected an exact rational, got a complex number")),
    }
}

fn num_to_point(x: &NumIn, field: &str) -> Result<Point, ConfigError> {
    match x {
        NumIn::Complex { re, im } => {
            if !re.is_finite() || !im.is_finite() {
                return bad(format!("{field}: non-finite complex number"));
            }
            Ok(Point::Complex(C64::new(*re, *im)))
        }
        _ => Ok(Point::Exact(num_to_q(x, field)?)),
    }
}

pub fn num_to_c64(x: &NumIn, field: &str) -> Result<C64, ConfigError> {
    Ok(num_to_point(x, field)?.to_c64())
}

pub fn parse(text: &str) -> Result<ConfigFile, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError(format!("malformed config: {e}")))
}

impl Experiment {
    pub fn from_file(file: ConfigFile) -> Result<Self, ConfigError> {
        if file.schema != SCHEMA {
            return bad(format!("schema {} is not supported (expected {SCHEMA})", file.schema));
        }
        let rs = match &file.root_system {
            RootSystemIn::Label(l) => RootSystem::of_type(l),
            RootSystemIn::Cartan { cartan } => CartanMatrix::new(cartan.clone()).and_then(RootSystem::new),
        }
        .map_err(|e| ConfigError(format!("root_system: {e}")))?;
        let r = rs.rank();
        let mut lambdas = Vec::new();
        for (i, f) in file.modules.iter().enumerate() {
            if f.len() != r {
                return bad(format!("modules[{i}]: {} coordinates for rank {r}", f.len()));
            }
            if f.iter().any(|&x| x < 0) {
                return bad(format!("modules[{i}]: highest weight must be dominant"));
            }
            lambdas.push(rs.from_fundamental(&f.iter().map(|&x| Q::from_integer(x.into())).collect::<Vec<_>>()));
        }
        let points = file.points.iter().enumerate().map(|(i, p)| num_to_point(p, &format!("points[{i}]"))).collect::<Result<Vec<_>, _>>()?;
        if !points.is_empty() && points.len() != lambdas.len() {
            return bad(format!("{} points for {} modules", points.len(), lambdas.len()));
        }
        let xi = match &file.xi {
            None => None,
            Some(v) => {
                if v.len() != r {
                    return bad(format!("xi: {} coordinates for rank {r}", v.len()));
                }
                let f = v.iter().enumerate().map(|(i, x)| num_to_q(x, &format!("xi[{i}]"))).collect::<Result<Vec<_>, _>>()?;
                Some(rs.from_fundamental(&f))
            }
        };
        let kind = file.master_kind.map(|k| match k {
            KindIn::Rational => MasterKind::Rational,
            KindIn::Trigonometric => MasterKind::Trigonometric,
            KindIn::Kzb => MasterKind::Kzb,
        });
        if let Some(k) = kind {
            if lambdas.is_empty() || points.is_empty() {
                return bad("master_kind needs modules and points");
            }
            if k != MasterKind::Rational && xi.is_none() {
                return bad("trigonometric and KZB kinds need xi");
            }
            if k != MasterKind::Kzb && file.m.is_none() {
                return bad("rational and trigonometric kinds need m");
            }
            if k != MasterKind::Kzb && points.iter().any(|p| matches!(p, Point::Complex(_))) {
                return bad("rational and trigonometric kinds need exact rational points");
            }
            if k != MasterKind::Rational && points.iter().any(|p| p.to_c64().norm().is_zero()) {
                return bad("Z = 0 is a singular point of the trigonometric master function");
            }
        }
        if let Some(m) = &file.m {
            if m.len() != r {
                return bad(format!("m: {} entries for rank {r}", m.len()));
            }
        }
        if let Some(s) = &file.shapovalov {
            if s.beta_max.len() != r || s.beta_max.iter().any(|&x| x < 0) {
                return bad("shapovalov.beta_max must be a nonnegative lattice vector of the rank");
            }
            if s.samples < 2 {
                return bad("shapovalov.samples must be at least 2");
            }
        }
        if let Some(j) = &file.jack {
            if j.nu.iter().any(|v| v.len() != r || v.iter().any(|&x| x < 0)) {
                return bad("jack.nu entries must be dominant weights of the rank");
            }
        }
        if file.order < 0 || file.order > 12 {
            return bad("order must lie in 0..=12");
        }
        if !(file.quadrature.eps > 0.0 && file.quadrature.eps < 1.0) || file.quadrature.n == 0 {
            return bad("quadrature needs 0 < eps < 1 and n > 0");
        }
        if let Some(n) = file.bracket_max_len {
            if !(2..=6).contains(&n) || r.pow(n as u32) > 4096 {
                return bad("bracket_max_len must lie in 2..=6 with at most 4096 words");
            }
        }
        if let Some(t) = file.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return bad("tolerance must be a positive number");
            }
        }
        let d = SolverOptions::default();
        let solver = SolverOptions {
            n_starts: file.solver.n_starts.unwrap_or(d.n_starts),
            tol: file.solver.tol.unwrap_or(d.tol),
            seed: file.seed,
            max_iter: file.solver.max_iter.unwrap_or(d.max_iter),
            max_halvings: d.max_halvings,
            merge_tol: file.solver.merge_tol.unwrap_or(d.merge_tol),
        };
        Ok(Experiment { file: file.clone(), rs, lambdas, points, xi, kind, m: file.m.clone(), solver })
    }

    pub fn exact_points(&self) -> Option<Vec<Q>> {
        self.points
            .iter()
            .map(|p| match p {
                Point::Exact(x) => Some(x.clone()),
                Point::Complex(_) => None,
            })
            .collect()
    }

    pub fn complex_points(&self) -> Vec<C64> {
        self.points.iter().map(Point::to_c64).collect()
    }

    /// Modules and ξ are present, enough for the series checks.
    pub fn series_inputs(&self) -> bool {
        !self.lambdas.is_empty() && self.xi.is_some()
    }

    pub fn wants(&self, check: &str) -> bool {
        self.file.checks.as_ref().is_none_or(|cs| {
            cs.iter().any(|c| check == c || check.strip_prefix(c.as_str()).is_some_and(|r| r.starts_with('.') || r.starts_with('[')))
        })
    }
}
