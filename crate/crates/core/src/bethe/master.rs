//! Master functions of the rational, trigonometric and KZB Bethe ansatz.
//! Only derivatives are computed; the logarithms themselves are never
//! evaluated, so no branch choice enters.

use crate::arith::{Matrix, Scalar, Q};
use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MasterKind {
    /// Points z_s; no term at the origin.
    Rational,
    /// Points Z_s ≠ 0 with an extra weight μ sitting at 0.
    Trigonometric,
    /// As trigonometric, with Z_s = e^{−2πi z_s} and 𝐦_α = ΣΛ_s.
    Kzb,
}

#[derive(Clone, Debug)]
pub struct MasterSpec<T> {
    pub kind: MasterKind,
    pub rs: RootSystem,
    pub lambdas: Vec<Weight>,
    pub m: Vec<usize>,
    pub points: Vec<T>,
    /// Ignored for the rational kind.
    pub mu: Weight,
    /// Adds the point-point terms Σ_{s<s'} (Λ_s, Λ_s') log(z_s − z_s') and,
    /// for the trigonometric kinds, Σ_s (μ, Λ_s) log z_s. They change only
    /// the z-derivatives.
    pub include_point_term: bool,
}

/// Pairings needed by the derivative formulas, converted once.
struct Pairings<T> {
    colors: Vec<usize>,
    aa: Vec<Vec<T>>,
    al: Vec<Vec<T>>,
    amu: Vec<T>,
    ll: Vec<Vec<T>>,
    mul: Vec<T>,
}

impl<T: Scalar> MasterSpec<T> {
    pub fn rational(rs: &RootSystem, lambdas: Vec<Weight>, m: Vec<usize>, points: Vec<T>) -> Result<Self> {
        let r = rs.rank();
        Self::new(MasterKind::Rational, rs, lambdas, m, points, Weight::zero(r))
    }

    pub fn trigonometric(rs: &RootSystem, lambdas: Vec<Weight>, m: Vec<usize>, points: Vec<T>, mu: Weight) -> Result<Self> {
        Self::new(MasterKind::Trigonometric, rs, lambdas, m, points, mu)
    }

    /// KZB master function at μ = ξ − ρ; 𝐦 is read off from ΣΛ.
    pub fn kzb(rs: &RootSystem, lambdas: Vec<Weight>, points: Vec<T>, xi: &Weight) -> Result<Self> {
        let total = lambdas.iter().fold(Weight::zero(rs.rank()), |a, l| &a + l);
        let m = total
            .as_lattice()
            .filter(|b| b.iter().all(|&x| x >= 0))
            .ok_or_else(|| Error::InvalidInput("ΣΛ is not in the positive root cone".into()))?;
        let mu = xi - rs.rho();
        Self::new(MasterKind::Kzb, rs, lambdas, m.into_iter().map(|x| x as usize).collect(), points, mu)
    }

    pub fn new(kind: MasterKind, rs: &RootSystem, lambdas: Vec<Weight>, m: Vec<usize>, points: Vec<T>, mu: Weight) -> Result<Self> {
        let spec = MasterSpec { kind, rs: rs.clone(), lambdas, m, points, mu, include_point_term: true };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.rs.rank();
        if self.m.len() != r || self.mu.rank() != r || self.lambdas.iter().any(|l| l.rank() != r) {
            return Err(Error::InvalidInput("rank mismatch in master function data".into()));
        }
        if self.points.len() != self.lambdas.len() {
            return Err(Error::InvalidInput(format!("{} points for {} weights", self.points.len(), self.lambdas.len())));
        }
        for a in 0..self.points.len() {
            if self.is_trig() && self.points[a].is_zero() {
                return Err(Error::Singular(format!("point {a} sits at the origin")));
            }
            for b in 0..a {
                if self.points[a] == self.points[b] {
                    return Err(Error::Singular(format!("points {b} and {a} coincide")));
                }
            }
        }
        if self.kind == MasterKind::Kzb {
            let total = self.lambdas.iter().fold(Weight::zero(r), |a, l| &a + l);
            let ma = Weight::from_ints(&self.m.iter().map(|&x| x as i64).collect::<Vec<_>>());
            if total != ma {
                return Err(Error::InvalidInput("KZB master function needs Σ m_j α_j = ΣΛ".into()));
            }
        }
        Ok(())
    }

    pub fn is_trig(&self) -> bool {
        self.kind != MasterKind::Rational
    }

    /// Number of t variables.
    pub fn n_vars(&self) -> usize {
        self.m.iter().sum()
    }

    /// Color j of each variable in the order (j, k).
    pub fn colors(&self) -> Vec<usize> {
        self.m.iter().enumerate().flat_map(|(j, &n)| std::iter::repeat_n(j, n)).collect()
    }

    /// 𝐦_α = Σ m_j α_j.
    pub fn m_alpha(&self) -> Weight {
        Weight::from_ints(&self.m.iter().map(|&x| x as i64).collect::<Vec<_>>())
    }

    /// Weight ΣΛ − 𝐦_α of the weight function's values.
    pub fn target_weight(&self) -> Weight {
        let total = self.lambdas.iter().fold(Weight::zero(self.rs.rank()), |a, l| &a + l);
        &total - &self.m_alpha()
    }

    /// Typical size of the points, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        let s = self.points.iter().map(|z| z.magnitude()).fold(0.0, f64::max);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    fn pairings(&self) -> Pairings<T> {
        let r = self.rs.rank();
        let a: Vec<Weight> = (0..r).map(|i| self.rs.simple_root(i)).collect();
        let p = |x: &Weight, y: &Weight| T::from_q(&self.rs.pairing(x, y));
        let trig = self.is_trig();
        Pairings {
            colors: self.colors(),
            aa: a.iter().map(|x| a.iter().map(|y| p(x, y)).collect()).collect(),
            al: a.iter().map(|x| self.lambdas.iter().map(|l| p(x, l)).collect()).collect(),
            amu: a.iter().map(|x| if trig { p(x, &self.mu) } else { T::zero() }).collect(),
            ll: self.lambdas.iter().map(|x| self.lambdas.iter().map(|y| p(x, y)).collect()).collect(),
            mul: self.lambdas.iter().map(|l| if trig { p(&self.mu, l) } else { T::zero() }).collect(),
        }
    }

    fn check_point(&self, t: &[T]) -> Result<()> {
        if t.len() != self.n_vars() {
            return Err(Error::InvalidInput(format!("expected {} coordinates, got {}", self.n_vars(), t.len())));
        }
        for a in 0..t.len() {
            if self.is_trig() && t[a].is_zero() {
                return Err(Error::Singular(format!("t[{a}] = 0")));
            }
            for b in 0..a {
                if t[a] == t[b] {
                    return Err(Error::Singular(format!("t[{b}] = t[{a}]")));
                }
            }
            for (s, z) in self.points.iter().enumerate() {
                if t[a] == *z {
                    return Err(Error::Singular(format!("t[{a}] sits on point {s}")));
                }
            }
        }
        Ok(())
    }
}

/// ∂Φ/∂t for each variable.
pub fn master_grad<T: Scalar>(spec: &MasterSpec<T>, t: &[T]) -> Result<Vec<T>> {
    spec.check_point(t)?;
    let pr = spec.pairings();
    let c = &pr.colors;
    Ok((0..t.len())
        .map(|a| {
            let mut g = T::zero();
            for b in 0..t.len() {
                if b != a {
                    g = g + pr.aa[c[a]][c[b]].clone() / (t[a].clone() - t[b].clone());
                }
            }
            for (s, z) in spec.points.iter().enumerate() {
                g = g - pr.al[c[a]][s].clone() / (t[a].clone() - z.clone());
            }
            if spec.is_trig() {
                g = g - pr.amu[c[a]].clone() / t[a].clone();
            }
            g
        })
        .collect())
}

/// Matrix of second t-derivatives.
pub fn master_hess<T: Scalar>(spec: &MasterSpec<T>, t: &[T]) -> Result<Matrix<T>> {
    spec.check_point(t)?;
    let pr = spec.pairings();
    let c = &pr.colors;
    let n = t.len();
    let mut h = Matrix::zeros(n, n);
    for a in 0..n {
        let mut diag = T::zero();
        for b in 0..n {
            if b == a {
                continue;
            }
            let d = t[a].clone() - t[b].clone();
            let x = pr.aa[c[a]][c[b]].clone() / (d.clone() * d);
            h[(a, b)] = x.clone();
            diag = diag - x;
        }
        for (s, z) in spec.points.iter().enumerate() {
            let d = t[a].clone() - z.clone();
            diag = diag + pr.al[c[a]][s].clone() / (d.clone() * d);
        }
        if spec.is_trig() {
            diag = diag + pr.amu[c[a]].clone() / (t[a].clone() * t[a].clone());
        }
        h[(a, a)] = diag;
    }
    Ok(h)
}

/// Hess_t Φ = det of the second-derivative matrix; 1 when there are no variables.
pub fn master_hess_det<T: Scalar>(spec: &MasterSpec<T>, t: &[T]) -> Result<T> {
    let h = master_hess(spec, t)?;
    Ok(if h.rows() == 0 { T::one() } else { h.det() })
}

/// ∂Φ/∂(point p), the derivative in the stored coordinate (z_p, or Z_p for
/// the trigonometric kinds).
pub fn master_z_partial<T: Scalar>(spec: &MasterSpec<T>, t: &[T], p: usize) -> Result<T> {
    spec.check_point(t)?;
    if p >= spec.points.len() {
        return Err(Error::InvalidInput(format!("no point {p}")));
    }
    let pr = spec.pairings();
    let zp = spec.points[p].clone();
    let mut acc = T::zero();
    for (a, ta) in t.iter().enumerate() {
        acc = acc + pr.al[pr.colors[a]][p].clone() / (ta.clone() - zp.clone());
    }
    if spec.include_point_term {
        for (s, zs) in spec.points.iter().enumerate() {
            if s != p {
                acc = acc + pr.ll[p][s].clone() / (zp.clone() - zs.clone());
            }
        }
        if spec.is_trig() {
            acc = acc + pr.mul[p].clone() / zp.clone();
        }
    }
    Ok(acc)
}

/// Trigonometric Gaudin eigenvalue Z_p ∂Φ/∂Z_p + ½(Λ_p, Λ_p + 2ρ).
pub fn trig_eigenvalue<T: Scalar>(spec: &MasterSpec<T>, t: &[T], p: usize) -> Result<T> {
    let d = master_z_partial(spec, t, p)?;
    let lp = &spec.lambdas[p];
    let shift = &spec.rs.rho().scale(&Q::from_integer(2.into())) + lp;
    let c = spec.rs.pairing(lp, &shift) / Q::from_integer(2.into());
    Ok(spec.points[p].clone() * d + T::from_q(&c))
}
