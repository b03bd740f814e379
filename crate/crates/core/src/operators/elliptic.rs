//! Theta-function coefficients of the elliptic KZB operators and the check
//! that they approach their trigonometric limits as τ → i∞.
//!
//! The corrections are O(e^{2πiτ}), far below double precision at Im τ ≈ 8,
//! so everything here runs in 256-bit floating point.

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::arith::C64;
use crate::error::{Error, Result};

const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;
/// Theta series terms; the tail is below 10⁻⁵⁰ for Im τ ≥ 2.
const TERMS: i64 = 12;

#[derive(Clone, Debug)]
struct Cx {
    re: BigFloat,
    im: BigFloat,
}

struct Mp {
    cc: Consts,
    pi: BigFloat,
}

impl Mp {
    fn new() -> Result<Self> {
        let mut cc = Consts::new().map_err(|e| Error::Consistency(format!("multiprecision constants: {e:?}")))?;
        let pi = cc.pi(PREC, RM);
        Ok(Mp { cc, pi })
    }

    fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, PREC)
    }

    fn cx(&self, z: C64) -> Cx {
        Cx { re: self.real(z.re), im: self.real(z.im) }
    }

    fn int(&self, n: i64) -> Cx {
        Cx { re: BigFloat::from_i64(n, PREC), im: BigFloat::from_i64(0, PREC) }
    }

    fn add(&self, a: &Cx, b: &Cx) -> Cx {
        Cx { re: a.re.add(&b.re, PREC, RM), im: a.im.add(&b.im, PREC, RM) }
    }

    fn sub(&self, a: &Cx, b: &Cx) -> Cx {
        Cx { re: a.re.sub(&b.re, PREC, RM), im: a.im.sub(&b.im, PREC, RM) }
    }

    fn mul(&self, a: &Cx, b: &Cx) -> Cx {
        let re = a.re.mul(&b.re, PREC, RM).sub(&a.im.mul(&b.im, PREC, RM), PREC, RM);
        let im = a.re.mul(&b.im, PREC, RM).add(&a.im.mul(&b.re, PREC, RM), PREC, RM);
        Cx { re, im }
    }

    fn div(&self, a: &Cx, b: &Cx) -> Cx {
        let den = b.re.mul(&b.re, PREC, RM).add(&b.im.mul(&b.im, PREC, RM), PREC, RM);
        let conj = Cx { re: b.re.clone(), im: b.im.neg() };
        let num = self.mul(a, &conj);
        Cx { re: num.re.div(&den, PREC, RM), im: num.im.div(&den, PREC, RM) }
    }

    fn scale_pi(&self, a: &Cx) -> Cx {
        Cx { re: a.re.mul(&self.pi, PREC, RM), im: a.im.mul(&self.pi, PREC, RM) }
    }

    fn sin(&mut self, z: &Cx) -> Cx {
        let (s, c) = (z.re.sin(PREC, RM, &mut self.cc), z.re.cos(PREC, RM, &mut self.cc));
        let (sh, ch) = (z.im.sinh(PREC, RM, &mut self.cc), z.im.cosh(PREC, RM, &mut self.cc));
        Cx { re: s.mul(&ch, PREC, RM), im: c.mul(&sh, PREC, RM) }
    }

    fn cos(&mut self, z: &Cx) -> Cx {
        let (s, c) = (z.re.sin(PREC, RM, &mut self.cc), z.re.cos(PREC, RM, &mut self.cc));
        let (sh, ch) = (z.im.sinh(PREC, RM, &mut self.cc), z.im.cosh(PREC, RM, &mut self.cc));
        Cx { re: c.mul(&ch, PREC, RM), im: s.mul(&sh, PREC, RM).neg() }
    }

    fn exp(&mut self, z: &Cx) -> Cx {
        let m = z.re.exp(PREC, RM, &mut self.cc);
        let (s, c) = (z.im.sin(PREC, RM, &mut self.cc), z.im.cos(PREC, RM, &mut self.cc));
        Cx { re: m.mul(&c, PREC, RM), im: m.mul(&s, PREC, RM) }
    }

    fn abs_f64(&self, z: &Cx) -> f64 {
        let n2 = z.re.mul(&z.re, PREC, RM).add(&z.im.mul(&z.im, PREC, RM), PREC, RM);
        format!("{n2}").parse::<f64>().map(f64::sqrt).unwrap_or(f64::NAN)
    }
}

/// θ₁ and its first two t-derivatives at fixed τ, from
/// θ₁(t) = 2e^{πiτ/4} Σ_j (−1)^j e^{πij(j+1)τ} sin((2j+1)πt).
pub struct EllipticCoeffs {
    pub tau: C64,
    mp: Mp,
    /// 2e^{πiτ/4}(−1)^j e^{πij(j+1)τ}
    weights: Vec<Cx>,
}

impl EllipticCoeffs {
    pub fn new(tau: C64) -> Result<Self> {
        if tau.im < 2.0 {
            return Err(Error::InvalidInput(format!("Im tau = {} is below 2", tau.im)));
        }
        let mut mp = Mp::new()?;
        let i_pi_tau = {
            let t = mp.cx(tau);
            mp.scale_pi(&Cx { re: t.im.neg(), im: t.re })
        };
        let mut weights = Vec::new();
        for j in 0..TERMS {
            let k = j * (j + 1);
            let arg = mp.add(&mp.mul(&mp.int(k), &i_pi_tau), &mp.div(&i_pi_tau, &mp.int(4)));
            let e = mp.exp(&arg);
            let sign = if j % 2 == 0 { 2 } else { -2 };
            weights.push(mp.mul(&e, &mp.int(sign)));
        }
        Ok(EllipticCoeffs { tau, mp, weights })
    }

    /// (θ₁, θ₁', θ₁'') at t.
    fn theta(&mut self, t: &Cx) -> [Cx; 3] {
        let mut out = [self.mp.int(0), self.mp.int(0), self.mp.int(0)];
        for (j, w) in self.weights.clone().iter().enumerate() {
            let n = 2 * j as i64 + 1;
            let npi = self.mp.scale_pi(&self.mp.int(n));
            let x = self.mp.mul(&npi, t);
            let s = self.mp.sin(&x);
            let c = self.mp.cos(&x);
            let ws = self.mp.mul(w, &s);
            out[0] = self.mp.add(&out[0], &ws);
            out[1] = self.mp.add(&out[1], &self.mp.mul(&self.mp.mul(w, &c), &npi));
            out[2] = self.mp.sub(&out[2], &self.mp.mul(&ws, &self.mp.mul(&npi, &npi)));
        }
        out
    }

    fn rho_cx(&mut self, t: &Cx) -> Cx {
        let [th, d1, _] = self.theta(t);
        self.mp.div(&d1, &th)
    }

    fn sigma_cx(&mut self, w: &Cx, t: &Cx) -> Cx {
        let wt = self.mp.sub(w, t);
        let [a, _, _] = self.theta(&wt);
        let [_, d0, _] = self.theta(&self.mp.int(0));
        let [b, _, _] = self.theta(w);
        let [c, _, _] = self.theta(t);
        self.mp.div(&self.mp.mul(&a, &d0), &self.mp.mul(&b, &c))
    }

    /// η = ρ² + ρ' with ρ' = θ''/θ − ρ².
    fn eta_cx(&mut self, t: &Cx) -> Cx {
        let [th, d1, d2] = self.theta(t);
        let rho = self.mp.div(&d1, &th);
        let rho2 = self.mp.mul(&rho, &rho);
        let drho = self.mp.sub(&self.mp.div(&d2, &th), &rho2);
        self.mp.add(&rho2, &drho)
    }

    /// φ = ∂_w σ_w(t) = σ_w(t)(ρ(w−t) − ρ(w)).
    fn phi_cx(&mut self, w: &Cx, t: &Cx) -> Cx {
        let s = self.sigma_cx(w, t);
        let wt = self.mp.sub(w, t);
        let r1 = self.rho_cx(&wt);
        let r2 = self.rho_cx(w);
        self.mp.mul(&s, &self.mp.sub(&r1, &r2))
    }

    pub fn rho(&mut self, t: C64) -> C64 {
        let t = self.mp.cx(t);
        let v = self.rho_cx(&t);
        self.to_c64(&v)
    }

    pub fn sigma(&mut self, w: C64, t: C64) -> C64 {
        let (w, t) = (self.mp.cx(w), self.mp.cx(t));
        let v = self.sigma_cx(&w, &t);
        self.to_c64(&v)
    }

    pub fn eta(&mut self, t: C64) -> C64 {
        let t = self.mp.cx(t);
        let v = self.eta_cx(&t);
        self.to_c64(&v)
    }

    pub fn phi(&mut self, w: C64, t: C64) -> C64 {
        let (w, t) = (self.mp.cx(w), self.mp.cx(t));
        let v = self.phi_cx(&w, &t);
        self.to_c64(&v)
    }

    fn to_c64(&self, z: &Cx) -> C64 {
        let f = |x: &BigFloat| format!("{x}").parse::<f64>().unwrap_or(f64::NAN);
        C64::new(f(&z.re), f(&z.im))
    }

    /// |ρ − π cot πt|, |σ_w − π sin π(w−t)/(sin πw sin πt)|, |η + π²|,
    /// |φ − π²/sin² πw|, all evaluated before rounding to double.
    pub fn limit_residuals(&mut self, t: C64, w: C64) -> LimitResiduals {
        let (tc, wc) = (self.mp.cx(t), self.mp.cx(w));
        let pt = self.mp.scale_pi(&tc);
        let pw = self.mp.scale_pi(&wc);
        let pwt = self.mp.scale_pi(&self.mp.sub(&wc, &tc));
        let (st, ct) = (self.mp.sin(&pt), self.mp.cos(&pt));
        let sw = self.mp.sin(&pw);
        let swt = self.mp.sin(&pwt);
        let pi = self.mp.scale_pi(&self.mp.int(1));
        let pi2 = self.mp.mul(&pi, &pi);

        let rho_lim = self.mp.mul(&pi, &self.mp.div(&ct, &st));
        let sigma_lim = self.mp.div(&self.mp.mul(&pi, &swt), &self.mp.mul(&sw, &st));
        let phi_lim = self.mp.div(&pi2, &self.mp.mul(&sw, &sw));

        let rho = self.rho_cx(&tc);
        let sigma = self.sigma_cx(&wc, &tc);
        let eta = self.eta_cx(&tc);
        let phi = self.phi_cx(&wc, &tc);
        LimitResiduals {
            tau: self.tau,
            rho: self.mp.abs_f64(&self.mp.sub(&rho, &rho_lim)),
            sigma: self.mp.abs_f64(&self.mp.sub(&sigma, &sigma_lim)),
            eta: self.mp.abs_f64(&self.mp.add(&eta, &pi2)),
            phi: self.mp.abs_f64(&self.mp.sub(&phi, &phi_lim)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitResiduals {
    pub tau: C64,
    pub rho: f64,
    pub sigma: f64,
    pub eta: f64,
    pub phi: f64,
}

impl LimitResiduals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.rho, self.sigma, self.eta, self.phi]
    }

    pub fn max(&self) -> f64 {
        self.as_array().iter().cloned().fold(0.0, f64::max)
    }
}

pub fn elliptic_limit_check(tau: C64, t: C64, w: C64) -> Result<LimitResiduals> {
    Ok(EllipticCoeffs::new(tau)?.limit_residuals(t, w))
}

/// Observed decay exponents −log(r(τ + iΔ)/r(τ))/(2πΔ) between consecutive
/// imaginary parts, per coefficient; e^{2πiτ} decay gives values near 1.
pub fn decay_exponents(ims: &[f64], t: C64, w: C64) -> Result<Vec<[f64; 4]>> {
    let res: Vec<LimitResiduals> =
        ims.iter().map(|&y| elliptic_limit_check(C64::new(0.0, y), t, w)).collect::<Result<_>>()?;
    Ok(res
        .windows(2)
        .map(|pair| {
            let (a, b) = (pair[0].as_array(), pair[1].as_array());
            let dy = pair[1].tau.im - pair[0].tau.im;
            let mut out = [0.0; 4];
            for k in 0..4 {
                out[k] = -(b[k] / a[k]).ln() / (2.0 * std::f64::consts::PI * dy);
            }
            out
        })
        .collect())
}
