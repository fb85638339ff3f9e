use std::f64::consts::TAU;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::classify::{classify, ArcConfig, ArcPoint};
use super::weight::{SmoothWeight, DEFAULT_TAPER};
use crate::error::{invalid, Error, Result};
use crate::sieve::arith::{euler_phi, gcd, lcm};
use crate::sieve::{majorant_range, SieveParams};

/// Cap on the long comparison window.
pub const LONG_WINDOW_CAP: u64 = 10_000_000;

/// Function summed against the phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// Prime indicator.
    Rho,
    /// The sieve majorant ρ⁺.
    RhoPlus,
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rho" => Ok(Kernel::Rho),
            "rho+" | "rho_plus" | "rho-plus" => Ok(Kernel::RhoPlus),
            other => Err(invalid("kernel", format!("unknown kernel `{other}` (rho, rho+)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    n: u64,
    weight: f64,
    rho: u8,
    rho_plus: u32,
}

impl Point {
    fn value(&self, kernel: Kernel) -> f64 {
        match kernel {
            Kernel::Rho => f64::from(self.rho),
            Kernel::RhoPlus => f64::from(self.rho_plus),
        }
    }
}

/// Fractional part of nγ, using an error-free product so large n keep full
/// phase accuracy.
pub fn phase(n: u64, gamma: f64) -> f64 {
    let nf = n as f64;
    let p = nf * gamma;
    let err = nf.mul_add(gamma, -p);
    (p.rem_euclid(1.0) + err).rem_euclid(1.0)
}

/// e(nγ) = exp(2πi nγ).
pub fn e_n(n: u64, gamma: f64) -> Complex64 {
    let t = TAU * phase(n, gamma);
    Complex64::new(t.cos(), t.sin())
}

/// Short window [x, x + x^θ] with its smooth weight and factored values,
/// plus the long comparison window [x, x + min(h₁, 10⁷)].
#[derive(Debug)]
pub struct ArcSetup {
    pub params: SieveParams,
    pub config: ArcConfig,
    pub weight: SmoothWeight<f64>,
    pub long_weight: SmoothWeight<f64>,
    /// h₁ = x·exp(−√log x).
    pub h1: f64,
    /// Length actually used for the long window.
    pub long_len: u64,
    pub long_truncated: bool,
    short: Vec<Point>,
    long_cache: [OnceLock<f64>; 2],
}

/// One line of a main-term comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub gamma: f64,
    pub a: u64,
    pub q: u64,
    pub lambda: f64,
    pub is_major: bool,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    /// |LHS − RHS| / (x^θ / log x), with RHS = 0 on minor arcs.
    pub deviation: f64,
}

impl Comparison {
    pub fn lhs(&self) -> Complex64 {
        Complex64::new(self.lhs_re, self.lhs_im)
    }

    pub fn rhs(&self) -> Complex64 {
        Complex64::new(self.rhs_re, self.rhs_im)
    }
}

fn check_residue(d: u64, c: u64) -> Result<u64> {
    if d == 0 {
        return Err(invalid("d", "modulus must be positive"));
    }
    let c = c % d;
    if gcd(c, d) != 1 {
        return Err(Error::NotCoprime { residue: c, modulus: d });
    }
    Ok(c)
}

impl ArcSetup {
    /// Factors the short window with the default taper.
    pub fn new(params: SieveParams, config: ArcConfig) -> Result<Self> {
        Self::with_taper(params, config, DEFAULT_TAPER)
    }

    pub fn with_taper(params: SieveParams, config: ArcConfig, taper: f64) -> Result<Self> {
        params.validate()?;
        if params.x != config.x || params.theta != config.theta {
            return Err(invalid("config", "sieve and arc parameters disagree on x or θ"));
        }
        let x = params.x;
        let len = config.short_length().floor();
        let weight = SmoothWeight::new(x as f64, len, taper)?;
        let lx = (x as f64).ln();
        let h1 = x as f64 * (-lx.sqrt()).exp();
        let long_len = (h1.floor() as u64).clamp(1, LONG_WINDOW_CAP);
        let long_weight = SmoothWeight::new(x as f64, long_len as f64, taper)?;
        let hi = x + len as u64 + 1;
        let short = majorant_range(&params, x, hi)?
            .into_iter()
            .map(|r| Point {
                n: r.n,
                weight: weight.eval(r.n as f64),
                rho: r.rho,
                rho_plus: r.rho_plus,
            })
            .collect();
        Ok(Self {
            params,
            config,
            weight,
            long_weight,
            h1,
            long_len,
            long_truncated: (long_len as f64) < h1.floor(),
            short,
            long_cache: [OnceLock::new(), OnceLock::new()],
        })
    }

    /// x^θ / log x.
    pub fn normalizer(&self) -> f64 {
        self.config.short_length() / (self.params.x as f64).ln()
    }

    /// Σ_{n ∈ [x, x+x^θ], n ≡ c (d)} K(n) g(n) e(nγ).
    pub fn exp_sum(&self, kernel: Kernel, d: u64, c: u64, gamma: f64) -> Result<Complex64> {
        let c = check_residue(d, c)?;
        Ok(self
            .short
            .iter()
            .filter(|p| p.n % d == c && p.weight != 0.0)
            .map(|p| e_n(p.n, gamma) * (p.value(kernel) * p.weight))
            .sum())
    }

    /// Σ_n K(n) g(n) over the short window, the γ = 0 value of `exp_sum`.
    pub fn weighted_sum(&self, kernel: Kernel) -> f64 {
        self.short.iter().map(|p| p.value(kernel) * p.weight).sum()
    }

    /// (1/ĝ₁(0)) Σ_{n ∈ [x, x+h₁]} g₁(n) K(n), computed once per kernel.
    pub fn long_density(&self, kernel: Kernel) -> Result<f64> {
        let slot = &self.long_cache[kernel as usize];
        if let Some(v) = slot.get() {
            return Ok(*v);
        }
        let x = self.params.x;
        let rows = majorant_range(&self.params, x, x + self.long_len + 1)?;
        let (mut num, mut den) = (0.0, 0.0);
        for r in rows {
            let w = self.long_weight.eval(r.n as f64);
            den += w;
            num += w * match kernel {
                Kernel::Rho => f64::from(r.rho),
                Kernel::RhoPlus => f64::from(r.rho_plus),
            };
        }
        Ok(*slot.get_or_init(|| num / den))
    }

    /// [d,q]/φ([d,q]) · (long density) · Σ_{n ≡ c (d), (n,q)=1} g(n) e(γn).
    pub fn saz_main_term(&self, kernel: Kernel, d: u64, c: u64, arc: &ArcPoint) -> Result<Complex64> {
        let c = check_residue(d, c)?;
        if d > self.config.max_modulus {
            return Err(invalid("d", format!("{d} exceeds the modulus bound {}", self.config.max_modulus)));
        }
        if arc.q == 0 || arc.q as f64 > self.config.big_q {
            return Err(invalid("q", format!("{} exceeds Q = {}", arc.q, self.config.big_q)));
        }
        let l = lcm(d, arc.q);
        let factor = l as f64 / euler_phi(l) as f64;
        let density = self.long_density(kernel)?;
        let twisted: Complex64 = self
            .short
            .iter()
            .filter(|p| p.n % d == c && gcd(p.n, arc.q) == 1 && p.weight != 0.0)
            .map(|p| e_n(p.n, arc.gamma) * p.weight)
            .sum();
        Ok(twisted * (factor * density))
    }

    /// Both sides of the main-term equation at γ.
    pub fn saz_compare(&self, kernel: Kernel, d: u64, c: u64, gamma: f64) -> Result<Comparison> {
        let arc = classify(gamma, &self.config)?;
        let lhs = self.exp_sum(kernel, d, c, arc.gamma)?;
        let rhs = if arc.is_major {
            self.saz_main_term(kernel, d, c, &arc)?
        } else {
            Complex64::new(0.0, 0.0)
        };
        Ok(Comparison {
            gamma: arc.gamma,
            a: arc.a,
            q: arc.q,
            lambda: arc.lambda,
            is_major: arc.is_major,
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            deviation: (lhs - rhs).norm() / self.normalizer(),
        })
    }

    /// `saz_compare` over many γ in parallel; output order follows `gammas`.
    pub fn saz_compare_many(&self, kernel: Kernel, d: u64, c: u64, gammas: &[f64]) -> Result<Vec<Comparison>> {
        // fill the cache before fanning out
        self.long_density(kernel)?;
        gammas
            .par_iter()
            .map(|&g| self.saz_compare(kernel, d, c, g))
            .collect()
    }
}
