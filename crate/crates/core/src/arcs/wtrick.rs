use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::classify::{classify, ArcConfig};
use super::sums::e_n;
use crate::error::{invalid, Error, Result};
use crate::sieve::arith::{euler_phi, gcd};
use crate::sieve::{majorant_range, majorant_window, SieveParams};
use crate::transference::DensityFunction;

/// The pair (f, ν) on [N] obtained by restricting ρ and ρ⁺ to the
/// progression W(m + n) + b.
#[derive(Debug, Clone, PartialEq)]
pub struct WTricked {
    pub f: DensityFunction<f64>,
    pub nu: DensityFunction<f64>,
    pub n: usize,
    pub m: u64,
    pub b: u64,
    pub big_w: u64,
    /// (log x / α⁺)·φ(W)/W.
    pub scale: f64,
}

impl WTricked {
    /// The integer W(m + n) + b represented by n ∈ [N].
    pub fn lift(&self, n: usize) -> u64 {
        self.big_w * (self.m + n as u64) + self.b
    }
}

/// Builds f(n) = (log x/α⁺)(φ(W)/W) ρ(W(m+n)+b) and ν likewise with ρ⁺,
/// for n ∈ [N] with N = ⌊4x^θ/(3W)⌋. `m` defaults to ⌊(x − x^θ/3)/W⌋.
pub fn build_w_tricked(params: &SieveParams, b: u64, m: Option<u64>, alpha_plus: f64) -> Result<WTricked> {
    params.validate()?;
    let w = params.big_w;
    if b >= w && w > 1 {
        return Err(invalid("b", format!("{b} is not reduced modulo W = {w}")));
    }
    if gcd(b, w) != 1 {
        return Err(Error::NotCoprime { residue: b, modulus: w });
    }
    if !(alpha_plus > 0.0 && alpha_plus.is_finite()) {
        return Err(invalid("alpha_plus", format!("{alpha_plus} must be positive")));
    }
    let x = params.x as f64;
    let len = params.short_length();
    let n = (4.0 * len / (3.0 * w as f64)).floor() as usize;
    if n == 0 {
        return Err(Error::Empty("W-tricked interval"));
    }
    let m = m.unwrap_or(((x - len / 3.0) / w as f64).floor() as u64);
    let scale = x.ln() / alpha_plus * euler_phi(w) as f64 / w as f64;
    let lo = w * (m + 1) + b;
    let hi = w * (m + n as u64) + b + 1;
    let rows = majorant_range(params, lo, hi)?;
    let mut f = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    for k in 1..=n as u64 {
        let r = &rows[(w * (m + k) + b - lo) as usize];
        f.push(scale * f64::from(r.rho));
        nu.push(scale * f64::from(r.rho_plus));
    }
    Ok(WTricked {
        f: DensityFunction::new(f)?,
        nu: DensityFunction::new(nu)?,
        n,
        m,
        b,
        big_w: w,
        scale,
    })
}

/// Farey points a/q (q ≤ `qmax`) followed by `random` seeded minor-arc points.
pub fn eta_grid(config: &ArcConfig, qmax: u64, random: usize, seed: u64) -> Result<Vec<f64>> {
    if qmax == 0 {
        return Err(invalid("qmax", "must be positive"));
    }
    let mut grid: Vec<f64> = (1..=qmax)
        .flat_map(|q| (0..q).filter(move |&a| gcd(a, q) == 1).map(move |a| a as f64 / q as f64))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut added = 0;
    let mut tries = 0;
    while added < random {
        tries += 1;
        if tries > 1000 * random.max(1) {
            return Err(Error::GeneratorExhausted {
                what: "minor-arc grid points".into(),
                retries: tries,
            });
        }
        let g: f64 = rng.gen();
        if !classify(g, config)?.is_major {
            grid.push(g);
            added += 1;
        }
    }
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaRow {
    pub gamma: f64,
    pub q: u64,
    pub is_major: bool,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaReport {
    /// max over the grid of the normalized deviation.
    pub eta: f64,
    pub argmax_gamma: f64,
    pub alpha_plus: f64,
    pub residue: u64,
    pub big_w: u64,
    pub rows: Vec<EtaRow>,
}

/// Measures η in
///
/// ```text
/// |Σ ρ⁺(n)e(nγ) − (α⁺/log x)(W/φ(W)) Σ e(nγ)| ≤ η x^θ / (φ(W) log x),
/// ```
///
/// sums over n ∈ [x − x^θ/3, x + x^θ] with n ≡ b (mod W), as the maximum
/// over `grid`.
pub fn vin3_condition1_eta(
    params: &SieveParams,
    config: &ArcConfig,
    b: u64,
    grid: &[f64],
    alpha_plus: f64,
) -> Result<EtaReport> {
    params.validate()?;
    let w = params.big_w;
    if gcd(b % w.max(1), w) != 1 {
        return Err(Error::NotCoprime { residue: b % w.max(1), modulus: w });
    }
    if grid.is_empty() {
        return Err(Error::Empty("frequency grid"));
    }
    let x = params.x as f64;
    let len = params.short_length();
    let lo = (x - len / 3.0).ceil() as u64;
    let hi = (x + len).floor() as u64 + 1;
    let b = b % w.max(1);
    let support: Vec<(u64, f64)> = majorant_window(params, lo, hi)?
        .into_iter()
        .filter(|r| r.n % w == b)
        .map(|r| (r.n, f64::from(r.rho_plus)))
        .collect();
    let phi = euler_phi(w) as f64;
    let pred = alpha_plus / x.ln() * w as f64 / phi;
    let norm = len / (phi * x.ln());
    let rows: Vec<EtaRow> = grid
        .par_iter()
        .map(|&g| {
            let arc = classify(g, config)?;
            let diff: Complex64 = support.iter().map(|&(n, v)| e_n(n, arc.gamma) * (v - pred)).sum();
            Ok(EtaRow {
                gamma: arc.gamma,
                q: arc.q,
                is_major: arc.is_major,
                deviation: diff.norm() / norm,
            })
        })
        .collect::<Result<_>>()?;
    let (i, eta) = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (i, r.deviation))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(EtaReport {
        eta,
        argmax_gamma: rows[i].gamma,
        alpha_plus,
        residue: b,
        big_w: w,
        rows,
    })
}
