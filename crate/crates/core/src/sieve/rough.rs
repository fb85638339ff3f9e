//! Rough-number indicators, the majorant ρ⁺, and exact sieve identities.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};

use super::params::SieveParams;
use super::window::{sieve_window, split_range, Factors, PrimeWindow, DEFAULT_BUDGET};

/// Which primes make up P(y).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cutoff {
    /// P(y) = ∏_{p < y} p, so ρ(p, p) = 1.
    #[default]
    Strict,
    /// P(y) = ∏_{p ≤ y} p.
    Inclusive,
}

impl Cutoff {
    /// Whether the prime `p` divides P(y).
    pub fn sifts(self, p: u64, y: u64) -> bool {
        match self {
            Cutoff::Strict => p < y,
            Cutoff::Inclusive => p <= y,
        }
    }

    /// ρ(n, y): 1 if gcd(n, P(y)) = 1, else 0.
    pub fn rho(self, n: Factors<'_>, y: u64) -> u8 {
        u8::from(!n.primes().iter().any(|&p| self.sifts(p, y)))
    }
}

/// ρ(n, y) with the strict convention.
pub fn rho(n: Factors<'_>, y: u64) -> u8 {
    Cutoff::Strict.rho(n, y)
}

/// ρ(m, y) for m = n / (p_a p_b p_c), where a, b, c index distinct primes of n.
fn rho_of_quotient(n: Factors<'_>, removed: [usize; 3], y: u64, cutoff: Cutoff) -> u8 {
    for (i, (p, e)) in n.iter().enumerate() {
        let left = e - u32::from(removed.contains(&i));
        if left > 0 && cutoff.sifts(p, y) {
            return 0;
        }
    }
    1
}

/// ρ⁺(n) = ρ(n, y4) + Σ_{n = p₁p₂p₃m, z < p₁ < p₂ < p₃ < y4} ρ(m, p₁).
pub fn rho_plus(n: Factors<'_>, params: &SieveParams) -> u32 {
    let cutoff = params.cutoff;
    let mut total = u32::from(cutoff.rho(n, params.y4));
    let primes = n.primes();
    let cand: Vec<usize> = (0..primes.len())
        .filter(|&i| primes[i] > params.z && primes[i] < params.y4)
        .collect();
    for (a, &i) in cand.iter().enumerate() {
        for (b, &j) in cand.iter().enumerate().skip(a + 1) {
            for &k in &cand[b + 1..] {
                total += u32::from(rho_of_quotient(n, [i, j, k], primes[i], cutoff));
            }
        }
    }
    total
}

/// One row of a majorant table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MajorantRow {
    pub n: u64,
    /// Prime indicator ρ(n).
    pub rho: u8,
    pub rho_plus: u32,
}

/// ρ and ρ⁺ for every n of an already factored window.
pub fn majorant_rows(window: &PrimeWindow, params: &SieveParams) -> Vec<MajorantRow> {
    window
        .iter()
        .map(|(n, f)| MajorantRow {
            n,
            rho: u8::from(f.is_prime()),
            rho_plus: rho_plus(f, params),
        })
        .collect()
}

/// `(n, ρ(n), ρ⁺(n))` for n in `[lo, hi)`.
///
/// The range must sit inside the band [x − x^θ, x + 2x^θ]; larger ranges
/// are split into budget-sized windows processed in parallel and
/// concatenated in order.
pub fn majorant_window(params: &SieveParams, lo: u64, hi: u64) -> Result<Vec<MajorantRow>> {
    params.validate()?;
    let len = params.short_length();
    let x = params.x as f64;
    if (lo as f64) < x - len || (hi as f64) > x + 2.0 * len + 1.0 {
        return Err(invalid(
            "window",
            format!("[{lo}, {hi}) leaves the band [x − x^θ, x + 2x^θ] for x = {}", params.x),
        ));
    }
    majorant_range(params, lo, hi)
}

/// Like [`majorant_window`] but without the band check, for auxiliary
/// ranges such as long comparison windows. ρ⁺ keeps the cutoffs of `params`.
pub fn majorant_range(params: &SieveParams, lo: u64, hi: u64) -> Result<Vec<MajorantRow>> {
    params.validate()?;
    let pieces = split_range(lo, hi, DEFAULT_BUDGET);
    let parts: Vec<Vec<MajorantRow>> = pieces
        .par_iter()
        .map(|&(a, b)| sieve_window(a, b).map(|w| majorant_rows(&w, params)))
        .collect::<Result<_>>()?;
    Ok(parts.concat())
}

/// Counts n in the window violating Buchstab's identity
///
/// ```text
/// ρ(n, z) = ρ(n, w) − Σ_{p | n, w ≤ p < z} ρ(n/p, p)
/// ```
///
/// Under the inclusive convention the range is `w < p ≤ z` and the inner
/// term is ρ(n/p, p − 1), i.e. n/p has no prime factor below p. Both sides are
/// evaluated independently from the factorization; a correct sieve gives 0.
pub fn buchstab_identity_check(
    window: &PrimeWindow,
    w: u64,
    z: u64,
    cutoff: Cutoff,
) -> Result<u64> {
    if w < 2 || w > z {
        return Err(invalid("w/z", format!("need 2 ≤ w ≤ z, got w = {w}, z = {z}")));
    }
    let in_range = |p: u64| match cutoff {
        Cutoff::Strict => w <= p && p < z,
        Cutoff::Inclusive => w < p && p <= z,
    };
    let violations = window
        .iter()
        .filter(|&(_, f)| {
            let lhs = i64::from(cutoff.rho(f, z));
            let mut rhs = i64::from(cutoff.rho(f, w));
            for (i, &p) in f.primes().iter().enumerate() {
                if !in_range(p) {
                    continue;
                }
                // Primes of n/p are those of n with p's exponent lowered.
                let blocked = f.iter().enumerate().any(|(j, (q, e))| {
                    let left = if i == j { e - 1 } else { e };
                    left > 0 && q < p
                });
                rhs -= i64::from(!blocked);
            }
            lhs != rhs
        })
        .count();
    Ok(violations as u64)
}

/// ε(n) = ρ(n, ω) − Σ_{d | n, d | P(ω), d < D} μ(d), the truncation error of
/// the Möbius expansion of ρ(n, ω) at divisor bound D.
pub fn fundamental_error(n: Factors<'_>, omega: u64, divisor_bound: f64, cutoff: Cutoff) -> i64 {
    let small: Vec<u64> = n
        .primes()
        .iter()
        .copied()
        .filter(|&p| cutoff.sifts(p, omega))
        .collect();
    // Σ μ(d) over squarefree d built from `small` with d < D.
    fn walk(primes: &[u64], d: f64, sign: i64, bound: f64) -> i64 {
        let mut acc = sign;
        for (i, &p) in primes.iter().enumerate() {
            let next = d * p as f64;
            if next < bound {
                acc += walk(&primes[i + 1..], next, -sign, bound);
            }
        }
        acc
    }
    let truncated = if 1.0 < divisor_bound {
        walk(&small, 1.0, 1, divisor_bound)
    } else {
        0
    };
    i64::from(cutoff.rho(n, omega)) - truncated
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FundamentalErrorReport {
    /// Σ_n |ε(n)| over the window.
    pub total_abs: u64,
    /// total_abs / window length.
    pub ratio: f64,
    /// Count of n per value of ε(n).
    pub histogram: BTreeMap<i64, u64>,
    /// D = x^ε.
    pub divisor_bound: f64,
    pub omega_cutoff: u64,
}

/// Scans ε(n) over a window with D = x^{eps_exp} and the params' ω-cutoff.
///
/// Reports only; the underlying bound is asymptotic and has no desk-scale
/// threshold.
pub fn fundamental_error_scan(
    window: &PrimeWindow,
    params: &SieveParams,
    eps_exp: f64,
) -> Result<FundamentalErrorReport> {
    if params.omega_cutoff < 2 {
        return Err(invalid("omega_cutoff", "must be ≥ 2"));
    }
    if !(eps_exp > 0.0 && eps_exp < params.theta / 2.0) {
        return Err(invalid(
            "eps_exp",
            format!("{eps_exp} must lie in (0, θ/2) with θ = {}", params.theta),
        ));
    }
    let bound = (params.x as f64).powf(eps_exp);
    let mut histogram = BTreeMap::new();
    let mut total_abs = 0u64;
    for (_, f) in window.iter() {
        let e = fundamental_error(f, params.omega_cutoff, bound, params.cutoff);
        total_abs += e.unsigned_abs();
        *histogram.entry(e).or_insert(0) += 1;
    }
    Ok(FundamentalErrorReport {
        total_abs,
        ratio: total_abs as f64 / window.len() as f64,
        histogram,
        divisor_bound: bound,
        omega_cutoff: params.omega_cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::window::Factorization;

    fn f(n: u64) -> Factorization {
        Factorization::of(n)
    }

    fn small_params(z: u64, y4: u64) -> SieveParams {
        SieveParams::new(100_000_000, 0.65)
            .unwrap()
            .with_cutoffs(z, y4)
            .unwrap()
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(f(15).as_factors(), 4), 0);
        assert_eq!(rho(f(7).as_factors(), 7), 1);
        assert_eq!(Cutoff::Inclusive.rho(f(7).as_factors(), 7), 0);
        for y in [2, 3, 100, 1 << 40] {
            assert_eq!(rho(f(1).as_factors(), y), 1);
        }
    }

    #[test]
    fn rho_plus_examples() {
        let p = small_params(6, 100);
        assert_eq!(rho_plus(f(101_101).as_factors(), &p), 1);
        assert_eq!(rho_plus(f(17_017).as_factors(), &p), 3);
        assert_eq!(rho_plus(f(101).as_factors(), &p), 1);
        assert_eq!(rho_plus(f(97).as_factors(), &p), 0);
        assert_eq!(rho_plus(f(2 * 7 * 11 * 13).as_factors(), &p), 0);
    }

    #[test]
    fn even_numbers_vanish_once_z_reaches_three() {
        let params = SieveParams::new(100_000_000, 0.65).unwrap();
        let rows = majorant_window(&params, 100_000_000, 100_002_000).unwrap();
        for r in rows.iter().filter(|r| r.n % 2 == 0) {
            assert_eq!(r.rho_plus, 0, "n = {}", r.n);
        }
        for r in rows.iter().filter(|r| r.rho == 1) {
            assert_eq!(r.rho_plus, 1, "prime {}", r.n);
        }
    }

    #[test]
    fn majorant_band_is_enforced() {
        let params = SieveParams::new(1_000_000, 0.5).unwrap();
        assert!(majorant_window(&params, 1_000_000, 1_003_000).is_err());
        assert!(majorant_window(&params, 990_000, 1_000_100).is_err());
        assert!(majorant_window(&params, 999_000, 1_002_000).is_ok());
    }

    #[test]
    fn identity_trivial_and_small_windows() {
        let w = sieve_window(2, 10_000).unwrap();
        assert_eq!(buchstab_identity_check(&w, 50, 50, Cutoff::Strict).unwrap(), 0);
        assert_eq!(buchstab_identity_check(&w, 3, 100, Cutoff::Strict).unwrap(), 0);
        assert_eq!(buchstab_identity_check(&w, 3, 100, Cutoff::Inclusive).unwrap(), 0);
        assert!(buchstab_identity_check(&w, 1, 100, Cutoff::Strict).is_err());
    }

    #[test]
    fn fundamental_error_examples() {
        let c = Cutoff::Strict;
        // prime above the divisor bound
        assert_eq!(fundamental_error(f(1_000_003).as_factors(), 20, 100.0, c), 0);
        for k in 1..20 {
            assert_eq!(fundamental_error(f(1 << k).as_factors(), 20, 100.0, c), 0);
        }
        // 3·5·7 = 105: all divisors of P(20) dividing it are < 1000, Σμ = 0 = ρ
        assert_eq!(fundamental_error(f(105).as_factors(), 20, 1000.0, c), 0);
        // with D = 100 the divisor 105 is dropped: ε = 0 − (0 − μ(105)) = −1
        assert_eq!(fundamental_error(f(105).as_factors(), 20, 100.0, c), -1);
    }

    #[test]
    fn fundamental_scan_reports() {
        let params = SieveParams::new(1_000_000, 0.7)
            .unwrap()
            .with_omega_cutoff(20)
            .unwrap();
        let w = sieve_window(1_000_000, 1_010_000).unwrap();
        let rep = fundamental_error_scan(&w, &params, 1.0 / 3.0).unwrap();
        assert!((rep.divisor_bound - 100.0).abs() < 1e-6);
        let n: u64 = rep.histogram.values().sum();
        assert_eq!(n, 10_000);
        assert!(rep.ratio >= 0.0);
        assert!(fundamental_error_scan(&w, &params, 0.4).is_err());
    }
}
