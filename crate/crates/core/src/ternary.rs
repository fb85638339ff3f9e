//! Representations n = p₁ + p₂ + p₃ with every pᵢ close to n/3.
//!
//! The window for half-width H is the closed interval
//! [⌈n/3⌉ − H, ⌊n/3⌋ + H] ∩ [2, ∞); counts are of ordered triples.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::sieve::arith::{prime_flags, primes_up_to};
use crate::sieve::Factorization;
use crate::transference::fft::convolve_many;

/// Human-readable statement of the window convention, for output headers.
pub const WINDOW_CONVENTION: &str =
    "window(n,H) = [max(2, ceil(n/3) - H), floor(n/3) + H]; counts are ordered prime triples";

fn check_n(n: u64) -> Result<()> {
    if n < 9 || n % 2 == 0 {
        return Err(invalid("n", format!("{n} must be odd and at least 9")));
    }
    Ok(())
}

/// Closed window [lo, hi] for half-width H.
pub fn window(n: u64, h: u64) -> (u64, u64) {
    let lo = n.div_ceil(3).saturating_sub(h).max(2);
    (lo, n / 3 + h)
}

/// Primality flags over a fixed range, shared by nearby n.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    lo: u64,
    flags: Vec<bool>,
}

impl PrimeTable {
    /// Flags for the closed range [lo, hi].
    pub fn new(lo: u64, hi: u64) -> Self {
        Self {
            lo,
            flags: prime_flags(lo, hi + 1),
        }
    }

    /// Table covering every window of half-width ≤ `h` for n ∈ [n_lo, n_hi].
    pub fn for_range(n_lo: u64, n_hi: u64, h: u64) -> Self {
        let (lo, _) = window(n_lo, h);
        let (_, hi) = window(n_hi, h);
        Self::new(lo, hi)
    }

    pub fn covers(&self, lo: u64, hi: u64) -> bool {
        lo >= self.lo && hi < self.lo + self.flags.len() as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        debug_assert!(self.covers(n, n));
        self.flags[(n - self.lo) as usize]
    }

    fn primes_in(&self, lo: u64, hi: u64) -> Vec<u64> {
        (lo..=hi).filter(|&p| self.is_prime(p)).collect()
    }
}

/// Ordered representations with every part in the window, by FFT
/// convolution of the window's prime indicator with itself three times.
pub fn count_with_table(n: u64, h: u64, table: &PrimeTable) -> Result<u64> {
    check_n(n)?;
    let (lo, hi) = window(n, h);
    if lo > hi || 3 * lo > n || 3 * hi < n {
        return Ok(0);
    }
    if !table.covers(lo, hi) {
        return Err(invalid("table", format!("prime table does not cover [{lo}, {hi}]")));
    }
    let ind: Vec<f64> = (lo..=hi)
        .map(|p| if table.is_prime(p) { 1.0 } else { 0.0 })
        .collect();
    let conv = convolve_many(&[&ind, &ind, &ind]);
    Ok(conv
        .get((n - 3 * lo) as usize)
        .map_or(0, |v| v.round().max(0.0) as u64))
}

/// Number of ordered prime triples summing to n with |pᵢ − n/3| ≤ H
/// (window clipped at 2).
pub fn count_representations(n: u64, h: u64) -> Result<u64> {
    check_n(n)?;
    let (lo, hi) = window(n, h);
    count_with_table(n, h, &PrimeTable::new(lo, hi))
}

/// A representation with all parts in window(n, H), if one exists. Searches
/// p₁ ≤ p₂ ≤ p₃ and stops at the first hit.
pub fn find_representation(n: u64, h: u64, table: &PrimeTable) -> Result<Option<(u64, u64, u64)>> {
    check_n(n)?;
    let (lo, hi) = window(n, h);
    if lo > hi {
        return Ok(None);
    }
    if !table.covers(lo, hi) {
        return Err(invalid("table", format!("prime table does not cover [{lo}, {hi}]")));
    }
    let primes = table.primes_in(lo, hi);
    for (i, &p1) in primes.iter().enumerate() {
        if 3 * p1 > n {
            break;
        }
        for &p2 in &primes[i..] {
            if p1 + 2 * p2 > n {
                break;
            }
            let p3 = n - p1 - p2;
            if p3 <= hi && table.is_prime(p3) {
                return Ok(Some((p1, p2, p3)));
            }
        }
    }
    Ok(None)
}

/// Per-n result of the minimal-window search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepresentationStats {
    pub n: u64,
    pub h: u64,
    /// Ordered representations in window(n, h).
    pub count: u64,
    pub h_min: u64,
    /// log(max(H_min, 1)) / log n.
    pub theta_min: f64,
    pub witness: (u64, u64, u64),
}

/// Smallest H with a representation and a witness triple: doubling, then
/// bisection, never beyond H = n/3.
pub fn min_window_with_table(n: u64, table: &PrimeTable) -> Result<(u64, (u64, u64, u64))> {
    check_n(n)?;
    let cap = n / 3;
    let mut found = find_representation(n, 0, table)?;
    if let Some(t) = found {
        return Ok((0, t));
    }
    let (mut bad, mut good) = (0u64, 1u64);
    loop {
        found = find_representation(n, good, table)?;
        if found.is_some() {
            break;
        }
        if good >= cap {
            return Err(invalid("n", format!("no representation of {n} with H ≤ {cap}")));
        }
        bad = good;
        good = (good * 2).min(cap);
    }
    let mut witness = found.expect("loop exits on a hit");
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        match find_representation(n, mid, table)? {
            Some(t) => {
                good = mid;
                witness = t;
            }
            None => bad = mid,
        }
    }
    Ok((good, witness))
}

/// H_min(n) with its own prime table.
pub fn min_window(n: u64) -> Result<u64> {
    check_n(n)?;
    let (lo, hi) = window(n, n / 3);
    Ok(min_window_with_table(n, &PrimeTable::new(lo, hi))?.0)
}

/// Full statistics of n at half-width H.
pub fn representation_stats(n: u64, h: u64) -> Result<RepresentationStats> {
    check_n(n)?;
    let (lo, hi) = window(n, h.max(n / 3));
    let table = PrimeTable::new(lo, hi);
    stats_with_table(n, h, &table)
}

fn stats_with_table(n: u64, h: u64, table: &PrimeTable) -> Result<RepresentationStats> {
    let (h_min, witness) = min_window_with_table(n, table)?;
    Ok(RepresentationStats {
        n,
        h,
        count: count_with_table(n, h, table)?,
        h_min,
        theta_min: (h_min.max(1) as f64).ln() / (n as f64).ln(),
        witness,
    })
}

/// Truncated singular series with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularSeries {
    pub value: f64,
    /// The untruncated series lies in [value, value + tail_bound].
    pub tail_bound: f64,
    pub cap: u64,
}

/// Smallest accepted truncation point.
pub const MIN_SERIES_CAP: u64 = 1000;

/// 𝔖(n) = ∏_{p|n} (1 − (p−1)^{−2}) · ∏_{p∤n, p ≤ cap} (1 + (p−1)^{−3}).
pub fn singular_series(n: u64, cap: u64) -> Result<SingularSeries> {
    if cap < MIN_SERIES_CAP {
        return Err(invalid("prime_cap", format!("{cap} is below {MIN_SERIES_CAP}")));
    }
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    let divisors = Factorization::of(n);
    let divides = |p: u64| n % p == 0;
    let mut value = 1.0f64;
    for (p, _) in divisors.as_factors().iter() {
        let r = (p - 1) as f64;
        value *= 1.0 - 1.0 / (r * r);
    }
    for p in primes_up_to(cap) {
        if !divides(p) {
            let r = (p - 1) as f64;
            value *= 1.0 + 1.0 / (r * r * r);
        }
    }
    // Σ_{p > cap} (p−1)^{−3} ≤ ∫_{cap−1}^∞ t^{−3} dt
    let c = (cap - 1) as f64;
    let tail = (0.5 / (c * c)).exp_m1();
    Ok(SingularSeries {
        value,
        tail_bound: value.abs() * tail,
        cap,
    })
}

/// Default truncation point of the singular series.
pub const DEFAULT_SERIES_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub n: u64,
    pub h: u64,
    pub singular_series: f64,
    /// 𝔖(n)·3H²/log³(n/3).
    pub value: f64,
    /// False when H < log² n, where the model is not meaningful.
    pub in_range: bool,
}

/// Hardy–Littlewood style prediction of the ordered count in window(n, H).
pub fn predicted_count(n: u64, h: u64) -> Result<Prediction> {
    if n < 9 {
        return Err(invalid("n", format!("{n} is below 9")));
    }
    let s = singular_series(n, DEFAULT_SERIES_CAP)?.value;
    let l = (n as f64 / 3.0).ln();
    let hf = h as f64;
    Ok(Prediction {
        n,
        h,
        singular_series: s,
        value: s * 3.0 * hf * hf / (l * l * l),
        in_range: hf >= (n as f64).ln().powi(2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: u64,
    pub h_min: u64,
    pub theta_min: f64,
    /// ⌈n^θ⌉.
    pub h: u64,
    pub count_at_theta: u64,
}

impl ScanRow {
    pub fn success(&self) -> bool {
        self.count_at_theta > 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub lo: u64,
    pub hi: u64,
    pub theta: f64,
    pub rows: Vec<ScanRow>,
    /// Every odd n whose window at H = ⌈n^θ⌉ has no representation.
    pub failures: Vec<u64>,
    pub max_theta_min: f64,
    pub argmax: u64,
    /// Counts of theta_min in [k/20, (k+1)/20).
    pub histogram: Vec<u64>,
}

/// Bins of the theta_min histogram.
pub const HISTOGRAM_BINS: usize = 20;

/// ⌈n^θ⌉; values within 1e-9 relative of an integer are snapped to it so
/// exact powers are not pushed up by rounding.
pub fn half_width(n: u64, theta: f64) -> u64 {
    let v = (n as f64).powf(theta);
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.max(1.0) {
        r as u64
    } else {
        v.ceil() as u64
    }
}

/// Scans every odd n ∈ [lo, hi] at H = ⌈n^θ⌉.
pub fn scan_range(lo: u64, hi: u64, theta: f64) -> Result<ScanReport> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(invalid("theta", format!("{theta} must lie in (0, 1)")));
    }
    let first = lo.max(9) | 1;
    if first > hi {
        return Err(invalid("range", format!("no odd n ≥ 9 in [{lo}, {hi}]")));
    }
    let ns: Vec<u64> = (first..=hi).step_by(2).collect();
    const CHUNK: usize = 512;
    let rows: Vec<ScanRow> = ns
        .par_chunks(CHUNK)
        .map(|chunk| {
            let (a, b) = (chunk[0], *chunk.last().expect("nonempty chunk"));
            let reach = half_width(b, theta).max(b / 3);
            let table = PrimeTable::for_range(a, b, reach);
            chunk
                .iter()
                .map(|&n| {
                    let h = half_width(n, theta);
                    let s = stats_with_table(n, h, &table)?;
                    Ok(ScanRow {
                        n,
                        h_min: s.h_min,
                        theta_min: s.theta_min,
                        h,
                        count_at_theta: s.count,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    let failures = rows.iter().filter(|r| !r.success()).map(|r| r.n).collect();
    let mut histogram = vec![0u64; HISTOGRAM_BINS];
    let mut max = (f64::NEG_INFINITY, 0);
    for r in &rows {
        histogram[((r.theta_min * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1)] += 1;
        if r.theta_min > max.0 {
            max = (r.theta_min, r.n);
        }
    }
    Ok(ScanReport {
        lo,
        hi,
        theta,
        rows,
        failures,
        max_theta_min: max.0,
        argmax: max.1,
        histogram,
    })
}
