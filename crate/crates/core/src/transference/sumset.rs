use std::collections::BTreeSet;

use serde::Serialize;

use super::density::DensityFunction;
use super::fft::{convolve, convolve_many, dft_magnitudes};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Largest N for which [`triple_convolution`] cross-checks the FFT value
/// against direct summation.
pub const DIRECT_CHECK_LIMIT: usize = 512;

fn indicator_vec(set: &BTreeSet<usize>) -> Vec<f64> {
    let top = set.iter().next_back().copied().unwrap_or(0);
    let mut v = vec![0.0; top + 1];
    for &a in set {
        v[a] = 1.0;
    }
    v
}

/// Representation counts r(n) = #{(a, b) ∈ A × B : a + b = n}, indexed by n.
pub fn sum_counts(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    convolve(&indicator_vec(a), &indicator_vec(b))
        .into_iter()
        .map(|v| v.round().max(0.0) as u64)
        .collect()
}

/// The η-popular sums {n : 1_A * 1_B(n) ≥ η·max(|A|, |B|)}, restricted to
/// sums that occur at all.
pub fn popular_sums(a: &BTreeSet<usize>, b: &BTreeSet<usize>, eta: f64) -> Result<BTreeSet<usize>> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(invalid("eta", format!("{eta} must lie in (0, 1]")));
    }
    let threshold = eta * a.len().max(b.len()) as f64;
    Ok(sum_counts(a, b)
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c >= 1 && c as f64 >= threshold)
        .map(|(n, _)| n)
        .collect())
}

/// f₁*f₂*f₃(n) for every n ∈ [0, 3N], by FFT.
pub fn triple_convolution_all<T: Scalar>(
    f1: &DensityFunction<T>,
    f2: &DensityFunction<T>,
    f3: &DensityFunction<T>,
) -> Vec<f64> {
    let (a, b, c) = (f1.to_fft_input(), f2.to_fft_input(), f3.to_fft_input());
    let mut out = convolve_many(&[&a, &b, &c]);
    // inputs are nonnegative, so tiny negative values are roundoff
    for v in &mut out {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    out
}

/// Σ_{a+b+c=n} f₁(a)f₂(b)f₃(c) by direct O(N²) summation.
pub fn triple_convolution_direct<T: Scalar>(
    f1: &DensityFunction<T>,
    f2: &DensityFunction<T>,
    f3: &DensityFunction<T>,
    n: usize,
) -> f64 {
    let (a, b, c) = (f1.to_f64(), f2.to_f64(), f3.to_f64());
    let mut s = 0.0;
    for x in 1..=a.len() {
        let fx = a.values()[x - 1];
        if fx == 0.0 || x + 2 > n {
            continue;
        }
        for y in 1..=b.len() {
            if x + y >= n {
                break;
            }
            s += fx * b.values()[y - 1] * c.get((n - x - y) as i64);
        }
    }
    s
}

/// f₁*f₂*f₃(n) for n ∈ [2, 3N].
///
/// Evaluated by FFT. When N ≤ 512 the value is also summed directly and the
/// direct sum is returned if the two disagree beyond 1e-9 relative.
pub fn triple_convolution<T: Scalar>(
    f1: &DensityFunction<T>,
    f2: &DensityFunction<T>,
    f3: &DensityFunction<T>,
    n: usize,
) -> Result<f64> {
    let big_n = f1.len().max(f2.len()).max(f3.len());
    if n < 2 || n > 3 * big_n {
        return Err(invalid("n", format!("{n} must lie in [2, {}]", 3 * big_n)));
    }
    let all = triple_convolution_all(f1, f2, f3);
    let fft = all.get(n).copied().unwrap_or(0.0);
    if big_n <= DIRECT_CHECK_LIMIT {
        let direct = triple_convolution_direct(f1, f2, f3, n);
        if (fft - direct).abs() > 1e-9 * direct.abs().max(1.0) {
            return Ok(direct);
        }
    }
    Ok(fft)
}

/// Discrete ℓq norm of f̂ on a grid, with a refinement check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LqNorm {
    /// (Σ_j |f̂(j/M)|^q / M)^{1/q} on the requested grid.
    pub value: f64,
    /// The same quantity on the doubled grid.
    pub refined: f64,
    /// |value − refined|.
    pub error: f64,
    pub grid: usize,
}

/// (Σ_j |v̂(j/M)|^q / M)^{1/q} for a sequence v on consecutive integers.
pub(crate) fn lq_norm_of(values: &[f64], q: f64, m: usize) -> f64 {
    let s: f64 = dft_magnitudes(values, m).iter().map(|v| v.powf(q)).sum();
    (s / m as f64).powf(1.0 / q)
}

/// Minimal grid size relative to N.
pub const GRID_FACTOR: usize = 8;

/// Approximates (∫₀¹ |f̂(γ)|^q dγ)^{1/q} on M equispaced points, M ≥ 8N.
pub fn fourier_lq_norm<T: Scalar>(f: &DensityFunction<T>, q: f64, grid: usize) -> Result<LqNorm> {
    if !(q > 2.0 && q.is_finite()) {
        return Err(invalid("q_exp", format!("{q} must exceed 2")));
    }
    if grid < GRID_FACTOR * f.len().max(1) {
        return Err(invalid(
            "grid",
            format!("{grid} points is below {GRID_FACTOR}N = {}", GRID_FACTOR * f.len()),
        ));
    }
    let values = f.to_f64();
    let value = lq_norm_of(values.values(), q, grid);
    let refined = lq_norm_of(values.values(), q, 2 * grid);
    Ok(LqNorm {
        value,
        refined,
        error: (value - refined).abs(),
        grid,
    })
}
