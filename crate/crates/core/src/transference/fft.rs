//! FFT helpers: linear convolutions and DFT magnitudes on uniform grids.

use num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

use crate::scalar::Real;

/// Floating scalar usable with `rustfft`.
pub trait FftReal: Real + FftNum {}

impl<T: Real + FftNum> FftReal for T {}

fn forward<T: FftReal>(planner: &mut FftPlanner<T>, data: &[T], size: usize) -> Vec<Complex<T>> {
    let mut buf: Vec<Complex<T>> = data
        .iter()
        .map(|&v| Complex::new(v, T::zero()))
        .chain(std::iter::repeat(Complex::new(T::zero(), T::zero())))
        .take(size)
        .collect();
    planner.plan_fft_forward(size).process(&mut buf);
    buf
}

/// Linear convolution of several sequences (index 0 of each input is 0).
///
/// The result has length Σ len − (k − 1).
pub fn convolve_many<T: FftReal>(inputs: &[&[T]]) -> Vec<T> {
    if inputs.is_empty() || inputs.iter().any(|s| s.is_empty()) {
        return Vec::new();
    }
    let out_len = inputs.iter().map(|s| s.len()).sum::<usize>() + 1 - inputs.len();
    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::new();
    let mut acc = forward(&mut planner, inputs[0], size);
    for s in &inputs[1..] {
        let spec = forward(&mut planner, s, size);
        for (a, b) in acc.iter_mut().zip(spec) {
            *a = *a * b;
        }
    }
    planner.plan_fft_inverse(size).process(&mut acc);
    let scale = T::one() / T::from_usize(size).expect("fft size");
    acc.into_iter().take(out_len).map(|c| c.re * scale).collect()
}

/// Linear convolution of two sequences.
pub fn convolve<T: FftReal>(a: &[T], b: &[T]) -> Vec<T> {
    convolve_many(&[a, b])
}

/// |Σ_k v_k e(−k j / m)| for j = 0..m. Requires m ≥ v.len().
pub fn dft_magnitudes<T: FftReal>(values: &[T], m: usize) -> Vec<T> {
    assert!(m >= values.len(), "grid of {m} points aliases {} values", values.len());
    let mut planner = FftPlanner::new();
    forward(&mut planner, values, m)
        .into_iter()
        .map(|c| c.norm())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_convolution() {
        let c = convolve(&[1.0f64, 2.0], &[1.0, 1.0, 1.0]);
        let want = [1.0, 3.0, 3.0, 2.0];
        assert_eq!(c.len(), 4);
        for (x, y) in c.iter().zip(want) {
            assert!((x - y).abs() < 1e-12);
        }
        let c32 = convolve(&[1.0f32, 2.0], &[3.0f32]);
        assert!((c32[1] - 6.0).abs() < 1e-5);
    }

    #[test]
    fn magnitudes_of_delta_are_flat() {
        let m = dft_magnitudes(&[0.0f64, 1.0], 16);
        assert!(m.iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }
}
