//! Additive combinatorics on [N] = {1, …, N}.
//!
//! Fourier transforms use f̂(γ) = Σ_n f(n) e(nγ) and are sampled on M = 8N
//! equispaced points; ∞- and ℓq-norm statements refer to that grid.

mod bohr;
mod density;
pub mod fft;
mod sumset;
mod testers;

pub use bohr::{
    bohr_set, decomposition_report, dist_to_int, large_spectrum, transfer_decompose, BohrSet,
    Decomposition, DecompositionReport, MAX_FREQUENCIES,
};
pub use density::{
    ap_density_min, ap_density_min_sampled, mean_on, min_progression_len, ApMinimum,
    DensityFunction, Progression, EXHAUSTIVE_AP_LIMIT,
};
pub use sumset::{
    fourier_lq_norm, popular_sums, sum_counts, triple_convolution, triple_convolution_all,
    triple_convolution_direct, LqNorm, DIRECT_CHECK_LIMIT, GRID_FACTOR,
};
pub use testers::*;
