//! Smooth short-interval exponential sums of ρ and ρ⁺, major/minor arcs and
//! main-term comparisons, and the W-tricked functions fed to the
//! transference machinery.
//!
//! Phases are e(t) = exp(2πit) and sums carry e(nγ).

mod classify;
mod sums;
mod weight;
mod wtrick;

pub use classify::{best_approximation, classify, ArcConfig, ArcPoint, Q_THRESHOLD_MAX, Q_THRESHOLD_MIN};
pub use sums::{e_n, phase, ArcSetup, Comparison, Kernel, LONG_WINDOW_CAP};
pub use weight::{SmoothWeight, DEFAULT_TAPER};
pub use wtrick::{build_w_tricked, eta_grid, vin3_condition1_eta, EtaReport, EtaRow, WTricked};
