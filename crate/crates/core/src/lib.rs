//! Computable pieces of the three-primes problem with almost equal summands.
//!
//! * [`buchstab`]: the Buchstab function and the majorant density constant α⁺.
//! * [`sieve`]: windowed factorization, rough-number indicators, the sieve
//!   majorant ρ⁺ and exact Buchstab-identity checks.
//! * [`arcs`]: smooth short-interval exponential sums of ρ and ρ⁺, major/minor
//!   arc classification and main-term comparisons.
//! * [`transference`]: density functions on [N], popular sums, triple
//!   convolutions, Bohr sets and the dense-model decomposition.
//! * [`ternary`]: counting n = p₁ + p₂ + p₃ with every pᵢ near n/3.
//!
//! Floating-point code is generic over [`Real`] (`f32`/`f64`); the aliases
//! below fix the common `f64` instantiations.

pub mod arcs;
pub mod buchstab;
pub mod error;
pub mod quadrature;
pub mod scalar;
pub mod sieve;
pub mod ternary;
pub mod transference;

/// Crate version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Exact rational scalar used where identities must hold bit-for-bit.
pub type Rational = num_rational::Ratio<i128>;

pub type BuchstabTable64 = buchstab::BuchstabTable<f64>;
pub type AlphaPlusResult64 = buchstab::AlphaPlusResult<f64>;
pub type SmoothWeight64 = arcs::SmoothWeight<f64>;
pub type DensityFunction64 = transference::DensityFunction<f64>;
pub type ExactDensityFunction = transference::DensityFunction<Rational>;
pub type Decomposition64 = transference::Decomposition<f64>;
pub type ExactDecomposition = transference::Decomposition<Rational>;
