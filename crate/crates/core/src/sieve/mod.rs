//! Segmented sieving, the rough-number indicator ρ(n, y), the sieve
//! majorant ρ⁺ and exact identity checks over factored windows.

pub mod arith;
mod density;
mod params;
mod rough;
mod window;

pub use density::short_interval_prime_density;
pub use params::SieveParams;
pub use rough::{
    buchstab_identity_check, fundamental_error, fundamental_error_scan, majorant_rows,
    majorant_range, majorant_window, rho, rho_plus, Cutoff, FundamentalErrorReport, MajorantRow,
};
pub use window::{
    sieve_window, sieve_window_with_budget, split_range, Factorization, Factors, PrimeWindow,
    DEFAULT_BUDGET, MAX_HI,
};
