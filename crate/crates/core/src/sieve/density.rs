use crate::error::{invalid, Error, Result};

use super::arith::{euler_phi, gcd};
use super::window::PrimeWindow;

/// Empirical α⁻: (Σ_{n ∈ I, n ≡ c (d)} ρ(n)) · φ(d) · log x / |I|, with
/// I the window and x its left endpoint.
pub fn short_interval_prime_density(window: &PrimeWindow, d: u64, c: u64) -> Result<f64> {
    if window.is_empty() {
        return Err(Error::Empty("window"));
    }
    if d == 0 {
        return Err(invalid("d", "modulus must be positive"));
    }
    if gcd(c % d, d) != 1 {
        return Err(Error::NotCoprime { residue: c, modulus: d });
    }
    let log_x = (window.lo() as f64).ln();
    if d as f64 > log_x {
        return Err(invalid("d", format!("{d} exceeds log x = {log_x:.3}")));
    }
    let hits = window.primes().filter(|&p| p % d == c % d).count();
    Ok(hits as f64 * euler_phi(d) as f64 * log_x / window.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::window::sieve_window;

    #[test]
    fn rejects_bad_residue() {
        let w = sieve_window(1_000_000, 1_001_000).unwrap();
        assert!(matches!(
            short_interval_prime_density(&w, 2, 2),
            Err(Error::NotCoprime { .. })
        ));
        assert!(short_interval_prime_density(&w, 20, 1).is_err());
    }
}
