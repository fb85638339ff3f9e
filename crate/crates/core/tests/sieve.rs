use proptest::prelude::*;
use threeprimes::sieve::{
    buchstab_identity_check, fundamental_error_scan, majorant_range, majorant_window, rho, rho_plus,
    short_interval_prime_density, sieve_window, Cutoff, Factorization, SieveParams,
};

fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime factor of every n ≤ limit (spf[0] = spf[1] = 0).
fn smallest_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// ρ⁺ on [1, limit] straight from its definition: enumerate every
/// (p₁ < p₂ < p₃, m) with z < p₁, p₃ < y4 and add ρ(m, p₁), strict convention.
fn rho_plus_oracle(limit: usize, z: u64, y4: u64) -> Vec<u32> {
    let spf = smallest_factors(limit);
    let rough = |m: usize, y: u64| m == 1 || u64::from(spf[m]) >= y;
    let mut out: Vec<u32> = (0..=limit).map(|n| u32::from(n >= 1 && rough(n, y4))).collect();
    let primes: Vec<u64> = (z + 1..y4).filter(|&p| is_prime_trial(p)).collect();
    for (a, &p1) in primes.iter().enumerate() {
        for (b, &p2) in primes.iter().enumerate().skip(a + 1) {
            for &p3 in &primes[b + 1..] {
                let base = (p1 * p2 * p3) as usize;
                if base > limit {
                    continue;
                }
                for m in 1..=limit / base {
                    if rough(m, p1) {
                        out[base * m] += 1;
                    }
                }
            }
        }
    }
    out
}

#[test]
fn window_prime_count_matches_trial_division() {
    let lo = 1_000_000_000;
    let w = sieve_window(lo, lo + 1000).unwrap();
    let oracle = (lo..lo + 1000).filter(|&n| is_prime_trial(n)).count();
    assert_eq!(w.primes().count(), oracle);
    assert_eq!(oracle, 49);
}

#[test]
fn window_factorizations_multiply_back() {
    let w = sieve_window(999_990, 1_000_100).unwrap();
    for (n, f) in w.iter() {
        assert_eq!(f.value(), u128::from(n));
        assert!(f.primes().iter().all(|&p| is_prime_trial(p)));
    }
}

#[test]
fn rho_plus_examples() {
    let params = SieveParams::new(100_000_000, 0.6).unwrap();
    assert_eq!((params.z, params.y4), (6, 100));
    for (n, want) in [(101_101u64, 1u32), (17_017, 3), (97, 0), (101, 1), (7, 0), (7 * 11 * 13, 1)] {
        let f = Factorization::of(n);
        assert_eq!(rho_plus(f.as_factors(), &params), want, "n = {n}");
    }
}

#[test]
fn rho_plus_matches_definition_up_to_two_hundred_thousand() {
    let params = SieveParams::new(1_000_000, 0.6).unwrap();
    assert_eq!((params.z, params.y4), (3, 31));
    let limit = 200_000;
    let oracle = rho_plus_oracle(limit, params.z, params.y4);
    let rows = majorant_range(&params, 2, limit as u64 + 1).unwrap();
    assert_eq!(rows.len(), limit - 1);
    for r in rows {
        assert_eq!(r.rho_plus, oracle[r.n as usize], "n = {}", r.n);
    }
}

#[test]
fn majorant_dominates_near_ten_to_the_eight() {
    let params = SieveParams::new(100_000_000, 0.6).unwrap();
    let rows = majorant_window(&params, 100_000_000, 100_010_000).unwrap();
    let (mut s, mut s_plus) = (0u64, 0u64);
    for r in &rows {
        assert!(u32::from(r.rho) <= r.rho_plus, "n = {}", r.n);
        assert_eq!(r.rho == 1, is_prime_trial(r.n), "n = {}", r.n);
        // the leading term of ρ⁺ is the y4-rough indicator
        let rough = (2..params.y4).all(|p| r.n % p != 0);
        assert!(r.rho_plus >= u32::from(rough), "n = {}", r.n);
        s += u64::from(r.rho);
        s_plus += u64::from(r.rho_plus);
    }
    let ratio = s_plus as f64 / s as f64;
    assert!(ratio > 1.0 && ratio < 4.0, "{ratio}");
}

#[test]
fn identities_vanish() {
    for (lo, hi, w, z) in [(2, 10_000, 3, 100), (1_000_000, 1_010_000, 10, 1000)] {
        let win = sieve_window(lo, hi).unwrap();
        for cutoff in [Cutoff::Strict, Cutoff::Inclusive] {
            assert_eq!(buchstab_identity_check(&win, w, z, cutoff).unwrap(), 0);
        }
    }
    let win = sieve_window(2, 100).unwrap();
    assert!(buchstab_identity_check(&win, 1, 10, Cutoff::Strict).is_err());
    assert!(buchstab_identity_check(&win, 20, 10, Cutoff::Strict).is_err());
}

#[test]
fn fundamental_error_is_reported() {
    let params = SieveParams::new(1_000_000, 0.7)
        .unwrap()
        .with_omega_cutoff(20)
        .unwrap();
    let win = sieve_window(1_000_000, 1_010_000).unwrap();
    // x^ε = 100 at x = 10⁶
    let r = fundamental_error_scan(&win, &params, 1.0 / 3.0).unwrap();
    assert!((r.divisor_bound - 100.0).abs() < 1e-6);
    assert_eq!(r.histogram.values().sum::<u64>(), 10_000);
    assert!(r.ratio >= 0.0 && r.ratio.is_finite());
    assert!(fundamental_error_scan(&win, &params, 0.4).is_err());
}

#[test]
fn prime_density_matches_a_plain_count() {
    let (lo, hi) = (1_000_000u64, 2_000_000u64);
    let win = sieve_window(lo, hi).unwrap();
    let spf = smallest_factors(hi as usize);
    let count = (lo..hi).filter(|&n| u64::from(spf[n as usize]) == n).count();
    let oracle = count as f64 * (lo as f64).ln() / (hi - lo) as f64;
    let d = short_interval_prime_density(&win, 1, 0).unwrap();
    assert!((d - oracle).abs() < 1e-12);
    assert!((d - 1.0).abs() < 0.1);

    let (lo, hi) = (10_000_000u64, 10_100_000u64);
    let win = sieve_window(lo, hi).unwrap();
    let hits = (lo..hi).filter(|&n| n % 3 == 1 && is_prime_trial(n)).count();
    let oracle = hits as f64 * 2.0 * (lo as f64).ln() / (hi - lo) as f64;
    let d = short_interval_prime_density(&win, 3, 1).unwrap();
    assert!((d - oracle).abs() < 1e-12);
    assert!(d > 0.8 && d < 1.2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rho_is_below_rho_plus(start in 10_000u64..1_000_000_000_000, x_exp in 6u32..12) {
        let params = SieveParams::new(10u64.pow(x_exp), 0.6).unwrap();
        let rows = majorant_range(&params, start, start + 200).unwrap();
        for r in rows {
            prop_assert!(u32::from(r.rho) <= r.rho_plus);
        }
    }

    #[test]
    fn factorization_round_trips(n in 1u64..1_000_000_000_000) {
        let f = Factorization::of(n);
        prop_assert_eq!(f.as_factors().value(), u128::from(n));
        prop_assert_eq!(rho(f.as_factors(), 2), 1);
    }
}
