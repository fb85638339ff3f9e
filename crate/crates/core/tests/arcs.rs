use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::Float;
use proptest::prelude::*;
use threeprimes::arcs::{
    best_approximation, build_w_tricked, classify, eta_grid, vin3_condition1_eta, ArcConfig, ArcSetup, Kernel,
};
use threeprimes::sieve::SieveParams;
use threeprimes::Error;

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

fn smallest_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

/// ρ⁺(n) from the definition, strict convention, by trial division.
fn rho_plus_direct(n: u64, z: u64, y4: u64) -> u32 {
    let rough = |m: u64, y: u64| m == 1 || smallest_factor(m) >= y;
    let mut total = u32::from(rough(n, y4));
    let ps: Vec<u64> = (z + 1..y4).filter(|&p| is_prime_trial(p) && n % p == 0).collect();
    for (a, &p1) in ps.iter().enumerate() {
        for (b, &p2) in ps.iter().enumerate().skip(a + 1) {
            for &p3 in &ps[b + 1..] {
                if rough(n / (p1 * p2 * p3), p1) {
                    total += 1;
                }
            }
        }
    }
    total
}

/// e(nγ) with nγ mod 1 reduced exactly from the binary expansion of γ.
fn e_exact(n: u64, gamma: f64) -> Complex64 {
    let (mant, exp, _) = gamma.integer_decode();
    let frac = if gamma == 0.0 || exp >= 0 {
        0.0
    } else {
        let shift = (-exp) as u32;
        assert!(shift < 128);
        let modulus = 1u128 << shift;
        let r = (u128::from(n) * u128::from(mant)) % modulus;
        (r as f64) / (modulus as f64)
    };
    Complex64::from_polar(1.0, std::f64::consts::TAU * frac)
}

fn setup(taper: f64) -> ArcSetup {
    let params = SieveParams::new(1_000_000, 0.65).unwrap();
    let config = ArcConfig::new(1_000_000, 0.65).unwrap();
    ArcSetup::with_taper(params, config, taper).unwrap()
}

fn shared() -> &'static ArcSetup {
    static S: OnceLock<ArcSetup> = OnceLock::new();
    S.get_or_init(|| setup(0.05))
}

fn dist(x: f64) -> f64 {
    let f = x - x.floor();
    f.min(1.0 - f)
}

#[test]
fn classify_small_examples() {
    let c = ArcConfig::new(1_000_000, 0.6).unwrap();
    let p = classify(0.0, &c).unwrap();
    assert_eq!((p.a, p.q, p.lambda, p.is_major), (0, 1, 0.0, true));
    let p = classify(1.0 / 3.0, &c).unwrap();
    assert_eq!((p.a, p.q), (1, 3));
    assert!(p.lambda.abs() < 1e-15 && p.is_major);
    // Pell denominators of √2 − 1: 1, 2, 5, 12, 29, 70, 169, 408
    let p = classify(2f64.sqrt() - 1.0, &c).unwrap();
    assert!(p.q as f64 <= c.big_q);
    assert!([1, 2, 5, 12, 29, 70, 169].contains(&p.q));
    assert!(p.lambda.abs() < 1.0 / (p.q as f64 * c.big_q));
}

#[test]
fn exp_sum_matches_direct_summation() {
    let s = shared();
    let (z, y4) = (s.params.z, s.params.y4);
    let lo = s.weight.start().ceil() as u64;
    let hi = s.weight.end().floor() as u64;
    for (kernel, gamma) in [(Kernel::RhoPlus, 0.2), (Kernel::Rho, 0.2 + 1e-8), (Kernel::RhoPlus, 0.2 + 1e-8)] {
        let mut direct = Complex64::new(0.0, 0.0);
        for n in lo..=hi {
            let k = match kernel {
                Kernel::Rho => u32::from(is_prime_trial(n)),
                Kernel::RhoPlus => rho_plus_direct(n, z, y4),
            };
            if k > 0 {
                direct += e_exact(n, gamma) * (f64::from(k) * s.weight.eval(n as f64));
            }
        }
        let lib = s.exp_sum(kernel, 1, 0, gamma).unwrap();
        assert!((lib - direct).norm() < 1e-8 * direct.norm().max(1.0), "{kernel:?} {gamma}: {lib} vs {direct}");
    }
}

#[test]
fn plain_window_sums_count_primes() {
    let s = setup(0.0);
    let lo = 1_000_000u64;
    let hi = lo + s.config.short_length().floor() as u64;
    let primes: Vec<u64> = (lo..=hi).filter(|&n| is_prime_trial(n)).collect();
    let at_zero = s.exp_sum(Kernel::Rho, 1, 0, 0.0).unwrap();
    assert!((at_zero.re - primes.len() as f64).abs() < 1e-9 && at_zero.im.abs() < 1e-9);
    let at_half = s.exp_sum(Kernel::Rho, 1, 0, 0.5).unwrap();
    let odd = primes.iter().filter(|&&p| p % 2 == 1).count() as f64;
    assert!((at_half.re + odd).abs() < 1e-6 && at_half.im.abs() < 1e-6);
    assert!((s.weighted_sum(Kernel::RhoPlus) - s.exp_sum(Kernel::RhoPlus, 1, 0, 0.0).unwrap().re).abs() < 1e-9);
}

#[test]
fn main_term_structure() {
    let s = shared();
    let d = s.long_density(Kernel::RhoPlus).unwrap();
    let arc = classify(0.0, &s.config).unwrap();
    let main = s.saz_main_term(Kernel::RhoPlus, 1, 0, &arc).unwrap();
    let total: f64 = s.weight.integer_sum();
    assert!((main.re - d * total).abs() < 1e-9 * total && main.im.abs() < 1e-9);

    // [2, 2]/φ(2) = 2 and e(n/2) = −1 on odd n
    let arc = classify(0.5, &s.config).unwrap();
    let main = s.saz_main_term(Kernel::RhoPlus, 2, 1, &arc).unwrap();
    let lo = s.weight.start().ceil() as u64;
    let hi = s.weight.end().floor() as u64;
    let odd: f64 = (lo..=hi).filter(|n| n % 2 == 1).map(|n| s.weight.eval(n as f64)).sum();
    assert!((main.re + 2.0 * d * odd).abs() < 1e-6 * odd);

    assert!(matches!(s.exp_sum(Kernel::Rho, 4, 2, 0.1), Err(Error::NotCoprime { .. })));
    let far = classify(0.123_456_789, &s.config).unwrap();
    let mut bad = far;
    bad.q = 100_000;
    assert!(s.saz_main_term(Kernel::Rho, 1, 0, &bad).is_err());
}

#[test]
fn long_window_surrogate() {
    let s = shared();
    assert!((s.h1 - 24_309.0).abs() < 1.0, "{}", s.h1);
    assert!(!s.long_truncated);
    let d = s.long_density(Kernel::RhoPlus).unwrap();
    assert!(d > 0.0 && d < 1.0);
}

#[test]
fn prime_and_deviation_reports() {
    let s = shared();
    for g in [0.0, 0.5, 1.0 / 3.0, 0.4] {
        let c = s.saz_compare(Kernel::RhoPlus, 1, 0, g).unwrap();
        assert!(c.is_major);
        assert!(c.deviation < 0.25, "γ = {g}: {}", c.deviation);
    }
    let minor = s.saz_compare(Kernel::RhoPlus, 1, 0, 37.0 / 311.0).unwrap();
    assert!(!minor.is_major);
    assert_eq!((minor.rhs_re, minor.rhs_im), (0.0, 0.0));
}

#[test]
fn w_tricked_pair() {
    let params = SieveParams::new(100_000_000, 0.6).unwrap().with_w(3).unwrap();
    assert_eq!(params.big_w, 6);
    for b in [1, 5] {
        let t = build_w_tricked(&params, b, None, 2.827).unwrap();
        assert_eq!(t.n, (4.0 * params.short_length() / 18.0).floor() as usize);
        assert!(t.f.dominated_by(&t.nu));
        let mut primes = 0;
        for n in 1..=t.n {
            let v = t.f.get(n as i64);
            let p = is_prime_trial(t.lift(n));
            assert_eq!(v > 0.0, p, "n = {n}");
            primes += usize::from(p);
        }
        let mean = t.f.sum() / t.n as f64;
        assert!((mean - t.scale * primes as f64 / t.n as f64).abs() < 1e-12);
        // about α⁻/α⁺ with α⁻ close to 1
        assert!(mean > 0.25 && mean < 0.5, "{mean}");
    }
    assert!(matches!(build_w_tricked(&params, 2, None, 2.827), Err(Error::NotCoprime { .. })));
    assert!(build_w_tricked(&params, 7, None, 2.827).is_err());
}

#[test]
fn condition_one_eta() {
    let params = SieveParams::new(1_000_000, 0.65).unwrap().with_w(3).unwrap();
    let config = ArcConfig::new(1_000_000, 0.65).unwrap();
    assert!(matches!(
        vin3_condition1_eta(&params, &config, 4, &[0.0], 2.827),
        Err(Error::NotCoprime { .. })
    ));
    let grid = eta_grid(&config, 5, 20, 7).unwrap();
    assert!(grid.contains(&0.0));
    let r = vin3_condition1_eta(&params, &config, 1, &grid, 2.827).unwrap();
    assert_eq!(r.rows.len(), grid.len());
    assert!(r.rows.iter().all(|row| row.deviation <= r.eta));

    // γ = 0 by hand
    let x = 1_000_000f64;
    let len = x.powf(0.65);
    let lo = (x - len / 3.0).ceil() as u64;
    let hi = (x + len).floor() as u64;
    let (mut sum, mut count) = (0.0, 0.0);
    for n in (lo..=hi).filter(|n| n % 6 == 1) {
        sum += f64::from(rho_plus_direct(n, params.z, params.y4));
        count += 1.0;
    }
    let pred = 2.827 / x.ln() * 3.0;
    let want = (sum - pred * count).abs() / (len / (2.0 * x.ln()));
    let got = r.rows.iter().find(|row| row.gamma == 0.0).unwrap().deviation;
    assert!((got - want).abs() < 1e-9 * want.max(1.0), "{got} vs {want}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classify_minimizes_distance(gamma in 0.0f64..1.0) {
        let c = ArcConfig::new(1_000_000, 0.6).unwrap();
        let p = classify(gamma, &c).unwrap();
        let best = (1..=c.big_q.floor() as u64)
            .map(|q| dist(q as f64 * gamma))
            .fold(f64::INFINITY, f64::min);
        prop_assert!(dist(p.q as f64 * gamma) <= best + 1e-12);
        prop_assert!(p.q as f64 <= c.big_q);
        let (a, q) = best_approximation(gamma, c.big_q);
        prop_assert_eq!((a, q), (p.a, p.q));
    }

    #[test]
    fn conjugate_symmetry(gamma in 0.001f64..0.999) {
        let s = shared();
        let lhs = s.exp_sum(Kernel::RhoPlus, 1, 0, gamma).unwrap();
        let rhs = s.exp_sum(Kernel::RhoPlus, 1, 0, 1.0 - gamma).unwrap();
        prop_assert!((lhs - rhs.conj()).norm() < 1e-7 * lhs.norm().max(1.0));
    }

    #[test]
    fn periodic_in_the_numerator(q in 1u64..60, a in 0u64..60) {
        let s = shared();
        let a = a % q;
        let base = s.saz_compare(Kernel::Rho, 1, 0, a as f64 / q as f64).unwrap();
        let shifted = s.saz_compare(Kernel::Rho, 1, 0, (a + q) as f64 / q as f64).unwrap();
        prop_assert_eq!((base.a, base.q), (shifted.a, shifted.q));
        prop_assert!((base.deviation - shifted.deviation).abs() < 1e-6);
    }
}
