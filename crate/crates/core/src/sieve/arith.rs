//! Small multiplicative-arithmetic helpers.

use num_integer::Integer;

/// Primes `p ≤ limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primality flags for `[lo, hi)` by segmented sieving (no factorizations).
pub fn prime_flags(lo: u64, hi: u64) -> Vec<bool> {
    if hi <= lo {
        return Vec::new();
    }
    let len = (hi - lo) as usize;
    let mut flags = vec![true; len];
    for n in lo..hi.min(2) {
        flags[(n - lo) as usize] = false;
    }
    let root = (hi - 1).isqrt();
    for p in primes_up_to(root) {
        let first = (p * p).max(lo.div_ceil(p) * p);
        let mut m = first;
        while m < hi {
            flags[(m - lo) as usize] = false;
            m += p;
        }
    }
    flags
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// ∏_{p ≤ w} p, saturating at `u64::MAX`.
pub fn primorial(w: u64) -> u64 {
    primes_up_to(w)
        .into_iter()
        .fold(1u64, |acc, p| acc.saturating_mul(p))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(primorial(1), 1);
        assert_eq!(primorial(7), 210);
        let flags = prime_flags(0, 20);
        let ps: Vec<u64> = (0..20).filter(|&n| flags[n as usize]).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
