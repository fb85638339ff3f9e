//! Windowed factorization of every integer in `[lo, hi)`.

use crate::error::{invalid, Error, Result};

use super::arith::primes_up_to;

/// Largest window factored in one piece.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Largest supported upper bound.
pub const MAX_HI: u64 = (1 << 63) - 1;

/// Borrowed prime factorization: distinct primes in increasing order with
/// their exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factors<'a> {
    primes: &'a [u64],
    exps: &'a [u8],
}

impl<'a> Factors<'a> {
    pub fn new(primes: &'a [u64], exps: &'a [u8]) -> Self {
        assert_eq!(primes.len(), exps.len());
        Self { primes, exps }
    }

    pub fn primes(&self) -> &'a [u64] {
        self.primes
    }

    pub fn exps(&self) -> &'a [u8] {
        self.exps
    }

    /// `(prime, exponent)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + 'a {
        self.primes
            .iter()
            .zip(self.exps)
            .map(|(&p, &e)| (p, u32::from(e)))
    }

    /// Number of distinct prime factors.
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    /// True for n = 1.
    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn is_prime(&self) -> bool {
        self.primes.len() == 1 && self.exps[0] == 1
    }

    pub fn smallest_prime(&self) -> Option<u64> {
        self.primes.first().copied()
    }

    /// Product of the recorded prime powers (saturating).
    pub fn value(&self) -> u128 {
        self.iter()
            .fold(1u128, |acc, (p, e)| acc.saturating_mul(u128::from(p).saturating_pow(e)))
    }

    pub fn to_owned(&self) -> Factorization {
        Factorization {
            primes: self.primes.to_vec(),
            exps: self.exps.to_vec(),
        }
    }
}

/// Owned prime factorization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Factorization {
    primes: Vec<u64>,
    exps: Vec<u8>,
}

impl Factorization {
    /// From `(prime, exponent)` pairs; pairs are sorted and merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u32)>) -> Self {
        let mut v: Vec<(u64, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable();
        let mut out = Self::default();
        for (p, e) in v {
            if out.primes.last() == Some(&p) {
                *out.exps.last_mut().expect("nonempty") += e as u8;
            } else {
                out.primes.push(p);
                out.exps.push(e as u8);
            }
        }
        out
    }

    /// Factorization of `n ≥ 1` by trial division.
    pub fn of(mut n: u64) -> Self {
        assert!(n >= 1, "0 has no factorization");
        let mut pairs = Vec::new();
        let mut p = 2u64;
        while p.saturating_mul(p) <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                pairs.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if n > 1 {
            pairs.push((n, 1));
        }
        Self::from_pairs(pairs)
    }

    pub fn as_factors(&self) -> Factors<'_> {
        Factors::new(&self.primes, &self.exps)
    }
}

/// Primality and full factorization of every integer in `[lo, hi)`.
///
/// Built by sieving with every prime up to √(hi−1), dividing each hit out
/// completely, and recording the leftover cofactor (necessarily prime).
#[derive(Debug, Clone)]
pub struct PrimeWindow {
    lo: u64,
    hi: u64,
    is_prime: Vec<bool>,
    offsets: Vec<u32>,
    primes: Vec<u64>,
    exps: Vec<u8>,
}

impl PrimeWindow {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.lo && n < self.hi
    }

    pub fn is_prime(&self, n: u64) -> bool {
        assert!(self.contains(n), "{n} outside window [{}, {})", self.lo, self.hi);
        self.is_prime[(n - self.lo) as usize]
    }

    pub fn factors(&self, n: u64) -> Factors<'_> {
        assert!(self.contains(n), "{n} outside window [{}, {})", self.lo, self.hi);
        self.factors_at((n - self.lo) as usize)
    }

    fn factors_at(&self, i: usize) -> Factors<'_> {
        let a = self.offsets[i] as usize;
        let b = self.offsets[i + 1] as usize;
        Factors::new(&self.primes[a..b], &self.exps[a..b])
    }

    /// `(n, factors)` for every n in the window, in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Factors<'_>)> + '_ {
        (0..self.len()).map(move |i| (self.lo + i as u64, self.factors_at(i)))
    }

    /// Primes of the window in increasing order.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.is_prime
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| self.lo + i as u64)
    }
}

/// Factors `[lo, hi)` with the default budget of 2²⁴ integers.
pub fn sieve_window(lo: u64, hi: u64) -> Result<PrimeWindow> {
    sieve_window_with_budget(lo, hi, DEFAULT_BUDGET)
}

pub fn sieve_window_with_budget(lo: u64, hi: u64, budget: u64) -> Result<PrimeWindow> {
    if lo < 2 {
        return Err(invalid("lo", format!("{lo} must be ≥ 2")));
    }
    if hi <= lo {
        return Err(invalid("hi", format!("{hi} must exceed lo = {lo}")));
    }
    if hi > MAX_HI {
        return Err(invalid("hi", format!("{hi} exceeds 2^63 − 1")));
    }
    let len = hi - lo;
    if len > budget {
        return Err(Error::WindowTooLarge { len, budget });
    }
    let len = len as usize;
    let base = primes_up_to((hi - 1).isqrt());

    // Pass 1: count distinct prime factors and find the leftover cofactors.
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut counts = vec![0u32; len + 1];
    for &p in &base {
        let mut i = (lo.div_ceil(p) * p - lo) as usize;
        while i < len {
            counts[i] += 1;
            while rem[i] % p == 0 {
                rem[i] /= p;
            }
            i += p as usize;
        }
    }
    for (c, &r) in counts.iter_mut().zip(&rem) {
        if r > 1 {
            *c += 1;
        }
    }
    let mut offsets = Vec::with_capacity(len + 1);
    let mut acc = 0u32;
    for &c in &counts[..len] {
        offsets.push(acc);
        acc += c;
    }
    offsets.push(acc);

    // Pass 2: fill in primes (ascending, cofactor last) and exponents.
    let total = acc as usize;
    let mut primes = vec![0u64; total];
    let mut exps = vec![0u8; total];
    let mut cursor: Vec<u32> = offsets[..len].to_vec();
    for &p in &base {
        let mut i = (lo.div_ceil(p) * p - lo) as usize;
        while i < len {
            let mut n = lo + i as u64;
            let mut e = 0u8;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            let slot = cursor[i] as usize;
            primes[slot] = p;
            exps[slot] = e;
            cursor[i] += 1;
            i += p as usize;
        }
    }
    for (i, &r) in rem.iter().enumerate() {
        if r > 1 {
            let slot = cursor[i] as usize;
            primes[slot] = r;
            exps[slot] = 1;
        }
    }
    let is_prime = (0..len)
        .map(|i| {
            let a = offsets[i] as usize;
            offsets[i + 1] as usize - a == 1 && exps[a] == 1
        })
        .collect();

    Ok(PrimeWindow {
        lo,
        hi,
        is_prime,
        offsets,
        primes,
        exps,
    })
}

/// Splits `[lo, hi)` into consecutive windows of at most `budget` integers.
pub fn split_range(lo: u64, hi: u64, budget: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        let b = hi.min(a.saturating_add(budget));
        out.push((a, b));
        a = b;
    }
    out
}
