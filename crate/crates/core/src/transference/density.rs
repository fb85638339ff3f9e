use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// A nonnegative function on [N] = {1, …, N}.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityFunction<T> {
    values: Vec<T>,
}

impl<T: Scalar> DensityFunction<T> {
    /// `values[i]` is f(i + 1). Rejects negative entries.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| *v < T::zero()) {
            return Err(invalid("values", format!("f({}) = {:?} is negative", i + 1, values[i])));
        }
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![T::zero(); n],
        }
    }

    pub fn constant(n: usize, c: T) -> Result<Self> {
        Self::new(vec![c; n])
    }

    /// Indicator of `set ∩ [N]`.
    pub fn indicator(n: usize, set: &[usize]) -> Self {
        let mut f = Self::zeros(n);
        for &s in set {
            if (1..=n).contains(&s) {
                f.values[s - 1] = T::one();
            }
        }
        f
    }

    /// N.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// f(n), zero outside [N].
    pub fn get(&self, n: i64) -> T {
        if n >= 1 && (n as usize) <= self.values.len() {
            self.values[n as usize - 1].clone()
        } else {
            T::zero()
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn sum(&self) -> T {
        self.values.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// Pointwise `self ≤ other` on [N].
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.len() == other.len() && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn to_f64(&self) -> DensityFunction<f64> {
        DensityFunction {
            values: self.values.iter().map(|v| v.to_f64_lossy()).collect(),
        }
    }

    /// Values laid out for FFT use: index k holds f(k), index 0 is zero.
    pub fn to_fft_input(&self) -> Vec<f64> {
        std::iter::once(0.0)
            .chain(self.values.iter().map(|v| v.to_f64_lossy()))
            .collect()
    }
}

/// An arithmetic progression {start + k·step : 0 ≤ k < len} inside [N].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub start: usize,
    pub step: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApMinimum<T> {
    /// Minimal mean of f over admissible progressions.
    pub min_mean: T,
    pub progression: Progression,
    /// False when the minimum comes from random sampling.
    pub exhaustive: bool,
}

/// Largest N handled by exhaustive enumeration.
pub const EXHAUSTIVE_AP_LIMIT: usize = 2000;

/// Minimal length ⌈ηN⌉ (at least 1) of an admissible progression.
pub fn min_progression_len(n: usize, eta: f64) -> usize {
    ((eta * n as f64) - 1e-9).ceil().max(1.0) as usize
}

/// min over progressions P ⊆ [N] with |P| ≥ ηN of the mean of f on P.
///
/// Exhaustive for N ≤ 2000; beyond that 10⁶ progressions are sampled with a
/// fixed seed and the result is flagged as non-exhaustive.
pub fn ap_density_min<T: Scalar>(f: &DensityFunction<T>, eta: f64) -> Result<ApMinimum<T>> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(invalid("eta", format!("{eta} must lie in (0, 1]")));
    }
    if f.is_empty() {
        return Err(invalid("f", "empty domain"));
    }
    if f.len() <= EXHAUSTIVE_AP_LIMIT {
        Ok(exhaustive(f, eta))
    } else {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_a9);
        Ok(ap_density_min_sampled(f, eta, 1_000_000, &mut rng))
    }
}

fn exhaustive<T: Scalar>(f: &DensityFunction<T>, eta: f64) -> ApMinimum<T> {
    let n = f.len();
    let min_len = min_progression_len(n, eta);
    let mut best: Option<(T, Progression)> = None;
    let max_step = if min_len <= 1 { n.max(1) } else { (n - 1) / (min_len - 1) };
    let lens: Vec<T> = (0..=n).map(|l| T::from_usize(l).expect("len")).collect();
    let mut prefix: Vec<T> = Vec::with_capacity(n + 1);
    for step in 1..=max_step.max(1) {
        for residue in 1..=step.min(n) {
            // chain residue, residue + step, …
            prefix.clear();
            prefix.push(T::zero());
            let mut k = residue;
            while k <= n {
                let last = prefix.last().expect("nonempty").clone();
                prefix.push(last + f.values[k - 1].clone());
                k += step;
            }
            let chain = prefix.len() - 1;
            if chain < min_len {
                continue;
            }
            for i in 0..=chain - min_len {
                for j in i + min_len..=chain {
                    let len = j - i;
                    let mean = (prefix[j].clone() - prefix[i].clone()) / lens[len].clone();
                    if best.as_ref().is_none_or(|(b, _)| mean < *b) {
                        best = Some((
                            mean,
                            Progression {
                                start: residue + i * step,
                                step,
                                len,
                            },
                        ));
                    }
                }
            }
        }
    }
    let (min_mean, progression) = best.expect("[N] itself is admissible");
    ApMinimum {
        min_mean,
        progression,
        exhaustive: true,
    }
}

/// Sampled variant of [`ap_density_min`] for large N.
///
/// Draws a step and a residue, builds prefix sums along that chain and then
/// scores a batch of random sub-progressions of admissible length, until
/// `samples` progressions have been scored.
pub fn ap_density_min_sampled<T: Scalar, R: Rng>(
    f: &DensityFunction<T>,
    eta: f64,
    samples: usize,
    rng: &mut R,
) -> ApMinimum<T> {
    const BATCH: usize = 256;
    let n = f.len();
    let min_len = min_progression_len(n, eta);
    let max_step = if min_len <= 1 { n } else { (n - 1) / (min_len - 1) };
    let full = Progression {
        start: 1,
        step: 1,
        len: n,
    };
    let mut best = (mean_on(f, full), full);
    let mut prefix: Vec<T> = Vec::with_capacity(n + 1);
    let mut done = 0;
    while done < samples {
        let step = rng.gen_range(1..=max_step.max(1));
        let residue = rng.gen_range(1..=step.min(n));
        prefix.clear();
        prefix.push(T::zero());
        let mut k = residue;
        while k <= n {
            let last = prefix.last().expect("nonempty").clone();
            prefix.push(last + f.values[k - 1].clone());
            k += step;
        }
        let chain = prefix.len() - 1;
        if chain < min_len {
            done += 1;
            continue;
        }
        for _ in 0..BATCH.min(samples - done) {
            let len = rng.gen_range(min_len..=chain);
            let i = rng.gen_range(0..=chain - len);
            let mean = (prefix[i + len].clone() - prefix[i].clone()) / T::from_usize(len).expect("len");
            if mean < best.0 {
                best = (
                    mean,
                    Progression {
                        start: residue + i * step,
                        step,
                        len,
                    },
                );
            }
            done += 1;
        }
    }
    ApMinimum {
        min_mean: best.0,
        progression: best.1,
        exhaustive: false,
    }
}

/// Mean of f over a progression.
pub fn mean_on<T: Scalar>(f: &DensityFunction<T>, p: Progression) -> T {
    let mut s = T::zero();
    for k in 0..p.len {
        s = s + f.get((p.start + k * p.step) as i64);
    }
    s / T::from_usize(p.len).expect("len")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn constant_function_has_constant_minimum() {
        for c in [0.0f64, 0.25, 1.0, 3.5] {
            let f = DensityFunction::constant(40, c).unwrap();
            for eta in [0.01, 0.3, 1.0] {
                assert!((ap_density_min(&f, eta).unwrap().min_mean - c).abs() < 1e-12);
            }
        }
        let f = DensityFunction::constant(30, Rational::new(2, 7)).unwrap();
        assert_eq!(ap_density_min(&f, 0.2).unwrap().min_mean, Rational::new(2, 7));
    }

    #[test]
    fn odd_indicator_has_zero_on_evens() {
        let odds: Vec<usize> = (1..=100).step_by(2).collect();
        let f = DensityFunction::<f64>::indicator(100, &odds);
        let m = ap_density_min(&f, 0.05).unwrap();
        assert_eq!(m.min_mean, 0.0);
        assert_eq!(m.progression.start % 2, 0);
        assert_eq!(m.progression.step % 2, 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(DensityFunction::new(vec![1.0, -0.5]).is_err());
        let f = DensityFunction::constant(10, 1.0).unwrap();
        assert!(ap_density_min(&f, 0.0).is_err());
        assert!(ap_density_min(&f, 1.5).is_err());
    }

    #[test]
    fn whole_interval_only_when_eta_is_one() {
        let f = DensityFunction::new((1..=10).map(|v| v as f64).collect()).unwrap();
        let m = ap_density_min(&f, 1.0).unwrap();
        assert_eq!(m.progression, Progression { start: 1, step: 1, len: 10 });
        assert!((m.min_mean - 5.5).abs() < 1e-12);
    }

    #[test]
    fn sampling_finds_an_obvious_minimum() {
        use rand::SeedableRng;
        // zero on every third point: the step-3 chain through 3 has mean 0
        let vals: Vec<f64> = (1..=3000).map(|k| if k % 3 == 0 { 0.0 } else { 1.0 }).collect();
        let f = DensityFunction::new(vals).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let m = ap_density_min_sampled(&f, 0.01, 100_000, &mut rng);
        assert!(!m.exhaustive);
        assert_eq!(m.min_mean, 0.0);
        assert_eq!(m.progression.step % 3, 0);
    }
}
