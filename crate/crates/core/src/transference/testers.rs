//! Randomized instance testers for the dense-model statements.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::density::{ap_density_min, DensityFunction};
use super::sumset::{popular_sums, triple_convolution_all};
use crate::error::{invalid, Error, Result};
use crate::sieve::arith::prime_flags;

/// Retries allowed per generated object before giving up.
pub const MAX_RETRIES: usize = 500;

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Families used by the dense generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DenseFamily {
    Constant,
    Uniform,
    /// 1 on one residue class mod 3, a smaller constant elsewhere.
    Residue3,
    Bernoulli,
    Gapped,
}

const FAMILIES: [DenseFamily; 5] = [
    DenseFamily::Constant,
    DenseFamily::Uniform,
    DenseFamily::Residue3,
    DenseFamily::Bernoulli,
    DenseFamily::Gapped,
];

/// One candidate f: [N] → [0, 1] from `family`; the AP hypothesis is not
/// checked here.
pub fn sample_dense<R: Rng>(family: DenseFamily, n: usize, eps: f64, rng: &mut R) -> Vec<f64> {
    let floor = (1.0 / 3.0 + eps).min(1.0);
    match family {
        DenseFamily::Constant => vec![rng.gen_range(floor..=1.0); n],
        DenseFamily::Uniform => {
            let lo = rng.gen_range(0.0..=floor);
            (0..n).map(|_| rng.gen_range(lo..=1.0)).collect()
        }
        DenseFamily::Residue3 => {
            let r = rng.gen_range(0..3);
            let v = (floor + rng.gen_range(0.0..0.1)).min(1.0);
            (1..=n).map(|k| if k % 3 == r { 1.0 } else { v }).collect()
        }
        DenseFamily::Bernoulli => {
            let p = rng.gen_range(0.6..0.95);
            (0..n).map(|_| if rng.gen_bool(p) { 1.0 } else { 0.0 }).collect()
        }
        DenseFamily::Gapped => {
            let mut f = vec![1.0; n];
            for _ in 0..rng.gen_range(1..=6) {
                let len = rng.gen_range(1..=(n / 32).max(1));
                let start = rng.gen_range(0..n.saturating_sub(len).max(1));
                for v in f.iter_mut().skip(start).take(len) {
                    *v = 0.0;
                }
            }
            f
        }
    }
}

/// Rejection-samples f with ap_density_min(f, η) ≥ 1/3 + ε.
pub fn generate_dense<R: Rng>(
    n: usize,
    eps: f64,
    eta: f64,
    rng: &mut R,
) -> Result<(DensityFunction<f64>, DenseFamily, usize)> {
    let target = 1.0 / 3.0 + eps;
    for attempt in 0..MAX_RETRIES {
        let family = FAMILIES[rng.gen_range(0..FAMILIES.len())];
        let f = DensityFunction::new(sample_dense(family, n, eps, rng))?;
        if ap_density_min(&f, eta)?.min_mean >= target {
            return Ok((f, family, attempt));
        }
    }
    Err(Error::GeneratorExhausted {
        what: format!("density function with AP minimum ≥ {target}"),
        retries: MAX_RETRIES,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KneserDenseReport {
    pub n: usize,
    pub trials: usize,
    pub eps: f64,
    pub eta: f64,
    /// min over trials and n ∈ [N/2, N] of f₁*f₂*f₃(n)/N².
    pub min_ratio: f64,
    pub argmin_trial: usize,
    pub argmin_n: usize,
    /// 10⁻³·ε⁴η.
    pub bound: f64,
    pub margin: f64,
    pub rejected: usize,
    pub family_counts: Vec<(DenseFamily, usize)>,
}

impl KneserDenseReport {
    pub fn positive(&self) -> bool {
        self.min_ratio > 0.0
    }

    pub fn exceeds_bound(&self) -> bool {
        self.min_ratio > self.bound
    }
}

/// Constant in the asserted lower bound c·ε⁴η.
pub const KNESER_BOUND_CONSTANT: f64 = 1e-3;

/// Runs `trials` independent triples (f₁, f₂, f₃) and records the smallest
/// normalized triple convolution over n ∈ [N/2, N].
pub fn test_kneser_dense(n: usize, trials: usize, eps: f64, eta: f64, seed: u64) -> Result<KneserDenseReport> {
    if n < 2 {
        return Err(invalid("n", "need N ≥ 2"));
    }
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    if !(eps > 0.0 && eps <= 2.0 / 3.0) {
        return Err(invalid("eps", format!("{eps} must lie in (0, 2/3]")));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(invalid("eta", format!("{eta} must lie in (0, 1]")));
    }
    let outcomes: Vec<Result<(f64, usize, usize, [DenseFamily; 3])>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut fs = Vec::with_capacity(3);
            let mut fams = [DenseFamily::Constant; 3];
            let mut rejected = 0;
            for fam in &mut fams {
                let (f, family, r) = generate_dense(n, eps, eta, &mut rng)?;
                *fam = family;
                rejected += r;
                fs.push(f);
            }
            let conv = triple_convolution_all(&fs[0], &fs[1], &fs[2]);
            let n2 = (n * n) as f64;
            let (at, v) = (n.div_ceil(2)..=n)
                .map(|m| (m, conv.get(m).copied().unwrap_or(0.0) / n2))
                .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            Ok((v, at, rejected, fams))
        })
        .collect();

    let mut best = (f64::INFINITY, 0, 0);
    let mut rejected = 0;
    let mut counts = vec![0usize; FAMILIES.len()];
    for (t, o) in outcomes.into_iter().enumerate() {
        let (v, at, r, fams) = o?;
        rejected += r;
        for fam in fams {
            counts[FAMILIES.iter().position(|&x| x == fam).expect("known family")] += 1;
        }
        if v < best.0 {
            best = (v, t, at);
        }
    }
    let bound = KNESER_BOUND_CONSTANT * eps.powi(4) * eta;
    Ok(KneserDenseReport {
        n,
        trials,
        eps,
        eta,
        min_ratio: best.0,
        argmin_trial: best.1,
        argmin_n: best.2,
        bound,
        margin: best.0 - bound,
        rejected,
        family_counts: FAMILIES.iter().copied().zip(counts).collect(),
    })
}

/// Whether |A ∩ P| ≥ α|P| for every progression P ⊆ [N] with |P| ≥ ηN
/// (exhaustive for N ≤ 2000).
pub fn ap_hypothesis_holds(set: &BTreeSet<usize>, n: usize, alpha: f64, eta: f64) -> Result<bool> {
    let members: Vec<usize> = set.iter().copied().collect();
    let f = DensityFunction::<f64>::indicator(n, &members);
    Ok(ap_density_min(&f, eta)?.min_mean >= alpha)
}

fn sample_set<R: Rng>(n: usize, alpha: f64, rng: &mut R) -> BTreeSet<usize> {
    match rng.gen_range(0..4) {
        0 => {
            let p = rng.gen_range((alpha + 0.1).min(0.99)..1.0);
            (1..=n).filter(|_| rng.gen_bool(p)).collect()
        }
        1 => {
            // union of residue classes; rejected unless it is everything
            let m = rng.gen_range(2..=6);
            let keep: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.7)).collect();
            (1..=n).filter(|k| keep[k % m]).collect()
        }
        2 => {
            let holes = rng.gen_range(0..=n / 10);
            let mut s: BTreeSet<usize> = (1..=n).collect();
            for _ in 0..holes {
                s.remove(&rng.gen_range(1..=n));
            }
            s
        }
        _ => (1..=n).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingInstance {
    pub size_a: usize,
    pub size_b: usize,
    pub popular: usize,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Doubling4Report {
    pub n: usize,
    pub eta: f64,
    pub alpha: f64,
    /// min over instances of |S_η(A, B)|/N − 4α.
    pub min_margin: f64,
    pub argmin: usize,
    pub rejected: usize,
    pub instances: Vec<DoublingInstance>,
}

/// Samples (A, B) meeting the AP hypothesis with density α and measures the
/// popular-sum margin |S_η(A, B)|/N − 4α.
pub fn test_doubling4(n: usize, instances: usize, eta: f64, alpha: f64, seed: u64) -> Result<Doubling4Report> {
    if n == 0 || instances == 0 {
        return Err(invalid("n", "need N ≥ 1 and at least one instance"));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(invalid("eta", format!("{eta} must lie in (0, 1]")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid("alpha", format!("{alpha} must lie in (0, 1]")));
    }
    let outcomes: Vec<Result<(DoublingInstance, usize)>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let mut rejected = 0;
            let mut draw = |rng: &mut ChaCha8Rng| -> Result<BTreeSet<usize>> {
                for _ in 0..MAX_RETRIES {
                    let s = sample_set(n, alpha, rng);
                    if ap_hypothesis_holds(&s, n, alpha, eta)? {
                        return Ok(s);
                    }
                    rejected += 1;
                }
                Err(Error::GeneratorExhausted {
                    what: format!("set with AP density ≥ {alpha}"),
                    retries: MAX_RETRIES,
                })
            };
            let a = draw(&mut rng)?;
            let b = draw(&mut rng)?;
            let s = popular_sums(&a, &b, eta)?;
            Ok((
                DoublingInstance {
                    size_a: a.len(),
                    size_b: b.len(),
                    popular: s.len(),
                    margin: s.len() as f64 / n as f64 - 4.0 * alpha,
                },
                rejected,
            ))
        })
        .collect();
    let mut out = Vec::with_capacity(instances);
    let mut rejected = 0;
    for o in outcomes {
        let (inst, r) = o?;
        rejected += r;
        out.push(inst);
    }
    let (argmin, min_margin) = out
        .iter()
        .enumerate()
        .map(|(i, x)| (i, x.margin))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    Ok(Doubling4Report {
        n,
        eta,
        alpha,
        min_margin,
        argmin,
        rejected,
        instances: out,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BohrObstructionReport {
    pub xi: f64,
    pub interval_start: f64,
    pub interval_length: f64,
    pub primes: usize,
    /// Counts of ξp mod 1 in equal bins of [0, 1).
    pub histogram: Vec<u64>,
    /// Share of window primes with ξp mod 1 ∈ I.
    pub fraction_in_interval: f64,
    /// Length of I + I + I, that is 3|I|.
    pub sumset_length: f64,
    /// Odd N ∈ [3·lo, 3·hi] and the share with ξN mod 1 ∉ I + I + I.
    pub odd_targets: u64,
    pub fraction_outside_sumset: f64,
}

/// Distribution of ξp mod 1 over primes p ∈ [lo, hi] relative to
/// I = [start, start + length), and the share of odd targets that
/// I + I + I misses.
pub fn bohr_obstruction_demo(
    xi: f64,
    start: f64,
    length: f64,
    lo: u64,
    hi: u64,
    bins: usize,
) -> Result<BohrObstructionReport> {
    if !(length > 0.0 && length < 1.0 / 3.0) {
        return Err(invalid("interval_length", format!("{length} must lie in (0, 1/3)")));
    }
    if !xi.is_finite() || !start.is_finite() {
        return Err(invalid("xi", "phase and interval start must be finite"));
    }
    if lo > hi || bins == 0 {
        return Err(invalid("window", "need lo ≤ hi and at least one bin"));
    }
    let frac = |v: f64| v.rem_euclid(1.0);
    let flags = prime_flags(lo, hi + 1);
    let mut histogram = vec![0u64; bins];
    let (mut primes, mut inside) = (0usize, 0usize);
    for (i, _) in flags.iter().enumerate().filter(|(_, &p)| p) {
        let p = lo + i as u64;
        let t = frac(xi * p as f64);
        histogram[((t * bins as f64) as usize).min(bins - 1)] += 1;
        primes += 1;
        if frac(t - start) < length {
            inside += 1;
        }
    }
    let mut odd_targets = 0u64;
    let mut outside = 0u64;
    let first = 3 * lo + (1 - (3 * lo) % 2);
    for target in (first..=3 * hi).step_by(2) {
        odd_targets += 1;
        if frac(xi * target as f64 - 3.0 * start) >= 3.0 * length {
            outside += 1;
        }
    }
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
    Ok(BohrObstructionReport {
        xi,
        interval_start: start,
        interval_length: length,
        primes,
        histogram,
        fraction_in_interval: ratio(inside as f64, primes as f64),
        sumset_length: 3.0 * length,
        odd_targets,
        fraction_outside_sumset: ratio(outside as f64, odd_targets as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_sets_fail_the_hypothesis() {
        let s: BTreeSet<usize> = (1..=120).filter(|k| k % 4 <= 1).collect();
        assert!(!ap_hypothesis_holds(&s, 120, 0.25, 0.1).unwrap());
        let full: BTreeSet<usize> = (1..=120).collect();
        assert!(ap_hypothesis_holds(&full, 120, 1.0, 0.1).unwrap());
    }

    #[test]
    fn generated_dense_functions_meet_the_hypothesis() {
        let mut rng = trial_rng(7, 0);
        for _ in 0..20 {
            let (f, _, _) = generate_dense(64, 0.05, 0.1, &mut rng).unwrap();
            assert!(ap_density_min(&f, 0.1).unwrap().min_mean >= 1.0 / 3.0 + 0.05);
            assert!(f.values().iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn kneser_report_is_deterministic() {
        let a = test_kneser_dense(48, 6, 0.05, 0.1, 3).unwrap();
        let b = test_kneser_dense(48, 6, 0.05, 0.1, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.positive());
    }

    #[test]
    fn full_sets_double() {
        let r = test_doubling4(40, 3, 0.1, 0.5, 1).unwrap();
        assert!(r.instances.iter().all(|x| x.popular >= 40));
    }

    #[test]
    fn zero_phase_stays_inside() {
        let r = bohr_obstruction_demo(0.0, 0.0, 0.3, 100, 200, 10).unwrap();
        assert_eq!(r.fraction_in_interval, 1.0);
        assert_eq!(r.histogram[0] as usize, r.primes);
        assert_eq!(r.fraction_outside_sumset, 0.0);
        let r = bohr_obstruction_demo(0.0, 0.0, 1.0 / 3.0 - 0.01, 10, 20, 4).unwrap();
        assert!((r.sumset_length - 0.97).abs() < 1e-12);
        assert!(bohr_obstruction_demo(0.0, 0.0, 0.34, 10, 20, 4).is_err());
    }
}
