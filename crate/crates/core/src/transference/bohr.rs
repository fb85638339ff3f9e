use serde::Serialize;

use super::density::{ap_density_min, DensityFunction};
use super::fft::dft_magnitudes;
use super::sumset::{lq_norm_of, GRID_FACTOR};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Default cap on |T| accepted by [`bohr_set`].
pub const MAX_FREQUENCIES: usize = 1 << 16;

/// {1 ≤ b ≤ δN : ‖bγ‖ < δ/30 for every γ ∈ T}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BohrSet {
    pub frequencies: Vec<f64>,
    pub delta: f64,
    pub n: usize,
    pub elements: Vec<usize>,
}

/// Distance from x to the nearest integer.
pub fn dist_to_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

impl BohrSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// ⌊δN⌋.
    pub fn bound(&self) -> usize {
        (self.delta * self.n as f64).floor() as usize
    }

    /// Whether b satisfies the defining inequalities.
    pub fn admits(&self, b: usize) -> bool {
        b >= 1
            && b <= self.bound()
            && self
                .frequencies
                .iter()
                .all(|&g| dist_to_int(b as f64 * g) < self.delta / 30.0)
    }

    /// Re-checks every listed element against the definition.
    pub fn verify(&self) -> bool {
        self.elements.iter().all(|&b| self.admits(b))
    }

    /// Difference counts: entry k is #{(b₁, b₂) ∈ B² : b₁ − b₂ = k − span},
    /// where span = max B − min B.
    pub fn difference_counts(&self) -> (usize, Vec<u64>) {
        let (Some(&lo), Some(&hi)) = (self.elements.first(), self.elements.last()) else {
            return (0, Vec::new());
        };
        let span = hi - lo;
        let mut counts = vec![0u64; 2 * span + 1];
        for &b1 in &self.elements {
            for &b2 in &self.elements {
                counts[b1 + span - b2] += 1;
            }
        }
        (span, counts)
    }
}

/// Scans [1, ⌊δN⌋] for elements of the Bohr set. Empty output is legal.
pub fn bohr_set(frequencies: &[f64], delta: f64, n: usize) -> Result<BohrSet> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("{delta} must lie in (0, 1)")));
    }
    if frequencies.len() > MAX_FREQUENCIES {
        return Err(invalid(
            "frequencies",
            format!("{} exceeds the limit of {MAX_FREQUENCIES}", frequencies.len()),
        ));
    }
    if let Some(g) = frequencies.iter().find(|g| !g.is_finite()) {
        return Err(invalid("frequencies", format!("{g} is not finite")));
    }
    let mut set = BohrSet {
        frequencies: frequencies.iter().map(|g| g.rem_euclid(1.0)).collect(),
        delta,
        n,
        elements: Vec::new(),
    };
    set.elements = (1..=set.bound()).filter(|&b| set.admits(b)).collect();
    Ok(set)
}

/// f = g + h with g(n) = E_{b₁,b₂∈B} f(n + b₁ − b₂).
///
/// g and h live on [1 − s, N + s] with s = max B − min B, the smallest
/// interval carrying g; both are stored from `offset = 1 − s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<T> {
    pub f: DensityFunction<T>,
    pub offset: i64,
    pub g: Vec<T>,
    pub h: Vec<T>,
    pub bohr: BohrSet,
    /// Grid used for the large spectrum, M = 8N.
    pub grid: usize,
}

impl<T: Scalar> Decomposition<T> {
    fn index(&self, n: i64) -> Option<usize> {
        let i = n - self.offset;
        (i >= 0 && (i as usize) < self.g.len()).then_some(i as usize)
    }

    pub fn g_at(&self, n: i64) -> T {
        self.index(n).map_or_else(T::zero, |i| self.g[i].clone())
    }

    pub fn h_at(&self, n: i64) -> T {
        self.index(n).map_or_else(T::zero, |i| self.h[i].clone())
    }

    /// Last point of the stored support.
    pub fn end(&self) -> i64 {
        self.offset + self.g.len() as i64 - 1
    }

    /// g(n) + h(n) == f(n) at every point of the support, compared with `==`.
    pub fn reconstructs_exactly(&self) -> bool {
        (self.offset..=self.end()).all(|n| self.g_at(n) + self.h_at(n) == self.f.get(n))
    }

    pub fn g_nonnegative(&self) -> bool {
        self.g.iter().all(|v| *v >= T::zero())
    }

    /// g restricted to [N].
    pub fn g_on_domain(&self) -> DensityFunction<T> {
        let vals = (1..=self.f.len() as i64)
            .map(|n| {
                let v = self.g_at(n);
                if v < T::zero() {
                    T::zero()
                } else {
                    v
                }
            })
            .collect();
        DensityFunction::new(vals).expect("clamped to be nonnegative")
    }

    fn support_f64(&self, v: &[T]) -> Vec<f64> {
        v.iter().map(|x| x.to_f64_lossy()).collect()
    }

    /// |f̂|, |ĝ|, |ĥ| on the M-point grid (phases are irrelevant to magnitudes,
    /// so every sequence is transformed from its own first index).
    pub fn spectra(&self, m: usize) -> [Vec<f64>; 3] {
        [
            dft_magnitudes(self.f.to_f64().values(), m),
            dft_magnitudes(&self.support_f64(&self.g), m),
            dft_magnitudes(&self.support_f64(&self.h), m),
        ]
    }
}

/// Grid frequencies j/M with |f̂(j/M)| ≥ δN.
pub fn large_spectrum<T: Scalar>(f: &DensityFunction<T>, delta: f64, grid: usize) -> Vec<f64> {
    let threshold = delta * f.len() as f64;
    dft_magnitudes(f.to_f64().values(), grid)
        .into_iter()
        .enumerate()
        .filter(|&(_, v)| v >= threshold)
        .map(|(j, _)| j as f64 / grid as f64)
        .collect()
}

/// Builds the dense-model decomposition of f under the majorant ν.
///
/// Fails if f ≰ ν, if δ ∉ (0, 1), or if the Bohr set is empty.
pub fn transfer_decompose<T: Scalar>(
    f: &DensityFunction<T>,
    nu: &DensityFunction<T>,
    delta: f64,
) -> Result<Decomposition<T>> {
    if f.is_empty() {
        return Err(Error::Empty("density function"));
    }
    if f.len() != nu.len() {
        return Err(invalid("nu", format!("length {} differs from N = {}", nu.len(), f.len())));
    }
    if !f.dominated_by(nu) {
        return Err(invalid("nu", "f must be pointwise at most nu"));
    }
    let grid = GRID_FACTOR * f.len();
    let spectrum = large_spectrum(f, delta, grid);
    let bohr = bohr_set(&spectrum, delta, f.len())?;
    if bohr.is_empty() {
        return Err(Error::EmptyBohrSet {
            delta,
            frequencies: spectrum.len(),
        });
    }
    let (span, counts) = bohr.difference_counts();
    let span_i = span as i64;
    let pairs = T::from_usize(bohr.len() * bohr.len()).expect("|B|²");
    let weights: Vec<(i64, T)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (k as i64 - span_i, T::from_u64(c).expect("count")))
        .collect();
    let offset = 1 - span_i;
    let len = f.len() + 2 * span;
    let mut g = Vec::with_capacity(len);
    let mut h = Vec::with_capacity(len);
    for i in 0..len {
        let n = offset + i as i64;
        let mut acc = T::zero();
        for (t, w) in &weights {
            let v = f.get(n + t);
            if v != T::zero() {
                acc = acc + w.clone() * v;
            }
        }
        let gv = acc / pairs.clone();
        h.push(f.get(n) - gv.clone());
        g.push(gv);
    }
    Ok(Decomposition {
        f: f.clone(),
        offset,
        g,
        h,
        bohr,
        grid,
    })
}

/// Measured versions of the four decomposition properties.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub delta: f64,
    pub bohr_size: usize,
    pub large_spectrum_size: usize,
    pub exact: bool,
    pub g_nonnegative: bool,
    /// (1) max g, and max_n E ν(n + b₁ − b₂) which dominates it.
    pub max_g: f64,
    pub max_nu_average: f64,
    /// (2) max |ĥ| on the 8N grid and on the refined 16N grid.
    pub max_h_hat: f64,
    pub max_h_hat_refined: f64,
    /// Largest |ĥ(γ)| − |f̂(γ)| over the 8N grid (≤ 0 up to roundoff).
    pub multiplier_excess: f64,
    /// Roundoff allowance used for `multiplier_holds`.
    pub roundoff: f64,
    pub multiplier_holds: bool,
    /// (3) AP minima: f over |P| ≥ ηN, g over |P| ≥ (η + δ)N, and the
    /// guaranteed lower bound f_min·(1 − δ/(η + δ)).
    pub ap_eta: f64,
    pub ap_min_f: f64,
    pub ap_min_g: f64,
    pub ap_bound: f64,
    /// (4) ℓq norms of f̂, ĝ, ĥ.
    pub q_exp: f64,
    pub lq_f: f64,
    pub lq_g: f64,
    pub lq_h: f64,
}

impl DecompositionReport {
    pub fn property2_holds(&self, slack: f64) -> bool {
        self.max_h_hat <= self.delta * self.n as f64 * (1.0 + slack)
    }

    pub fn property3_holds(&self) -> bool {
        self.ap_min_g >= self.ap_bound - 1e-12
    }

    pub fn property4_holds(&self) -> bool {
        let tol = 1e-9 * self.lq_f.max(1.0);
        self.lq_g <= self.lq_f + tol && self.lq_h <= self.lq_f + tol
    }
}

/// Measures the four properties of `dec`. `nu` must be the majorant used to
/// build it.
pub fn decomposition_report<T: Scalar>(
    dec: &Decomposition<T>,
    nu: &DensityFunction<T>,
    ap_eta: f64,
    q_exp: f64,
) -> Result<DecompositionReport> {
    if !(ap_eta > 0.0 && ap_eta + dec.bohr.delta <= 1.0) {
        return Err(invalid("ap_eta", format!("{ap_eta} + delta must lie in (0, 1]")));
    }
    let n = dec.f.len();
    let [f_hat, _, h_hat] = dec.spectra(dec.grid);
    let [_, _, h_hat_refined] = dec.spectra(2 * dec.grid);
    let l1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
    let h64: Vec<f64> = dec.h.iter().map(|x| x.to_f64_lossy()).collect();
    let g64: Vec<f64> = dec.g.iter().map(|x| x.to_f64_lossy()).collect();
    let f64v: Vec<f64> = dec.f.to_f64().values().to_vec();
    let roundoff = 1e-12 * (l1(&f64v) + l1(&h64)).max(1.0);
    let multiplier_excess = f_hat
        .iter()
        .zip(&h_hat)
        .map(|(f, h)| h - f)
        .fold(f64::NEG_INFINITY, f64::max);

    let (span, counts) = dec.bohr.difference_counts();
    let pairs = (dec.bohr.len() * dec.bohr.len()) as f64;
    let nu64 = nu.to_f64();
    let max_nu_average = (dec.offset..=dec.end())
        .map(|m| {
            counts
                .iter()
                .enumerate()
                .map(|(k, &c)| c as f64 * nu64.get(m + k as i64 - span as i64))
                .sum::<f64>()
                / pairs
        })
        .fold(0.0, f64::max);

    let delta = dec.bohr.delta;
    let ap_min_f = ap_density_min(&dec.f.to_f64(), ap_eta)?.min_mean;
    let ap_min_g = ap_density_min(&dec.g_on_domain().to_f64(), ap_eta + delta)?.min_mean;
    let ap_bound = ap_min_f * (1.0 - delta / (ap_eta + delta));

    Ok(DecompositionReport {
        n,
        delta,
        bohr_size: dec.bohr.len(),
        large_spectrum_size: dec.bohr.frequencies.len(),
        exact: dec.reconstructs_exactly(),
        g_nonnegative: dec.g_nonnegative(),
        max_g: g64.iter().copied().fold(0.0, f64::max),
        max_nu_average,
        max_h_hat: h_hat.iter().copied().fold(0.0, f64::max),
        max_h_hat_refined: h_hat_refined.iter().copied().fold(0.0, f64::max),
        multiplier_excess,
        roundoff,
        multiplier_holds: multiplier_excess <= roundoff,
        ap_eta,
        ap_min_f,
        ap_min_g,
        ap_bound,
        q_exp,
        lq_f: lq_norm_of(&f64v, q_exp, dec.grid),
        lq_g: lq_norm_of(&g64, q_exp, dec.grid),
        lq_h: lq_norm_of(&h64, q_exp, dec.grid),
    })
}
