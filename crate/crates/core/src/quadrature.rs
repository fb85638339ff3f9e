//! Gauss–Legendre rules and a bisecting adaptive integrator.
//!
//! The integrator accepts integrands that themselves return an error
//! estimate, so nested (iterated) integrals propagate the inner errors into
//! the outer estimate instead of silently dropping them.

use crate::scalar::Real;

/// A value together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

impl<T: Real> Estimate<T> {
    pub fn exact(value: T) -> Self {
        Self {
            value,
            error: T::zero(),
        }
    }
}

/// Fixed n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds the rule by Newton iteration on the Legendre three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess for the i-th root counted from the right.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = T::lit(-x);
            nodes[n - 1 - i] = T::lit(x);
            weights[i] = T::lit(w);
            weights[n - 1 - i] = T::lit(w);
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Applies the rule on [a, b] to an integrand carrying its own error.
    pub fn apply<F>(&self, f: &mut F, a: T, b: T) -> Estimate<T>
    where
        F: FnMut(T) -> Estimate<T>,
    {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        let mut value = T::zero();
        let mut error = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let e = f(mid + half * x);
            value = value + w * e.value;
            error = error + w * e.error.abs();
        }
        Estimate {
            value: value * half,
            error: error * half.abs(),
        }
    }

    /// Plain fixed-rule integral of a scalar function.
    pub fn integrate<F>(&self, mut f: F, a: T, b: T) -> T
    where
        F: FnMut(T) -> T,
    {
        self.apply(&mut |x| Estimate::exact(f(x)), a, b).value
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Options for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions<T> {
    /// Absolute tolerance on the whole interval, distributed by length.
    pub tol: T,
    pub max_depth: u32,
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveResult<T> {
    pub estimate: Estimate<T>,
    /// Number of accepted panels.
    pub panels: usize,
    /// False if some panel hit `max_depth` before meeting its tolerance.
    pub converged: bool,
}

/// Adaptive bisection over [a, b], with the interval pre-split at
/// `breakpoints` (points outside (a, b) are ignored).
///
/// Each panel compares the rule on the whole panel with the sum over its two
/// halves; the halves are accepted once the difference is within the
/// panel's share of `tol`. The reported error is the sum of those
/// differences plus the integrated inner errors.
pub fn adaptive<T, F>(
    rule: &GaussLegendre<T>,
    mut f: F,
    a: T,
    b: T,
    breakpoints: &[T],
    opts: AdaptiveOptions<T>,
) -> AdaptiveResult<T>
where
    T: Real,
    F: FnMut(T) -> Estimate<T>,
{
    let mut cuts: Vec<T> = breakpoints
        .iter()
        .copied()
        .filter(|&c| c > a && c < b)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("NaN breakpoint"));
    cuts.dedup();

    let total = (b - a).abs();
    let mut out = AdaptiveResult {
        estimate: Estimate::exact(T::zero()),
        panels: 0,
        converged: true,
    };
    if total == T::zero() {
        return out;
    }

    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    for seg in edges.windows(2) {
        let whole = rule.apply(&mut f, seg[0], seg[1]);
        let mut stack = vec![(seg[0], seg[1], whole, 0u32)];
        while let Some((lo, hi, whole, depth)) = stack.pop() {
            let mid = (lo + hi) / T::lit(2.0);
            let left = rule.apply(&mut f, lo, mid);
            let right = rule.apply(&mut f, mid, hi);
            let halves = left.value + right.value;
            let diff = (whole.value - halves).abs();
            let share = opts.tol * (hi - lo).abs() / total;
            if diff <= share || depth >= opts.max_depth {
                if diff > share {
                    out.converged = false;
                }
                out.estimate.value = out.estimate.value + halves;
                out.estimate.error = out.estimate.error + diff + left.error + right.error;
                out.panels += 1;
            } else {
                stack.push((mid, hi, right, depth + 1));
                stack.push((lo, mid, left, depth + 1));
            }
        }
    }
    out
}
