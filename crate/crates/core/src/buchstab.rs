//! The Buchstab function ω(u) and the sieve-density constant α⁺.
//!
//! ω is the continuous solution of the delay equation `(u ω(u))' = ω(u − 1)`
//! for u > 2 with `ω(u) = 1/u` on [1, 2]. Integrating from u = 2 gives the
//! explicit integral form
//!
//! ```text
//! u ω(u) = 1 + ∫_1^{u-1} ω(s) ds,
//! ```
//!
//! which only looks back at least one unit, so a fixed-step trapezoidal
//! sweep is explicit. Grids are aligned with the integers (where ω loses
//! smoothness), so the trapezoidal error has an expansion in even powers of
//! the step and two rounds of Richardson extrapolation apply.
//!
//! α⁺ is `4ω(4) + ∭ ω((1−β₁−β₂−β₃)/β₁) / (β₁² β₂ β₃)` over
//! `1/10 < β₁ < β₂ < β₃ < 1/4`, integrated with nested adaptive
//! Gauss–Legendre rules split at the surfaces where the ω argument is an
//! integer.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{adaptive, AdaptiveOptions, Estimate, GaussLegendre};
use crate::scalar::Real;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// lim_{u→∞} ω(u) = e^{−γ}.
pub fn omega_limit<T: Real>() -> T {
    T::lit((-EULER_GAMMA).exp())
}

/// Required accuracy of a table on [1, 4].
const TABLE_TOL: f64 = 1e-9;

/// Tabulated ω(u) on the uniform grid {1, 1 + step, …, u_max}.
#[derive(Debug, Clone)]
pub struct BuchstabTable<T> {
    u_max: T,
    step: T,
    per_unit: usize,
    values: Vec<T>,
    solver_error: T,
    interp_error: T,
    err_bound: T,
}

impl<T: Real> BuchstabTable<T> {
    /// Solves the delay equation on [1, ⌈u_max⌉].
    ///
    /// `step` is snapped to `1/⌈1/step⌉` so that every integer is a grid
    /// point. Fails if the a posteriori error on [1, 4] exceeds 1e-9
    /// (or the floating-point floor of `T`, whichever is larger).
    pub fn build(u_max: T, step: T) -> Result<Self> {
        if !(u_max >= T::lit(4.0)) || !u_max.is_finite() {
            return Err(invalid("u_max", format!("{u_max:?} must be a finite value ≥ 4")));
        }
        if !(step > T::zero() && step <= T::lit(1e-3)) {
            return Err(invalid("step", format!("{step:?} must lie in (0, 1e-3]")));
        }
        let per_unit = (T::one() / step)
            .ceil()
            .to_usize()
            .ok_or_else(|| invalid("step", "too small"))?;
        let units = u_max.ceil().to_usize().expect("finite") - 1;

        let coarse = trapezoid_sweep::<T>(per_unit, units);
        let mid = trapezoid_sweep::<T>(2 * per_unit, units);
        let fine = trapezoid_sweep::<T>(4 * per_unit, units);

        let three = T::lit(3.0);
        let four = T::lit(4.0);
        let n = coarse.len();
        let mut values = Vec::with_capacity(n);
        let mut solver_error = T::zero();
        let mut solver_error_to_4 = T::zero();
        for k in 0..n {
            let r1 = (four * mid[2 * k] - coarse[k]) / three;
            let r2 = (four * fine[4 * k] - mid[2 * k]) / three;
            let diff = (r1 - r2).abs();
            solver_error = solver_error.max(diff);
            if k <= 3 * per_unit {
                solver_error_to_4 = solver_error_to_4.max(diff);
            }
            values.push(r2);
        }
        // Exact initial segment.
        for (k, v) in values.iter_mut().enumerate().take(per_unit + 1) {
            *v = T::one() / grid_point::<T>(k, per_unit);
        }

        let (interp_error, interp_error_to_4) = interpolation_error(&values, per_unit);
        let floor = T::lit(TABLE_TOL).max(T::epsilon() * T::lit(1e3));
        let to_4 = solver_error_to_4 + interp_error_to_4;
        if to_4 > floor {
            return Err(Error::Accuracy(format!(
                "Buchstab table error {to_4:?} on [1, 4] exceeds {floor:?}; reduce the step"
            )));
        }

        Ok(Self {
            u_max: T::from_usize(units + 1).expect("small"),
            step: T::one() / T::from_usize(per_unit).expect("small"),
            per_unit,
            values,
            solver_error,
            interp_error,
            err_bound: solver_error + interp_error,
        })
    }

    pub fn u_max(&self) -> T {
        self.u_max
    }

    pub fn step(&self) -> T {
        self.step
    }

    /// Grid samples of ω, starting at u = 1.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Iterates over `(u, ω(u))` grid pairs.
    pub fn grid(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (grid_point::<T>(k, self.per_unit), v))
    }

    /// A posteriori bound on |eval(u) − ω(u)| over [1, u_max].
    pub fn err_bound(&self) -> T {
        self.err_bound
    }

    pub fn solver_error(&self) -> T {
        self.solver_error
    }

    pub fn interpolation_error(&self) -> T {
        self.interp_error
    }

    /// Interpolated ω(u) for 1 ≤ u ≤ u_max.
    ///
    /// Uses a cubic through four grid points taken from the same unit
    /// interval [j, j+1], so no stencil straddles a point where ω loses
    /// smoothness.
    pub fn eval(&self, u: T) -> Result<T> {
        if !(u >= T::one() && u <= self.u_max) {
            return Err(Error::OutOfRange {
                what: "u",
                value: u.to_f64().unwrap_or(f64::NAN),
                lo: 1.0,
                hi: self.u_max.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.eval_unchecked(u))
    }

    fn eval_unchecked(&self, u: T) -> T {
        let m = self.per_unit;
        let last = self.values.len() - 1;
        let t = (u - T::one()) * T::from_usize(m).expect("small");
        let cell = t.floor().to_usize().unwrap_or(0).min(last - 1);
        let unit_start = (cell / m) * m;
        let start = cell.saturating_sub(1).clamp(unit_start, unit_start + m - 3);
        let x = t - T::from_usize(start).expect("small");
        let y = &self.values[start..start + 4];
        // Lagrange basis on nodes 0, 1, 2, 3.
        let one = T::one();
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let six = T::lit(6.0);
        let l0 = -(x - one) * (x - two) * (x - three) / six;
        let l1 = x * (x - two) * (x - three) / two;
        let l2 = -x * (x - one) * (x - three) / two;
        let l3 = x * (x - one) * (x - two) / six;
        y[0] * l0 + y[1] * l1 + y[2] * l2 + y[3] * l3
    }

    /// Largest tabulated value on [a, b] (grid points only).
    pub fn max_on(&self, a: T, b: T) -> T {
        self.grid()
            .filter(|&(u, _)| u >= a && u <= b)
            .map(|(_, v)| v)
            .fold(T::neg_infinity(), T::max)
    }
}

fn grid_point<T: Real>(k: usize, per_unit: usize) -> T {
    let m = T::from_usize(per_unit).expect("small");
    T::one() + T::from_usize(k).expect("small") / m
}

/// Trapezoidal sweep of `u ω(u) = 1 + ∫_1^{u-1} ω` with `m` steps per unit.
fn trapezoid_sweep<T: Real>(m: usize, units: usize) -> Vec<T> {
    let n = m * units + 1;
    let h = T::one() / T::from_usize(m).expect("small");
    let half_h = h / T::lit(2.0);
    let mut w = vec![T::zero(); n];
    let mut cum = vec![T::zero(); n];
    // compensated running sum; plain accumulation drifts visibly in f32
    let mut carry = T::zero();
    for k in 0..n {
        let u = grid_point::<T>(k, m);
        w[k] = if k <= m {
            T::one() / u
        } else {
            (T::one() + cum[k - m]) / u
        };
        if k > 0 {
            let y = half_h * (w[k - 1] + w[k]) - carry;
            let t = cum[k - 1] + y;
            carry = (t - cum[k - 1]) - y;
            cum[k] = t;
        }
    }
    w
}

/// Bound for the local cubic interpolation error from fourth differences.
///
/// Returns the bound over the whole table and over [1, 4].
fn interpolation_error<T: Real>(values: &[T], m: usize) -> (T, T) {
    // max |x(x−1)(x−2)(x−3)| / 4! over the stencil is 1/24.
    let scale = T::one() / T::lit(24.0);
    let mut all = T::zero();
    let mut to_4 = T::zero();
    let units = (values.len() - 1) / m;
    for j in 0..units {
        let base = j * m;
        for s in base..=base + m - 4 {
            let y = &values[s..s + 5];
            let d4 = y[0] - T::lit(4.0) * y[1] + T::lit(6.0) * y[2] - T::lit(4.0) * y[3] + y[4];
            let e = d4.abs() * scale;
            all = all.max(e);
            if j < 3 {
                to_4 = to_4.max(e);
            }
        }
    }
    (all, to_4)
}

/// The two summands of α⁺.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaBreakdown<T> {
    /// 4ω(4).
    pub term1: T,
    /// The triple integral.
    pub term2: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaPlusResult<T> {
    pub value: T,
    pub quadrature_error: T,
    pub breakdown: AlphaBreakdown<T>,
    /// Number of integrand evaluations whose ω argument fell below 1 by
    /// floating-point drift and was clamped.
    pub clamped: usize,
}

const BETA_LO: f64 = 0.1;
const BETA_HI: f64 = 0.25;
const CLAMP_SLACK: f64 = 1e-12;

/// ω argument `(1 − β₁ − β₂ − β₃)/β₁`.
fn omega_argument<T: Real>(b1: T, b2: T, b3: T) -> T {
    (T::one() - b1 - b2 - b3) / b1
}

/// Integer values of the ω argument at which the integrand has kinks.
const KINKS: std::ops::RangeInclusive<u32> = 2..=7;

/// Evaluates the triple integral of `kernel(u) / (β₁² β₂ β₃)`.
fn triple_integral<T, K>(kernel: K, tol: T) -> Estimate<T>
where
    T: Real,
    K: Fn(T) -> T,
{
    let rule = GaussLegendre::<T>::new(10);
    let lo = T::lit(BETA_LO);
    let hi = T::lit(BETA_HI);
    let inner_opts = AdaptiveOptions {
        tol: tol / T::lit(100.0),
        max_depth: 30,
    };
    let outer_opts = AdaptiveOptions {
        tol: tol / T::lit(4.0),
        max_depth: 30,
    };
    let kinks: Vec<T> = KINKS.map(|k| T::from_u32(k).expect("small")).collect();

    // Breakpoints of the outer variable: where a middle-level breakpoint
    // meets β₂ = β₁ or β₂ = 1/4.
    let mut outer_breaks = Vec::new();
    for &k in &kinks {
        outer_breaks.push(T::one() / (k + T::lit(3.0)));
        outer_breaks.push(T::one() / (T::lit(2.0) * (k + T::one())));
        outer_breaks.push(T::lit(3.0) / (T::lit(4.0) * (k + T::lit(2.0))));
    }

    let outer = adaptive(
        &rule,
        |b1: T| {
            // Middle breakpoints: the β₃-kink β₃ = 1 − (k+1)β₁ − β₂ hits β₃ = β₂ or β₃ = 1/4.
            let mid_breaks: Vec<T> = kinks
                .iter()
                .flat_map(|&k| {
                    let c = T::one() - (k + T::one()) * b1;
                    [c / T::lit(2.0), c - hi]
                })
                .collect();
            let middle = adaptive(
                &rule,
                |b2: T| {
                    let inner_breaks: Vec<T> = kinks
                        .iter()
                        .map(|&k| T::one() - (k + T::one()) * b1 - b2)
                        .collect();
                    let inner = adaptive(
                        &rule,
                        |b3: T| Estimate::exact(kernel(omega_argument(b1, b2, b3)) / b3),
                        b2,
                        hi,
                        &inner_breaks,
                        inner_opts,
                    );
                    Estimate {
                        value: inner.estimate.value / b2,
                        error: inner.estimate.error / b2,
                    }
                },
                b1,
                hi,
                &mid_breaks,
                inner_opts,
            );
            let w = b1 * b1;
            Estimate {
                value: middle.estimate.value / w,
                error: middle.estimate.error / w,
            }
        },
        lo,
        hi,
        &outer_breaks,
        outer_opts,
    );
    outer.estimate
}

/// Computes α⁺ from a Buchstab table to absolute accuracy `tol`.
pub fn alpha_plus<T: Real>(table: &BuchstabTable<T>, tol: T) -> Result<AlphaPlusResult<T>> {
    if table.u_max() < T::lit(8.0) {
        return Err(invalid(
            "table",
            format!("u_max = {:?} but α⁺ needs ω up to 7 (require u_max ≥ 8)", table.u_max()),
        ));
    }
    if !(tol > T::zero() && tol <= T::lit(1e-4)) {
        return Err(invalid("tol", format!("{tol:?} must lie in (0, 1e-4]")));
    }

    let clamped = std::sync::atomic::AtomicUsize::new(0);
    let invalid_arg = std::sync::atomic::AtomicBool::new(false);
    let slack = T::lit(CLAMP_SLACK);
    let omega = |u: T| -> T {
        if u < T::one() {
            if u < T::one() - slack {
                invalid_arg.store(true, std::sync::atomic::Ordering::Relaxed);
            }
            clamped.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            return T::one();
        }
        table.eval_unchecked(u.min(table.u_max()))
    };

    let term2 = triple_integral(omega, tol);
    if invalid_arg.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(Error::Accuracy(
            "ω argument fell below 1 by more than floating-point drift".into(),
        ));
    }

    let term1 = T::lit(4.0) * table.eval_unchecked(T::lit(4.0));
    // ω ≥ 1/2 on [1, ∞), so the weight integral is at most 2·term2.
    let table_contrib = table.err_bound() * (T::lit(4.0) + T::lit(2.0) * term2.value);
    if table_contrib > tol / T::lit(2.0) {
        return Err(Error::Accuracy(format!(
            "table error bound {:?} too coarse for tol {tol:?}",
            table.err_bound()
        )));
    }
    let quadrature_error = term2.error + table_contrib;
    if quadrature_error > tol {
        return Err(Error::Accuracy(format!(
            "quadrature error {quadrature_error:?} exceeds tol {tol:?}"
        )));
    }
    Ok(AlphaPlusResult {
        value: term1 + term2.value,
        quadrature_error,
        breakdown: AlphaBreakdown {
            term1,
            term2: term2.value,
        },
        clamped: clamped.into_inner(),
    })
}

/// Upper bound for the triple-integral term obtained by replacing ω with a
/// piecewise constant majorant: ω(3) where the argument is ≥ 3, the table
/// maximum on [2, 3] where it lies in [2, 3), and 1/u below 2.
pub fn term2_upper_bound<T: Real>(table: &BuchstabTable<T>, tol: T) -> Result<T> {
    if table.u_max() < T::lit(8.0) {
        return Err(invalid("table", "require u_max ≥ 8"));
    }
    let omega3 = table.eval(T::lit(3.0))?;
    let max23 = table.max_on(T::lit(2.0), T::lit(3.0));
    let bound = |u: T| {
        if u >= T::lit(3.0) {
            omega3
        } else if u >= T::lit(2.0) {
            max23
        } else {
            T::one() / u.max(T::one())
        }
    };
    let est = triple_integral(bound, tol);
    Ok(est.value + est.error + table.err_bound() * T::lit(2.0) * est.value)
}
