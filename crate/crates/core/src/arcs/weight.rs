use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Default taper fraction.
pub const DEFAULT_TAPER: f64 = 0.05;

/// Smooth bump supported on [start, start + length]: 0 outside, 1 on the
/// central (1 − 2·taper) part, and a C^∞ transition built from exp(−1/t)
/// on each side. A zero taper gives the indicator of the closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothWeight<T> {
    start: T,
    length: T,
    taper: T,
}

fn psi<T: Real>(v: T) -> T {
    if v <= T::zero() {
        T::zero()
    } else {
        (-v.recip()).exp()
    }
}

/// Smooth step: 0 at v ≤ 0, 1 at v ≥ 1.
fn step<T: Real>(v: T) -> T {
    let a = psi(v);
    let b = psi(T::one() - v);
    a / (a + b)
}

impl<T: Real> SmoothWeight<T> {
    pub fn new(start: T, length: T, taper: T) -> Result<Self> {
        if !(length > T::zero() && length.is_finite() && start.is_finite()) {
            return Err(invalid("length", "support must be a finite nonempty interval"));
        }
        if !(taper >= T::zero() && taper <= T::lit(0.5)) {
            return Err(invalid("taper", "must lie in [0, 1/2]"));
        }
        Ok(Self {
            start,
            length,
            taper,
        })
    }

    pub fn start(&self) -> T {
        self.start
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn end(&self) -> T {
        self.start + self.length
    }

    pub fn taper(&self) -> T {
        self.taper
    }

    pub fn eval(&self, t: T) -> T {
        let u = (t - self.start) / self.length;
        if u < T::zero() || u > T::one() {
            return T::zero();
        }
        if self.taper == T::zero() {
            return T::one();
        }
        if u < self.taper {
            step(u / self.taper)
        } else if u > T::one() - self.taper {
            step((T::one() - u) / self.taper)
        } else {
            T::one()
        }
    }

    /// Σ g(n) over the integers of the support, i.e. ĝ(0).
    pub fn integer_sum(&self) -> T {
        let lo = self.start.ceil().to_i64().expect("start fits in i64");
        let hi = self.end().floor().to_i64().expect("end fits in i64");
        (lo..=hi)
            .map(|n| self.eval(T::from_i64(n).expect("n")))
            .fold(T::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let g = SmoothWeight::new(100.0f64, 100.0, 0.05).unwrap();
        assert_eq!(g.eval(99.0), 0.0);
        assert_eq!(g.eval(201.0), 0.0);
        assert_eq!(g.eval(100.0), 0.0);
        assert_eq!(g.eval(150.0), 1.0);
        assert_eq!(g.eval(105.0), 1.0);
        assert!((g.eval(102.5) - 0.5).abs() < 1e-12);
        assert!((g.eval(102.5) - g.eval(197.5)).abs() < 1e-12);
        for k in 0..=1000 {
            let v = g.eval(100.0 + k as f64 * 0.1);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn zero_taper_is_an_indicator() {
        let g = SmoothWeight::new(10.0f64, 5.0, 0.0).unwrap();
        assert_eq!(g.integer_sum(), 6.0);
        assert!(SmoothWeight::new(0.0f64, 1.0, 0.6).is_err());
        assert!(SmoothWeight::new(0.0f64, 0.0, 0.1).is_err());
    }

    #[test]
    fn f32_weight() {
        let g = SmoothWeight::new(0.0f32, 1.0, 0.25).unwrap();
        assert!((g.eval(0.125) - 0.5).abs() < 1e-6);
        assert_eq!(g.eval(0.5), 1.0);
    }
}
