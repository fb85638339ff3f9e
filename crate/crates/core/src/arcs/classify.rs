use serde::Serialize;

use crate::error::{invalid, Result};

/// Desk-scale arc parameters.
///
/// The major-arc threshold is (log x)^A clamped to [20, 1000] and the
/// Dirichlet bound is Q = max(x^θ / q_threshold, q_threshold).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcConfig {
    pub x: u64,
    pub theta: f64,
    /// The log-power exponent A.
    pub a_exp: f64,
    pub q_threshold: u64,
    pub big_q: f64,
    /// Largest progression modulus d accepted by the main-term evaluation.
    pub max_modulus: u64,
}

pub const Q_THRESHOLD_MIN: f64 = 20.0;
pub const Q_THRESHOLD_MAX: f64 = 1000.0;

impl ArcConfig {
    pub fn new(x: u64, theta: f64) -> Result<Self> {
        Self::with_a(x, theta, 1.0)
    }

    pub fn with_a(x: u64, theta: f64, a_exp: f64) -> Result<Self> {
        if x < 100 {
            return Err(invalid("x", format!("{x} is below 100")));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(invalid("theta", format!("{theta} must lie in (0, 1)")));
        }
        if !(a_exp > 0.0 && a_exp.is_finite()) {
            return Err(invalid("A", format!("{a_exp} must be positive")));
        }
        let lx = (x as f64).ln();
        let q_threshold = lx.powf(a_exp).clamp(Q_THRESHOLD_MIN, Q_THRESHOLD_MAX).floor() as u64;
        let big_q = ((x as f64).powf(theta) / q_threshold as f64).max(q_threshold as f64);
        Ok(Self {
            x,
            theta,
            a_exp,
            q_threshold,
            big_q,
            max_modulus: (lx * lx).ceil() as u64,
        })
    }

    /// Overrides the major-arc threshold (Q is left unchanged).
    pub fn with_q_threshold(mut self, q: u64) -> Result<Self> {
        if q == 0 || q as f64 > self.big_q {
            return Err(invalid("q_threshold", format!("{q} must lie in [1, Q = {}]", self.big_q)));
        }
        self.q_threshold = q;
        Ok(self)
    }

    /// x^θ.
    pub fn short_length(&self) -> f64 {
        (self.x as f64).powf(self.theta)
    }
}

/// γ = a/q + λ with (a, q) = 1 and |λ| < 1/(qQ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcPoint {
    pub gamma: f64,
    pub a: u64,
    pub q: u64,
    pub lambda: f64,
    pub is_major: bool,
}

/// Exact value of a float in [0, 1) as num / 2^shift, or None when the
/// denominator would not fit in 126 bits.
fn dyadic(gamma: f64) -> Option<(u128, u128)> {
    if gamma == 0.0 {
        return Some((0, 1));
    }
    let bits = gamma.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let tz = mant.trailing_zeros() as i64;
    let (mant, e) = (mant >> tz, e + tz);
    let shift = -e;
    (0..=126).contains(&shift).then(|| (mant as u128, 1u128 << shift))
}

/// Best rational approximation a/q of γ with q ≤ `big_q`, taken as the last
/// continued-fraction convergent with denominator at most `big_q`; it
/// minimizes ‖qγ‖ over q ≤ `big_q`.
pub fn best_approximation(gamma: f64, big_q: f64) -> (u64, u64) {
    let Some((mut num, mut den)) = dyadic(gamma) else {
        return (0, 1);
    };
    let (mut h1, mut h2) = (1u128, 0u128);
    let (mut k1, mut k2) = (0u128, 1u128);
    let mut best = (0u64, 1u64);
    while den != 0 {
        let a = num / den;
        let h = a * h1 + h2;
        let k = a * k1 + k2;
        if k as f64 > big_q {
            break;
        }
        best = (h as u64, k as u64);
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
        (num, den) = (den, num - a * den);
    }
    best
}

/// Classifies γ (reduced mod 1) against the arcs of `config`.
pub fn classify(gamma: f64, config: &ArcConfig) -> Result<ArcPoint> {
    if !gamma.is_finite() {
        return Err(invalid("gamma", "must be finite"));
    }
    let g = gamma.rem_euclid(1.0);
    let (a, q) = best_approximation(g, config.big_q);
    Ok(ArcPoint {
        gamma: g,
        a,
        q,
        lambda: g - a as f64 / q as f64,
        is_major: q <= config.q_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_recovered() {
        let cfg = ArcConfig::new(1_000_000, 0.6).unwrap();
        let p = classify(0.0, &cfg).unwrap();
        assert_eq!((p.a, p.q, p.lambda, p.is_major), (0, 1, 0.0, true));
        let p = classify(1.0 / 3.0, &cfg).unwrap();
        assert_eq!((p.a, p.q), (1, 3));
        assert!(p.lambda.abs() < 1e-15 && p.is_major);
        let p = classify(0.4, &cfg).unwrap();
        assert_eq!((p.a, p.q), (2, 5));
    }

    #[test]
    fn sqrt2_convergents() {
        let cfg = ArcConfig::new(1_000_000, 0.6).unwrap();
        // Q = 10^3.6 / 20 ≈ 199
        assert!((cfg.big_q - 10f64.powf(3.6) / 20.0).abs() < 1e-9);
        let p = classify(2f64.sqrt() - 1.0, &cfg).unwrap();
        assert_eq!((p.a, p.q), (70, 169));
        assert!(p.lambda.abs() < 1.0 / (p.q as f64 * cfg.big_q));
        assert!(!p.is_major);
    }

    #[test]
    fn desk_thresholds() {
        let cfg = ArcConfig::new(1_000_000, 0.65).unwrap();
        assert_eq!(cfg.q_threshold, 20);
        assert!(ArcConfig::new(99, 0.5).is_err());
        assert!(ArcConfig::new(1000, 1.0).is_err());
        assert_eq!(cfg.with_q_threshold(5).unwrap().q_threshold, 5);
    }

    #[test]
    fn tiny_gamma_is_near_zero() {
        let cfg = ArcConfig::new(1_000_000, 0.6).unwrap();
        let p = classify(1e-300, &cfg).unwrap();
        assert_eq!((p.a, p.q), (0, 1));
    }
}
