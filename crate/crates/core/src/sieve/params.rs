use num_integer::Roots;
use serde::Serialize;

use crate::error::{invalid, Result};

use super::arith::primorial;
use super::rough::Cutoff;

/// Scale, exponent and cutoffs governing ρ⁺.
///
/// `z` and `y4` default to ⌊x^{1/10}⌋ and ⌊x^{1/4}⌋ but are plain integers so
/// that small instances can pin them. `omega_cutoff` plays the role of
/// exp((log x)^{9/10}); at desk scale that value is close to x itself, so it
/// is exposed as a free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SieveParams {
    pub x: u64,
    pub theta: f64,
    pub z: u64,
    pub y4: u64,
    pub omega_cutoff: u64,
    pub w: u64,
    #[serde(rename = "W")]
    pub big_w: u64,
    pub cutoff: Cutoff,
}

impl SieveParams {
    /// Default cutoffs for scale `x` and short-interval exponent `theta`.
    pub fn new(x: u64, theta: f64) -> Result<Self> {
        if x < 16 {
            return Err(invalid("x", format!("{x} is too small (need x ≥ 16)")));
        }
        let lx = (x as f64).ln();
        let omega = lx.powf(0.9).exp().floor().clamp(2.0, x as f64) as u64;
        let w = (0.1 * lx.ln()).floor().max(0.0) as u64;
        let p = Self {
            x,
            theta,
            z: x.nth_root(10).max(2),
            y4: x.nth_root(4),
            omega_cutoff: omega,
            w,
            big_w: primorial(w),
            cutoff: Cutoff::Strict,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_cutoffs(mut self, z: u64, y4: u64) -> Result<Self> {
        self.z = z;
        self.y4 = y4;
        self.validate()?;
        Ok(self)
    }

    /// Sets w and W = ∏_{p ≤ w} p.
    pub fn with_w(mut self, w: u64) -> Result<Self> {
        self.w = w;
        self.big_w = primorial(w);
        self.validate()?;
        Ok(self)
    }

    pub fn with_omega_cutoff(mut self, omega: u64) -> Result<Self> {
        self.omega_cutoff = omega;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cutoff_convention(mut self, cutoff: Cutoff) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(invalid("theta", format!("{} must lie in (0, 1)", self.theta)));
        }
        if !(2 <= self.z && self.z < self.y4 && self.y4 < self.x) {
            return Err(invalid(
                "z/y4",
                format!("need 2 ≤ z < y4 < x, got z = {}, y4 = {}, x = {}", self.z, self.y4, self.x),
            ));
        }
        if self.big_w == u64::MAX || self.big_w != primorial(self.w) {
            return Err(invalid("W", format!("W must be the primorial of w = {}", self.w)));
        }
        Ok(())
    }

    /// x^θ as a real number.
    pub fn short_length(&self) -> f64 {
        (self.x as f64).powf(self.theta)
    }

    pub fn log_x(&self) -> f64 {
        (self.x as f64).ln()
    }
}
