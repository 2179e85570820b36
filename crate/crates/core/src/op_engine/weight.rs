use crate::error::{Error, Result};

/// Gaussian weight `e^{-x^2}` multiplied by the step function that is 1 below
/// `s1`, `omega1` on `(s1, s2)` and `omega2` above `s2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpWeightSpec {
    pub s1: f64,
    pub s2: f64,
    pub omega1: f64,
    pub omega2: f64,
}

impl JumpWeightSpec {
    /// Two-jump weight; requires `s1 < s2`. Use [`JumpWeightSpec::single_jump`]
    /// for a weight with one discontinuity.
    pub fn new(s1: f64, s2: f64, omega1: f64, omega2: f64) -> Result<Self> {
        if !(s1.is_finite() && s2.is_finite()) {
            return Err(Error::invalid("jump locations must be finite"));
        }
        if s1 >= s2 {
            return Err(Error::invalid(format!(
                "need s1 < s2 (got {s1} and {s2}); use the single-jump constructor for coincident jumps"
            )));
        }
        check_heights(omega1, omega2)?;
        Ok(JumpWeightSpec { s1, s2, omega1, omega2 })
    }

    /// Weight equal to `e^{-x^2}` below `s` and `omega e^{-x^2}` above.
    pub fn single_jump(s: f64, omega: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::invalid("jump location must be finite"));
        }
        check_heights(omega, omega)?;
        Ok(JumpWeightSpec { s1: s, s2: s, omega1: omega, omega2: omega })
    }

    /// Plain Gaussian weight.
    pub fn gaussian() -> Self {
        JumpWeightSpec { s1: 0.0, s2: 0.0, omega1: 1.0, omega2: 1.0 }
    }

    /// Same heights with both jumps moved by `dx`.
    pub fn shifted(&self, dx: f64) -> Self {
        JumpWeightSpec { s1: self.s1 + dx, s2: self.s2 + dx, ..*self }
    }

    /// Builds the spec from the midpoint `x` and half-gap `s` of the jumps.
    pub fn from_center(x: f64, s: f64, omega1: f64, omega2: f64) -> Result<Self> {
        Self::new(x - s, x + s, omega1, omega2)
    }

    pub fn is_single_jump(&self) -> bool {
        self.s1 == self.s2
    }

    /// Midpoint of the two jumps.
    pub fn center(&self) -> f64 {
        0.5 * (self.s1 + self.s2)
    }

    /// Half the distance between the jumps.
    pub fn half_gap(&self) -> f64 {
        0.5 * (self.s2 - self.s1)
    }

    /// Step factor multiplying `e^{-x^2}` at `x` (right-continuous at the jumps).
    pub fn step(&self, x: f64) -> f64 {
        if x < self.s1 {
            1.0
        } else if x < self.s2 {
            self.omega1
        } else {
            self.omega2
        }
    }

    pub fn weight(&self, x: f64) -> f64 {
        self.step(x) * (-x * x).exp()
    }

    /// Jump locations with the size of the drop in the step factor there:
    /// `(s1, 1 - omega1)` and `(s2, omega1 - omega2)`.
    pub fn jumps(&self) -> [(f64, f64); 2] {
        [(self.s1, 1.0 - self.omega1), (self.s2, self.omega1 - self.omega2)]
    }

    pub fn is_gaussian(&self) -> bool {
        self.omega1 == 1.0 && self.omega2 == 1.0
    }
}

fn check_heights(omega1: f64, omega2: f64) -> Result<()> {
    if !(omega1.is_finite() && omega2.is_finite()) || omega1 < 0.0 || omega2 < 0.0 {
        return Err(Error::invalid(format!(
            "jump heights must be finite and nonnegative (got {omega1}, {omega2})"
        )));
    }
    Ok(())
}
