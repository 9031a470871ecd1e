use crate::error::{Error, Result};

/// Absolute/relative tolerance pair used to turn exact operator statements
/// into floating-point checks.
///
/// A defect `d` measured on an operator of norm `‖M‖` is negligible iff
/// `|d| <= atol + rtol * max(1, ‖M‖)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerancePolicy {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rtol: 1e-10,
        }
    }
}

impl TolerancePolicy {
    pub fn new(atol: f64, rtol: f64) -> Result<Self> {
        if !(atol >= 0.0 && atol.is_finite()) || !(rtol >= 0.0 && rtol.is_finite()) {
            return Err(Error::InvalidArgument("tolerances must be finite and non-negative"));
        }
        Ok(Self { atol, rtol })
    }

    /// Zero tolerance: every defect counts.
    pub const fn exact() -> Self {
        Self { atol: 0.0, rtol: 0.0 }
    }

    /// `max(1, norm)`.
    #[inline]
    pub fn scale(norm: f64) -> f64 {
        norm.max(1.0)
    }

    /// Acceptance floor for a defect measured against an operator of the given norm.
    #[inline]
    pub fn floor(&self, norm: f64) -> f64 {
        self.atol + self.rtol * Self::scale(norm)
    }

    #[inline]
    pub fn is_negligible(&self, defect: f64, norm: f64) -> bool {
        defect.abs() <= self.floor(norm)
    }
}
