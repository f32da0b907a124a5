use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by all matrix operations.
///
/// Comparisons are relative to the scale of the matrices involved, with an
/// absolute floor of `eq_tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Entrywise / Frobenius comparison threshold.
    pub eq_tol: f64,
    /// Two eigenvalues are merged when `|λ_i − λ_j| ≤ cluster_tol · ρ(m)`.
    pub cluster_tol: f64,
    /// Largest eigenbasis condition number accepted before spectral
    /// subspaces are treated as belonging to one eigenvalue.
    pub cond_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eq_tol: 1e-9,
            cluster_tol: 1e-8,
            cond_max: 1e6,
        }
    }
}

impl Tolerances {
    pub fn new(eq_tol: f64, cluster_tol: f64, cond_max: f64) -> Result<Self> {
        let t = Tolerances {
            eq_tol,
            cluster_tol,
            cond_max,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(self.eq_tol) {
            return Err(Error::InvalidTolerance("eq_tol"));
        }
        if !ok(self.cluster_tol) {
            return Err(Error::InvalidTolerance("cluster_tol"));
        }
        if !ok(self.cond_max) {
            return Err(Error::InvalidTolerance("cond_max"));
        }
        Ok(())
    }

    pub fn with_eq_tol(mut self, eq_tol: f64) -> Self {
        self.eq_tol = eq_tol;
        self
    }

    pub fn with_cluster_tol(mut self, cluster_tol: f64) -> Self {
        self.cluster_tol = cluster_tol;
        self
    }

    /// `eq_tol` scaled by `max(1, scale)`.
    pub(crate) fn scaled(&self, scale: f64) -> f64 {
        self.eq_tol * scale.max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive() {
        assert!(Tolerances::new(0.0, 1e-8, 1e6).is_err());
        assert!(Tolerances::new(1e-9, -1.0, 1e6).is_err());
        assert!(Tolerances::new(1e-9, 1e-8, f64::NAN).is_err());
        assert!(Tolerances::default().validate().is_ok());
    }
}
