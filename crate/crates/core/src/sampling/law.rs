//! Jump laws of the compound Poisson walks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbols::student::student_density;

/// Tolerance on `p + q = 1` for values typed in decimal.
pub const SKEW_TOLERANCE: f64 = 1e-12;

pub fn check_skew(p: f64, q: f64) -> Result<()> {
    if !(p >= 0.0 && q >= 0.0) {
        return Err(Error::invalid(format!(
            "skew weights must be nonnegative, got p={p}, q={q}"
        )));
    }
    if ((p + q) - 1.0).abs() > SKEW_TOLERANCE {
        return Err(Error::invalid(format!(
            "p + q = {} but the skew weights must sum to 1",
            p + q
        )));
    }
    Ok(())
}

/// Distribution of a single jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JumpLaw {
    /// `eps * gamma e^X` with `X ~ Exp(alpha)` and `P{eps = +1} = p`.
    ParetoExp {
        alpha: f64,
        gamma: f64,
        p: f64,
        q: f64,
    },
    /// Gaussian in R^d with variance `(gamma/2) E_alpha`, `E_alpha` reciprocal gamma.
    StudentGauss { alpha: f64, gamma: f64, d: usize },
}

impl JumpLaw {
    pub fn pareto(alpha: f64, gamma: f64, p: f64, q: f64) -> Result<Self> {
        let law = JumpLaw::ParetoExp { alpha, gamma, p, q };
        law.validate()?;
        Ok(law)
    }

    pub fn student(alpha: f64, gamma: f64, d: usize) -> Result<Self> {
        let law = JumpLaw::StudentGauss { alpha, gamma, d };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        let (alpha, gamma) = (self.alpha(), self.gamma());
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!(
                "tail index alpha = {alpha} must be positive"
            )));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::invalid(format!(
                "scale gamma = {gamma} must be positive"
            )));
        }
        match *self {
            JumpLaw::ParetoExp { p, q, .. } => check_skew(p, q),
            JumpLaw::StudentGauss { d, .. } => {
                if d == 0 {
                    Err(Error::invalid("dimension d must be at least 1"))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            JumpLaw::ParetoExp { alpha, .. } | JumpLaw::StudentGauss { alpha, .. } => alpha,
        }
    }

    pub fn gamma(&self) -> f64 {
        match *self {
            JumpLaw::ParetoExp { gamma, .. } | JumpLaw::StudentGauss { gamma, .. } => gamma,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            JumpLaw::ParetoExp { .. } => 1,
            JumpLaw::StudentGauss { d, .. } => d,
        }
    }

    /// Whether the law is invariant under `y -> -y`.
    pub fn is_symmetric(&self) -> bool {
        match *self {
            JumpLaw::ParetoExp { p, q, .. } => p == q,
            JumpLaw::StudentGauss { .. } => true,
        }
    }

    /// Lebesgue density at `y`.
    pub fn density(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.dim() {
            return Err(Error::ShapeMismatch {
                expected: self.dim(),
                found: y.len(),
            });
        }
        match *self {
            JumpLaw::ParetoExp { alpha, gamma, p, q } => {
                let x = y[0];
                let a = x.abs();
                if a < gamma {
                    return Ok(0.0);
                }
                let w = if x > 0.0 { p } else { q };
                Ok(w * alpha * gamma.powf(alpha) * a.powf(-alpha - 1.0))
            }
            JumpLaw::StudentGauss { alpha, gamma, d } => student_density(y, alpha, gamma, d),
        }
    }

    /// `E[Y]` (componentwise) when it exists.
    pub fn mean(&self) -> Option<Vec<f64>> {
        match *self {
            JumpLaw::ParetoExp { alpha, gamma, p, q } => {
                (alpha > 1.0).then(|| vec![(p - q) * alpha * gamma / (alpha - 1.0)])
            }
            JumpLaw::StudentGauss { alpha, d, .. } => (2.0 * alpha > 1.0).then(|| vec![0.0; d]),
        }
    }

    /// `E[|Y|^2]` when finite.
    pub fn second_moment(&self) -> Option<f64> {
        match *self {
            JumpLaw::ParetoExp { alpha, gamma, .. } => {
                (alpha > 2.0).then(|| alpha * gamma * gamma / (alpha - 2.0))
            }
            // E|Y|^2 = d (gamma/2) E[E_alpha] = d gamma / (2 (alpha - 1)).
            JumpLaw::StudentGauss { alpha, gamma, d } => {
                (alpha > 1.0).then(|| d as f64 * gamma / (2.0 * (alpha - 1.0)))
            }
        }
    }
}
