//! Rescaled compound Poisson walks `A(t / gamma^alpha)`.

use serde::{Deserialize, Serialize};

use super::distributions::{sample_poisson, sample_rademacher, StudentSampler};
use super::law::JumpLaw;
use super::rng::RngStream;
use crate::error::{Error, Result};

/// Default ceiling on the Poisson mean of one endpoint.
pub const DEFAULT_POISSON_CAP: f64 = 1e8;

fn default_cap() -> f64 {
    DEFAULT_POISSON_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub law: JumpLaw,
    pub lambda: f64,
    pub t: f64,
    /// Run the walk to time `t / gamma^alpha` instead of `t`.
    pub rescale: bool,
    pub n: usize,
    pub seed: u64,
    /// Add the extra `j = 0` jump, so an endpoint is a sum of `N + 1` jumps.
    #[serde(default)]
    pub include_j0: bool,
    #[serde(default = "default_cap")]
    pub poisson_cap: f64,
}

impl WalkConfig {
    pub fn new(law: JumpLaw, lambda: f64, t: f64, n: usize, seed: u64) -> Self {
        Self {
            law,
            lambda,
            t,
            rescale: true,
            n,
            seed,
            include_j0: false,
            poisson_cap: DEFAULT_POISSON_CAP,
        }
    }

    /// Poisson mean of the jump count at the walk's time horizon.
    pub fn poisson_mean(&self) -> f64 {
        if self.rescale {
            self.lambda * self.t / self.law.gamma().powf(self.law.alpha())
        } else {
            self.lambda * self.t
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.law.validate()?;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "rate lambda = {} must be positive",
                self.lambda
            )));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::invalid(format!(
                "time t = {} must be positive",
                self.t
            )));
        }
        if self.n == 0 {
            return Err(Error::invalid("sample count n must be at least 1"));
        }
        let mean = self.poisson_mean();
        if !mean.is_finite() || mean > self.poisson_cap {
            return Err(Error::Overflow {
                mean,
                cap: self.poisson_cap,
            });
        }
        Ok(())
    }
}

enum Jumps {
    Pareto {
        neg_inv_alpha: f64,
        gamma: f64,
        p: f64,
    },
    Student(StudentSampler),
}

/// A validated walk with its jump sampler prepared once.
pub struct WalkSampler {
    mean: f64,
    dim: usize,
    include_j0: bool,
    jumps: Jumps,
}

impl WalkSampler {
    pub fn new(config: &WalkConfig) -> Result<Self> {
        config.validate()?;
        let jumps = match config.law {
            JumpLaw::ParetoExp {
                alpha, gamma, p, ..
            } => Jumps::Pareto {
                neg_inv_alpha: -1.0 / alpha,
                gamma,
                p,
            },
            JumpLaw::StudentGauss { alpha, gamma, d } => {
                Jumps::Student(StudentSampler::new(alpha, gamma, d)?)
            }
        };
        Ok(Self {
            mean: config.poisson_mean(),
            dim: config.law.dim(),
            include_j0: config.include_j0,
            jumps,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Writes one endpoint into `out` (length `dim`).
    pub fn sample_into(&self, rng: &mut RngStream, out: &mut [f64]) -> Result<()> {
        if out.len() != self.dim {
            return Err(Error::ShapeMismatch {
                expected: self.dim,
                found: out.len(),
            });
        }
        out.fill(0.0);
        let count = sample_poisson(self.mean, rng)? + u64::from(self.include_j0);
        match &self.jumps {
            Jumps::Pareto {
                neg_inv_alpha,
                gamma,
                p,
            } => {
                let mut acc = 0.0;
                for _ in 0..count {
                    let sign = sample_rademacher(*p, rng);
                    acc += sign * gamma * rng.uniform().powf(*neg_inv_alpha);
                }
                out[0] = acc;
            }
            Jumps::Student(s) => {
                for _ in 0..count {
                    let sign = sample_rademacher(0.5, rng);
                    s.add_into(out, sign, rng);
                }
            }
        }
        Ok(())
    }
}

/// One walk endpoint.
pub fn sample_walk_endpoint(config: &WalkConfig, rng: &mut RngStream) -> Result<Vec<f64>> {
    let sampler = WalkSampler::new(config)?;
    let mut out = vec![0.0; sampler.dim()];
    sampler.sample_into(rng, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_positive_jump_when_no_arrivals() {
        let law = JumpLaw::pareto(0.5, 2.0, 1.0, 0.0).unwrap();
        let mut cfg = WalkConfig::new(law, 1e-12, 1.0, 1, 0);
        cfg.include_j0 = true;
        let mut r = RngStream::new(0, 0);
        for _ in 0..100 {
            assert!(sample_walk_endpoint(&cfg, &mut r).unwrap()[0] >= 2.0);
        }
    }

    #[test]
    fn overflow_cap() {
        let law = JumpLaw::pareto(1.5, 1e-6, 0.5, 0.5).unwrap();
        let cfg = WalkConfig::new(law, 1.0, 1.0, 1, 0);
        assert!(matches!(cfg.validate(), Err(Error::Overflow { .. })));
    }

    #[test]
    fn rescaled_mean() {
        let law = JumpLaw::pareto(0.5, 1e-2, 1.0, 0.0).unwrap();
        let mut cfg = WalkConfig::new(law, 2.0, 3.0, 1, 0);
        assert!((cfg.poisson_mean() - 60.0).abs() < 1e-12);
        cfg.rescale = false;
        assert_eq!(cfg.poisson_mean(), 6.0);
    }
}
