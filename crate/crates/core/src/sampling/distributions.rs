//! Scalar and vector variates used by the walks and their limits.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::numerics::special::ln_gamma;

/// Means at or below this use inversion; above it, transformed rejection.
pub const POISSON_INVERSION_LIMIT: f64 = 30.0;

/// Poisson variate with the given mean.
pub fn sample_poisson(mean: f64, rng: &mut RngStream) -> Result<u64> {
    if !(mean >= 0.0 && mean.is_finite()) {
        return Err(Error::invalid(format!(
            "Poisson mean must be finite and >= 0, got {mean}"
        )));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    if mean <= POISSON_INVERSION_LIMIT {
        Ok(poisson_inversion(mean, rng))
    } else {
        Ok(poisson_ptrs(mean, rng))
    }
}

fn poisson_inversion(mean: f64, rng: &mut RngStream) -> u64 {
    let u = rng.uniform();
    let mut k = 0u64;
    let mut p = (-mean).exp();
    let mut cdf = p;
    // The cap only matters when u lands within rounding of 1.
    while u > cdf && k < 1000 {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
    }
    k
}

// Hormann's PTRS transformed rejection.
fn poisson_ptrs(mean: f64, rng: &mut RngStream) -> u64 {
    let slam = mean.sqrt();
    let loglam = mean.ln();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let vr = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.uniform() - 0.5;
        let v = rng.uniform();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
        if us >= 0.07 && v <= vr {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -mean + k * loglam - ln_gamma(k + 1.0);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

/// Pareto jump `Y = gamma e^X` with `X ~ Exp(alpha)`, so `P{Y > y} = (gamma/y)^alpha`.
#[inline]
pub fn sample_pareto_jump(alpha: f64, gamma: f64, rng: &mut RngStream) -> f64 {
    gamma * (rng.exponential() / alpha).exp()
}

/// `+1` with probability `p`, `-1` otherwise.
#[inline]
pub fn sample_rademacher(p: f64, rng: &mut RngStream) -> f64 {
    if rng.uniform() < p {
        1.0
    } else {
        -1.0
    }
}

/// `E` with `1/E ~ Gamma(alpha, 1)`.
pub fn sample_reciprocal_gamma(alpha: f64, rng: &mut RngStream) -> Result<f64> {
    let g =
        Gamma::new(alpha, 1.0).map_err(|e| Error::invalid(format!("gamma shape {alpha}: {e}")))?;
    Ok(reciprocal_gamma_with(&g, rng))
}

#[inline]
fn reciprocal_gamma_with(g: &Gamma<f64>, rng: &mut RngStream) -> f64 {
    loop {
        let x = g.sample(rng);
        // Tiny shapes can underflow to zero; redraw rather than return infinity.
        if x > 0.0 {
            return 1.0 / x;
        }
    }
}

/// Gaussian scale mixture: variance `(gamma/2) E` with `E` reciprocal gamma.
/// The result has the multivariate Student-type density of index `alpha`.
pub struct StudentSampler {
    gamma: f64,
    dim: usize,
    shape: Gamma<f64>,
}

impl StudentSampler {
    pub fn new(alpha: f64, gamma: f64, dim: usize) -> Result<Self> {
        if !(alpha > 0.0 && gamma > 0.0) || dim == 0 {
            return Err(Error::invalid(format!(
                "Student jump needs alpha > 0, gamma > 0, d >= 1; got alpha={alpha}, gamma={gamma}, d={dim}"
            )));
        }
        let shape = Gamma::new(alpha, 1.0).map_err(|e| Error::invalid(e.to_string()))?;
        Ok(Self { gamma, dim, shape })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `scale` times one draw into `out`.
    #[inline]
    pub fn add_into(&self, out: &mut [f64], scale: f64, rng: &mut RngStream) {
        let sigma = (0.5 * self.gamma * reciprocal_gamma_with(&self.shape, rng)).sqrt() * scale;
        for o in out.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *o += sigma * z;
        }
    }
}

/// One Student-type jump in R^d.
pub fn sample_student_jump(
    alpha: f64,
    gamma: f64,
    d: usize,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    let s = StudentSampler::new(alpha, gamma, d)?;
    let mut out = vec![0.0; d];
    s.add_into(&mut out, 1.0, rng);
    Ok(out)
}
