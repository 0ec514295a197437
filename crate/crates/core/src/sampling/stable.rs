//! Exact samplers for the stable limits.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::numerics::special::gamma_fn;

fn check_open_unit(name: &str, v: f64, hi: f64) -> Result<()> {
    if v > 0.0 && v < hi {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} = {v} must lie in (0, {hi})"
        )))
    }
}

/// Positive stable variable with `E e^{-mu S} = e^{-mu^alpha}` (Kanter's
/// representation).
#[inline]
fn positive_stable_unit(alpha: f64, rng: &mut RngStream) -> f64 {
    let u = PI * rng.uniform();
    let e = rng.exponential();
    let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
    let b = ((1.0 - alpha) * u).sin() / e;
    a * b.powf((1.0 - alpha) / alpha)
}

/// Stable subordinator at time `t`: Laplace transform `exp(-t mu^alpha)`.
pub fn sample_stable_subordinator(alpha: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
    check_open_unit("alpha", alpha, 1.0)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time t = {t} must be positive")));
    }
    Ok(t.powf(1.0 / alpha) * positive_stable_unit(alpha, rng))
}

/// Subordinator value at a time that may be zero, where it vanishes.
fn subordinator_at(alpha: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
    if t == 0.0 {
        Ok(0.0)
    } else {
        sample_stable_subordinator(alpha, t, rng)
    }
}

/// Time map `t -> lambda Gamma(1 - alpha) t` of the one-sided limit.
pub fn thm1_time(alpha: f64, lambda: f64, t: f64) -> Result<f64> {
    Ok(lambda * gamma_fn(1.0 - alpha)? * t)
}

/// `h1(p t*) - h2(q t*)` for independent stable subordinators.
pub fn sample_limit_thm1(
    alpha: f64,
    p: f64,
    q: f64,
    lambda: f64,
    t: f64,
    rng: &mut RngStream,
) -> Result<f64> {
    check_open_unit("alpha", alpha, 1.0)?;
    crate::sampling::law::check_skew(p, q)?;
    let ts = thm1_time(alpha, lambda, t)?;
    let up = subordinator_at(alpha, p * ts, rng)?;
    let down = subordinator_at(alpha, q * ts, rng)?;
    Ok(up - down)
}

/// Symmetric stable variable with characteristic function `exp(-t_star |xi|^beta)`
/// (Chambers-Mallows-Stuck).
pub fn sample_symmetric_stable(beta: f64, t_star: f64, rng: &mut RngStream) -> Result<f64> {
    check_open_unit("beta", beta, 2.0)?;
    if !(t_star > 0.0 && t_star.is_finite()) {
        return Err(Error::invalid(format!(
            "time t* = {t_star} must be positive"
        )));
    }
    let v = PI * (rng.uniform() - 0.5);
    let w = rng.exponential();
    let x = if beta == 1.0 {
        v.tan()
    } else {
        let a = (beta * v).sin() / v.cos().powf(1.0 / beta);
        let b = ((1.0 - beta) * v).cos() / w;
        a * b.powf((1.0 - beta) / beta)
    };
    Ok(t_star.powf(1.0 / beta) * x)
}

/// Rotation-invariant stable vector with characteristic function
/// `exp(-t_star |xi|^beta)`: `sqrt(2 S) Z` with `S` a stable subordinator of
/// index `beta/2` at time `t_star` and `Z` standard normal in R^d.
pub fn sample_isotropic_stable(
    beta: f64,
    t_star: f64,
    d: usize,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; d];
    isotropic_into(beta, t_star, &mut out, rng)?;
    Ok(out)
}

pub(crate) fn isotropic_into(
    beta: f64,
    t_star: f64,
    out: &mut [f64],
    rng: &mut RngStream,
) -> Result<()> {
    check_open_unit("beta", beta, 2.0)?;
    if out.is_empty() {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let s = sample_stable_subordinator(0.5 * beta, t_star, rng)?;
    let scale = (2.0 * s).sqrt();
    for o in out.iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *o = scale * z;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::erfc;

    #[test]
    fn subordinator_positive() {
        let mut r = RngStream::new(1, 0);
        for _ in 0..10_000 {
            assert!(sample_stable_subordinator(0.3, 1.0, &mut r).unwrap() > 0.0);
        }
    }

    #[test]
    fn half_stable_matches_levy_cdf_at_a_point() {
        let mut r = RngStream::new(2, 0);
        let n = 100_000;
        let x = 1.5;
        let hits = (0..n)
            .filter(|_| sample_stable_subordinator(0.5, 1.0, &mut r).unwrap() <= x)
            .count();
        let expected = erfc(1.0 / (2.0 * x.sqrt()));
        assert!((hits as f64 / n as f64 - expected).abs() < 0.005);
    }

    #[test]
    fn one_sided_limits() {
        let mut r = RngStream::new(3, 0);
        for _ in 0..1000 {
            assert!(sample_limit_thm1(0.5, 1.0, 0.0, 1.0, 1.0, &mut r).unwrap() > 0.0);
            assert!(sample_limit_thm1(0.5, 0.0, 1.0, 1.0, 1.0, &mut r).unwrap() < 0.0);
        }
    }

    #[test]
    fn cauchy_mass_in_unit_interval() {
        let mut r = RngStream::new(4, 0);
        let n = 100_000;
        let inside = (0..n)
            .filter(|_| sample_symmetric_stable(1.0, 1.0, &mut r).unwrap().abs() <= 1.0)
            .count();
        assert!((inside as f64 / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn parameter_ranges() {
        let mut r = RngStream::new(0, 0);
        assert!(sample_stable_subordinator(1.0, 1.0, &mut r).is_err());
        assert!(sample_symmetric_stable(2.0, 1.0, &mut r).is_err());
        assert!(sample_isotropic_stable(1.0, 1.0, 0, &mut r).is_err());
    }
}
