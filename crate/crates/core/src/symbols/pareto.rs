//! Symbols of the walks with Pareto jumps and of their stable limits.
//!
//! Both pre-limit symbols reduce, after `u = |xi| y`, to the two integrals
//!
//! ```text
//! J(a) = int_a^inf (cos u - 1) u^{-alpha-1} du
//! K(a) = int_a^inf  sin u      u^{-alpha-1} du
//! ```
//!
//! which are split at `u = 4 pi`: the finite part is integrated on a log
//! scale and the tail uses `int_A^inf u^{-alpha-1} = A^{-alpha}/alpha` plus
//! the Wynn-accelerated oscillatory integral `int_A^inf e^{iu} u^{-alpha-1}`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::quadrature::{
    integrate_fourier_tail, integrate_from_zero, integrate_log_interval, QuadratureSpec,
};
use crate::numerics::special::gamma_fn;
use crate::sampling::law::check_skew;

const SPLIT: f64 = 4.0 * PI;

pub(crate) fn symbol_quadrature() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-12, 1e-10)
}

fn constant_quadrature() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-13, 1e-12)
}

#[inline]
fn one_minus_cos(u: f64) -> f64 {
    let s = (0.5 * u).sin();
    2.0 * s * s
}

/// `(J(a), K(a))`; `K` is only requested when `alpha < 1` or `a > 0`.
fn jk(a: f64, alpha: f64, want_k: bool, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let big = a.max(SPLIT);
    let (tail, _) = integrate_fourier_tail(|u| u.powf(-alpha - 1.0), big, 1.0, spec)?;
    let mut j = -big.powf(-alpha) / alpha + tail.re;
    let mut k = tail.im;
    if a < big {
        let cos_part = |u: f64| -one_minus_cos(u) * u.powf(-alpha - 1.0);
        let sin_part = |u: f64| u.sin() * u.powf(-alpha - 1.0);
        if a == 0.0 {
            j += integrate_from_zero(cos_part, big, spec)?.value;
            if want_k {
                k += integrate_from_zero(sin_part, big, spec)?.value;
            }
        } else {
            j += integrate_log_interval(cos_part, a, big, spec)?.value;
            if want_k {
                k += integrate_log_interval(sin_part, a, big, spec)?.value;
            }
        }
    }
    Ok((j, k))
}

fn check_alpha(alpha: f64, hi: f64, which: &str) -> Result<()> {
    if alpha > 0.0 && alpha < hi {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{which} requires alpha in (0, {hi}), got {alpha}"
        )))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {v} must be positive")))
    }
}

/// `int_gamma^inf (e^{i omega y} - 1) y^{-alpha-1} dy`.
fn one_sided(omega: f64, alpha: f64, gamma: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    if omega == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let w = omega.abs();
    let (j, k) = jk(gamma * w, alpha, true, spec)?;
    Ok(w.powf(alpha) * Complex64::new(j, omega.signum() * k))
}

/// Pre-limit one-sided symbol:
/// `-lambda alpha [p int_gamma^inf (e^{i xi y} - 1) y^{-alpha-1} dy + q (same with -xi)]`.
pub fn symbol_thm1_pre(
    xi: f64,
    alpha: f64,
    gamma: f64,
    lambda: f64,
    p: f64,
    q: f64,
) -> Result<Complex64> {
    check_alpha(alpha, 1.0, "the one-sided limit")?;
    check_positive("gamma", gamma)?;
    check_skew(p, q)?;
    if xi == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let spec = symbol_quadrature();
    let plus = one_sided(xi, alpha, gamma, &spec)?;
    // I(-xi) is the conjugate of I(xi).
    let minus = plus.conj();
    Ok(-lambda * alpha * (p * plus + q * minus))
}

/// `(-i xi)^alpha` on the branch `|xi|^alpha e^{-i pi alpha sgn(xi) / 2}`.
pub fn minus_i_xi_pow(xi: f64, alpha: f64) -> Complex64 {
    if xi == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(xi.abs().powf(alpha), -FRAC_PI_2 * alpha * xi.signum())
}

/// `lambda Gamma(1 - alpha) (p (-i xi)^alpha + q (i xi)^alpha)`.
pub fn symbol_thm1_limit(xi: f64, alpha: f64, lambda: f64, p: f64, q: f64) -> Result<Complex64> {
    check_alpha(alpha, 1.0, "the one-sided limit")?;
    check_skew(p, q)?;
    let g = gamma_fn(1.0 - alpha)?;
    Ok(lambda * g * (p * minus_i_xi_pow(xi, alpha) + q * minus_i_xi_pow(-xi, alpha)))
}

/// `C(alpha) = int_0^inf (1 - cos y) y^{-alpha-1} dy` for `alpha` in (0, 2).
pub fn constant_c1(alpha: f64) -> Result<f64> {
    check_alpha(alpha, 2.0, "the constant C")?;
    let (j, _) = jk(0.0, alpha, false, &constant_quadrature())?;
    Ok(-j)
}

/// The same constant through `(1/alpha) int_0^inf sin y y^{-alpha} dy`
/// (integration by parts), summed over half periods from `pi` on.
pub fn constant_c1_by_parts(alpha: f64) -> Result<f64> {
    check_alpha(alpha, 2.0, "the constant C")?;
    let spec = constant_quadrature();
    let core = integrate_from_zero(|y: f64| y.sin() * y.powf(-alpha), PI, &spec)?;
    let (tail, _) = integrate_fourier_tail(|y| y.powf(-alpha), PI, 1.0, &spec)?;
    Ok((core.value + tail.im) / alpha)
}

/// `alpha lambda C(alpha) |xi|^alpha`.
pub fn symbol_thm2_limit(xi: f64, alpha: f64, lambda: f64) -> Result<f64> {
    if xi == 0.0 {
        check_alpha(alpha, 2.0, "the symmetric limit")?;
        return Ok(0.0);
    }
    Ok(alpha * lambda * constant_c1(alpha)? * xi.abs().powf(alpha))
}

/// `-(alpha lambda / 2) int_{|y| > gamma} (cos(xi y) - 1) |y|^{-alpha-1} dy`.
pub fn symbol_thm2_pre(xi: f64, alpha: f64, gamma: f64, lambda: f64) -> Result<f64> {
    check_alpha(alpha, 2.0, "the symmetric limit")?;
    check_positive("gamma", gamma)?;
    if xi == 0.0 {
        return Ok(0.0);
    }
    let w = xi.abs();
    let (j, _) = jk(gamma * w, alpha, false, &symbol_quadrature())?;
    Ok(-alpha * lambda * w.powf(alpha) * j)
}

/// Closed form `Gamma(1 - alpha) cos(pi alpha / 2) / alpha`, valid on (0, 1)
/// and by continuation on (1, 2).
pub fn constant_c1_closed_form(alpha: f64) -> Result<f64> {
    Ok(gamma_fn(1.0 - alpha)? * (FRAC_PI_2 * alpha).cos() / alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_half_is_sqrt_two_pi() {
        let c = constant_c1(0.5).unwrap();
        assert!((c - (2.0 * PI).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn c1_schemes_agree_past_one() {
        let a = constant_c1(1.5).unwrap();
        let b = constant_c1_by_parts(1.5).unwrap();
        assert!(a > 0.0);
        assert!((a - b).abs() < 1e-8 * a, "{a} vs {b}");
    }

    #[test]
    fn thm1_at_zero_and_conjugate() {
        assert_eq!(
            symbol_thm1_pre(0.0, 0.5, 0.1, 1.0, 1.0, 0.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let a = symbol_thm1_pre(1.3, 0.4, 0.05, 2.0, 0.3, 0.7).unwrap();
        let b = symbol_thm1_pre(-1.3, 0.4, 0.05, 2.0, 0.3, 0.7).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn thm1_limit_branch() {
        let v = symbol_thm1_limit(1.0, 0.5, 1.0, 1.0, 0.0).unwrap();
        let s = PI.sqrt() * (0.5f64).sqrt();
        assert!((v - Complex64::new(s, -s)).norm() < 1e-13);
        let sym = symbol_thm1_limit(2.0, 0.3, 1.0, 0.5, 0.5).unwrap();
        assert!(sym.im.abs() < 1e-14);
    }

    #[test]
    fn thm2_pre_is_monotone_in_gamma() {
        let mut last = 0.0;
        for g in [1.0, 0.1, 0.01, 0.001] {
            let v = symbol_thm2_pre(1.0, 1.2, g, 1.0).unwrap();
            assert!(v >= last);
            last = v;
        }
        let lim = symbol_thm2_limit(1.0, 1.2, 1.0).unwrap();
        assert!((symbol_thm2_pre(1.0, 1.2, 1e-4, 1.0).unwrap() - lim).abs() < 1e-3);
    }
}
