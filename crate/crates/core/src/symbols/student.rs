//! The Student-type jump law in R^d, its symbol and the isotropic constants.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numerics::quadrature::{
    integrate, integrate_fourier_tail, integrate_from_zero, integrate_half_line,
    integrate_to_infinity, QuadratureSpec,
};
use crate::numerics::special::{gamma_fn, sphere_area};

use super::pareto::{constant_c1, symbol_quadrature};

/// Largest dimension handled by the isotropic routines.
pub const MAX_DIM: usize = 3;

fn check(alpha: f64, gamma: f64, d: usize) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha = {alpha} must be positive")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("gamma = {gamma} must be positive")));
    }
    if d == 0 {
        return Err(Error::invalid("dimension d must be at least 1"));
    }
    Ok(())
}

fn check_dim_cap(d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::invalid(format!(
            "dimension d = {d} must lie in 1..={MAX_DIM}"
        )));
    }
    Ok(())
}

/// `K_{d,alpha} = Gamma(alpha + d/2) / (pi^{d/2} Gamma(alpha))`.
pub fn student_constant(alpha: f64, d: usize) -> Result<f64> {
    let h = 0.5 * d as f64;
    Ok(gamma_fn(alpha + h)? / (PI.powf(h) * gamma_fn(alpha)?))
}

/// `K_{d,alpha} gamma^alpha / (|y|^2 + gamma)^{alpha + d/2}`.
pub fn student_density(y: &[f64], alpha: f64, gamma: f64, d: usize) -> Result<f64> {
    check(alpha, gamma, d)?;
    if y.len() != d {
        return Err(Error::ShapeMismatch {
            expected: d,
            found: y.len(),
        });
    }
    let r2: f64 = y.iter().map(|v| v * v).sum();
    Ok(radial_density(
        r2.sqrt(),
        alpha,
        gamma,
        d,
        student_constant(alpha, d)?,
    ))
}

#[inline]
fn radial_density(r: f64, alpha: f64, gamma: f64, d: usize, k: f64) -> f64 {
    k * gamma.powf(alpha) * (r * r + gamma).powf(-alpha - 0.5 * d as f64)
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-13, 1e-11)
}

/// Total mass by radial quadrature: `|S^{d-1}| int_0^inf r^{d-1} rho(r) dr`.
pub fn student_normalization(alpha: f64, gamma: f64, d: usize) -> Result<f64> {
    check(alpha, gamma, d)?;
    let k = student_constant(alpha, d)?;
    let area = sphere_area(d);
    let s = gamma.sqrt();
    let v = integrate_half_line(
        |r: f64| r.powi(d as i32 - 1) * radial_density(r, alpha, gamma, d, k),
        &[s, 10.0 * s],
        &quad(),
    )?;
    Ok(area * v.value)
}

/// CDF of one coordinate (the `d = 1` law), by quadrature of the density.
pub fn student_marginal_cdf(x: f64, alpha: f64, gamma: f64) -> Result<f64> {
    check(alpha, gamma, 1)?;
    if x == 0.0 {
        return Ok(0.5);
    }
    let k = student_constant(alpha, 1)?;
    let f = |u: f64| radial_density(u, alpha, gamma, 1, k);
    let a = x.abs();
    // Integrate whichever side is shorter so tail probabilities keep their digits.
    let spec = quad();
    let tail = if a > gamma.sqrt() {
        integrate_to_infinity(f, a, &spec)?.value
    } else {
        0.5 - integrate(f, 0.0, a, &spec)?.value
    };
    Ok(if x > 0.0 { 1.0 - tail } else { tail })
}

/// `P{|Y| <= r}` for the d-dimensional law.
pub fn student_radial_cdf(r: f64, alpha: f64, gamma: f64, d: usize) -> Result<f64> {
    check(alpha, gamma, d)?;
    if r <= 0.0 {
        return Ok(0.0);
    }
    let k = student_constant(alpha, d)?;
    let area = sphere_area(d);
    let f = |s: f64| area * s.powi(d as i32 - 1) * radial_density(s, alpha, gamma, d, k);
    let spec = quad();
    let sg = gamma.sqrt();
    if r > sg {
        Ok(1.0 - integrate_to_infinity(f, r, &spec)?.value)
    } else if d == 1 {
        Ok(integrate(f, 0.0, r, &spec)?.value)
    } else {
        Ok(integrate_from_zero(f, r, &spec)?.value)
    }
}

/// Order `gamma^alpha x^{-2alpha}` of the Student tail `P{|Y| > x}`.
pub fn tail_exponent_bound(alpha: f64, gamma: f64, x: f64) -> Result<f64> {
    check(alpha, gamma, 1)?;
    if !(x >= 10.0 * gamma.sqrt()) {
        return Err(Error::Domain(format!(
            "tail order needs x >= 10 sqrt(gamma) = {}, got {x}",
            10.0 * gamma.sqrt()
        )));
    }
    Ok(gamma.powf(alpha) * x.powf(-2.0 * alpha))
}

/// `int_{S^{d-1}} |theta_1|^{2 alpha} dsigma(theta)`, through the polar angle
/// of theta_1: `|S^{d-2}| int_0^pi |cos t|^{2 alpha} sin^{d-2} t dt`.
pub fn sphere_moment(alpha: f64, d: usize) -> Result<f64> {
    check_dim_cap(d)?;
    if d == 1 {
        return Ok(2.0);
    }
    let e = 2.0 * alpha;
    let v = integrate(
        |t: f64| t.cos().powf(e) * t.sin().powi(d as i32 - 2),
        0.0,
        FRAC_PI_2,
        &quad(),
    )?;
    Ok(2.0 * sphere_area(d - 1) * v.value)
}

/// `C_d = int_{R^d} (1 - cos y_1) |y|^{-2 alpha - d} dy`, factored into the
/// sphere moment and the one-dimensional constant at index `2 alpha`.
pub fn constant_cd(alpha: f64, d: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!(
            "the isotropic constant requires alpha in (0, 1), got {alpha}"
        )));
    }
    Ok(sphere_moment(alpha, d)? * constant_c1(2.0 * alpha)?)
}

/// `lambda K_{d,alpha} C_d |xi|^{2 alpha}`.
pub fn symbol_thm3_limit(xi: &[f64], alpha: f64, lambda: f64, d: usize) -> Result<f64> {
    check_dim_cap(d)?;
    if xi.len() != d {
        return Err(Error::ShapeMismatch {
            expected: d,
            found: xi.len(),
        });
    }
    let c = lambda * student_constant(alpha, d)? * constant_cd(alpha, d)?;
    let r: f64 = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok(c * r.powf(2.0 * alpha))
}

/// `lambda K_{d,alpha} int_{R^d} (1 - cos(xi.y)) (|y|^2 + gamma)^{-alpha-d/2} dy`.
///
/// Rotating `xi` onto the first axis and integrating out the other
/// coordinates leaves the one-dimensional kernel with `K_{1,alpha}`.
pub fn symbol_thm3_pre(xi: &[f64], alpha: f64, gamma: f64, lambda: f64, d: usize) -> Result<f64> {
    check(alpha, gamma, d)?;
    check_dim_cap(d)?;
    if !(alpha < 1.0) {
        return Err(Error::invalid(format!(
            "the isotropic limit requires alpha in (0, 1), got {alpha}"
        )));
    }
    if xi.len() != d {
        return Err(Error::ShapeMismatch {
            expected: d,
            found: xi.len(),
        });
    }
    let w: f64 = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if w == 0.0 {
        return Ok(0.0);
    }
    let e = -alpha - 0.5;
    let g = |u: f64| (u * u + gamma).powf(e);
    let spec = symbol_quadrature();
    let big = 4.0 * PI / w;
    let core = integrate(
        |u: f64| {
            let s = (0.5 * w * u).sin();
            2.0 * s * s * g(u)
        },
        0.0,
        big,
        &spec,
    )?;
    let mass_tail = integrate_to_infinity(g, big, &spec)?;
    let (osc, _) = integrate_fourier_tail(g, big, w, &spec)?;
    let half_line = core.value + mass_tail.value - osc.re;
    Ok(2.0 * lambda * student_constant(alpha, 1)? * half_line)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_at_origin() {
        let v = student_density(&[0.0], 0.5, 1.0, 1).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn normalized() {
        for d in 1..=3 {
            for a in [0.5, 1.5] {
                let m = student_normalization(a, 1.0, d).unwrap();
                assert!((m - 1.0).abs() < 1e-9, "d={d} alpha={a}: {m}");
            }
        }
    }

    #[test]
    fn sphere_moment_closed_forms() {
        let a = 0.35;
        let two = 2.0 * PI.sqrt() * gamma_fn(a + 0.5).unwrap() / gamma_fn(a + 1.0).unwrap();
        assert!((sphere_moment(a, 2).unwrap() - two).abs() < 1e-11);
        assert!((sphere_moment(a, 3).unwrap() - 4.0 * PI / (2.0 * a + 1.0)).abs() < 1e-11);
        assert!(sphere_moment(a, 4).is_err());
    }

    #[test]
    fn plane_half_constant_is_two_pi() {
        let c = constant_cd(0.5, 2).unwrap();
        assert!((c - 2.0 * PI).abs() < 1e-9);
        let k = student_constant(0.5, 2).unwrap();
        assert!((k * c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cdf_symmetry_and_limits() {
        let a = student_marginal_cdf(-0.7, 1.3, 0.8).unwrap();
        let b = student_marginal_cdf(0.7, 1.3, 0.8).unwrap();
        assert!((a + b - 1.0).abs() < 1e-12);
        assert!(student_marginal_cdf(1e6, 1.3, 0.8).unwrap() > 1.0 - 1e-6);
        assert!((student_radial_cdf(1e-3, 1.0, 1.0, 2).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn tail_bound_domain() {
        assert!((tail_exponent_bound(0.5, 1.0, 10.0).unwrap() - 0.1).abs() < 1e-15);
        assert!(tail_exponent_bound(0.5, 1.0, 9.0).is_err());
    }
}
