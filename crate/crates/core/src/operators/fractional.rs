//! Weyl, Riesz and fractional-Laplacian operators in difference form.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::test_function::TestFunction;
use crate::error::{Error, Result};
use crate::numerics::quadrature::{
    integrate, integrate_fourier_tail, integrate_log_interval, integrate_to_infinity, Estimate,
    QuadratureSpec,
};
use crate::numerics::special::{gamma_fn, sphere_area};
use crate::symbols::student::{constant_cd, MAX_DIM};

/// Inner radius of the Taylor core, in units of the function's length scale.
const CORE_FRACTION: f64 = 1e-4;

pub(crate) fn operator_quadrature() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-12, 1e-10)
}

fn check_order(name: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if !(v > lo && v < hi) {
        return Err(Error::invalid(format!(
            "{name} = {v} must lie in ({lo}, {hi})"
        )));
    }
    Ok(())
}

fn check_dim1(f: &TestFunction) -> Result<()> {
    f.validate()?;
    if f.dim() != 1 {
        return Err(Error::ShapeMismatch {
            expected: 1,
            found: f.dim(),
        });
    }
    Ok(())
}

/// Sum of `int_{a_k}^{a_{k+1}} h` over the sorted, deduplicated points in
/// `[lo, hi]`, each piece on a log scale.
pub(crate) fn log_panels<H: Fn(f64) -> f64>(
    h: H,
    lo: f64,
    hi: f64,
    extra: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let mut pts: Vec<f64> = vec![lo, hi];
    pts.extend(extra.iter().copied().filter(|p| *p > lo && *p < hi));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    let mut sub = *spec;
    sub.abs_tol = spec.abs_tol / pts.len() as f64;
    pts.windows(2)
        .map(|w| integrate_log_interval(&h, w[0], w[1], &sub))
        .sum()
}

/// Breakpoints in `y > 0` where `y -> f(x + dir y)` has features, and the
/// radius past which only the tail remains.
fn features(f: &TestFunction, x: f64, dir: f64, r0: f64) -> (Vec<f64>, f64) {
    let scale = f.length_scale();
    match (f.center(), f.support_radius()) {
        (Some(c), Some(r)) => {
            let ys = dir * (c[0] - x);
            let pts = vec![scale, ys - r, ys, ys + r];
            let b = (ys + r).max(scale).max(10.0 * r0);
            (pts, b)
        }
        _ => (vec![scale], (4.0 * PI * scale).max(10.0 * r0)),
    }
}

/// `int_B^inf f(x + dir y) y^{-s} dy` for a cosine, through the oscillatory tail.
fn cosine_shift_tail(
    frequency: f64,
    phase: f64,
    x: f64,
    dir: f64,
    b: f64,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let p0 = frequency * x + phase;
    let om = dir * frequency;
    if om == 0.0 {
        return Ok(Estimate::new(p0.cos() * b.powf(1.0 - s) / (s - 1.0), 0.0));
    }
    let (t, err) = integrate_fourier_tail(|y: f64| y.powf(-s), b, om, spec)?;
    let v = (Complex64::from_polar(1.0, p0) * t).re;
    Ok(Estimate::new(v, 2.0 * err))
}

/// `int_0^inf (f(x) - f(x + dir y)) y^{-s} dy` for `s` in (1, 2).
pub(crate) fn one_sided_difference(f: &TestFunction, x: f64, dir: f64, s: f64) -> Result<Estimate> {
    match f {
        TestFunction::Constant { .. } => return Ok(Estimate::default()),
        TestFunction::Linear { .. } | TestFunction::Quadratic { .. } => {
            return Err(Error::NonIntegrable(format!(
                "first differences of a polynomial grow too fast for the kernel y^-{s}"
            )))
        }
        _ => {}
    }
    let spec = operator_quadrature();
    let fx = f.eval1(x);
    let d1 = dir * f.derivative(x);
    let d2 = f.second_derivative(x);
    let r0 = CORE_FRACTION * f.length_scale();
    let core = -d1 * r0.powf(2.0 - s) / (2.0 - s) - 0.5 * d2 * r0.powf(3.0 - s) / (3.0 - s);
    let core = Estimate::new(core, 1e-7 * core.abs());
    let (pts, b) = features(f, x, dir, r0);
    let h = |y: f64| -f.first_difference(&[x], &[dir * y]) * y.powf(-s);
    let mid = log_panels(h, r0, b, &pts, &spec)?;
    let tail = match f {
        TestFunction::Cosine { frequency, phase } => {
            let flat = Estimate::new(fx * b.powf(1.0 - s) / (s - 1.0), 0.0);
            flat - cosine_shift_tail(frequency[0], *phase, x, dir, b, s, &spec)?
        }
        _ => integrate_to_infinity(h, b, &spec)?,
    };
    Ok(core + mid + tail)
}

/// `int_0^inf (f(x + y) + f(x - y) - 2 f(x)) y^{-s} dy` for `s` in (1, 3).
pub(crate) fn second_difference(f: &TestFunction, x: f64, s: f64) -> Result<Estimate> {
    match f {
        TestFunction::Constant { .. } | TestFunction::Linear { .. } => {
            return Ok(Estimate::default())
        }
        TestFunction::Quadratic { .. } => {
            return Err(Error::NonIntegrable(format!(
                "the second difference of a quadratic is not integrable against y^-{s}"
            )))
        }
        _ => {}
    }
    let spec = operator_quadrature();
    let fx = f.eval1(x);
    let d2 = f.second_derivative(x);
    let r0 = CORE_FRACTION * f.length_scale();
    let core = d2 * r0.powf(3.0 - s) / (3.0 - s);
    let core = Estimate::new(core, 1e-7 * core.abs());
    let (mut pts, b_plus) = features(f, x, 1.0, r0);
    let (pts_minus, b_minus) = features(f, x, -1.0, r0);
    pts.extend(pts_minus);
    let b = b_plus.max(b_minus);
    let h = |y: f64| f.second_difference(&[x], &[y]) * y.powf(-s);
    let mid = log_panels(h, r0, b, &pts, &spec)?;
    let tail = match f {
        TestFunction::Cosine { frequency, phase } => {
            let flat = Estimate::new(-2.0 * fx * b.powf(1.0 - s) / (s - 1.0), 0.0);
            flat + cosine_shift_tail(frequency[0], *phase, x, 1.0, b, s, &spec)?
                + cosine_shift_tail(frequency[0], *phase, x, -1.0, b, s, &spec)?
        }
        _ => integrate_to_infinity(h, b, &spec)?,
    };
    Ok(core + mid + tail)
}

/// `alpha / Gamma(1 - alpha)`.
pub fn weyl_constant(alpha: f64) -> Result<f64> {
    Ok(alpha / gamma_fn(1.0 - alpha)?)
}

/// Left Weyl derivative, `(alpha/Gamma(1-alpha)) int_0^inf (f(x) - f(x-y)) y^{-alpha-1} dy`.
pub fn weyl_left_estimate(f: &TestFunction, alpha: f64, x: f64) -> Result<Estimate> {
    check_order("alpha", alpha, 0.0, 1.0)?;
    check_dim1(f)?;
    Ok(one_sided_difference(f, x, -1.0, alpha + 1.0)?.scale(weyl_constant(alpha)?))
}

/// Right Weyl derivative, the same with `f(x + y)`.
pub fn weyl_right_estimate(f: &TestFunction, alpha: f64, x: f64) -> Result<Estimate> {
    check_order("alpha", alpha, 0.0, 1.0)?;
    check_dim1(f)?;
    Ok(one_sided_difference(f, x, 1.0, alpha + 1.0)?.scale(weyl_constant(alpha)?))
}

pub fn weyl_left(f: &TestFunction, alpha: f64, x: f64) -> Result<f64> {
    weyl_left_estimate(f, alpha, x).map(|e| e.value)
}

pub fn weyl_right(f: &TestFunction, alpha: f64, x: f64) -> Result<f64> {
    weyl_right_estimate(f, alpha, x).map(|e| e.value)
}

/// `sigma = 1 / cos(pi beta / 2)`.
pub fn riesz_sigma(beta: f64) -> Result<f64> {
    if beta == 1.0 {
        return Err(Error::Singular(
            "the Riesz derivative is undefined at beta = 1 (cos(pi/2) = 0)".into(),
        ));
    }
    Ok(1.0 / (FRAC_PI_2 * beta).cos())
}

/// Riesz derivative `(sigma/2)(D_+ + D_-)`, with multiplier `|xi|^beta`.
///
/// For `beta` in (1, 2) both Weyl integrals are taken in their
/// second-difference form.
pub fn riesz_derivative_estimate(f: &TestFunction, beta: f64, x: f64) -> Result<Estimate> {
    check_order("beta", beta, 0.0, 2.0)?;
    let sigma = riesz_sigma(beta)?;
    check_dim1(f)?;
    let kappa = beta / gamma_fn(1.0 - beta)?;
    if beta < 1.0 {
        let left = one_sided_difference(f, x, -1.0, beta + 1.0)?;
        let right = one_sided_difference(f, x, 1.0, beta + 1.0)?;
        Ok((left + right).scale(0.5 * sigma * kappa))
    } else {
        Ok(second_difference(f, x, beta + 1.0)?.scale(-0.5 * sigma * kappa))
    }
}

pub fn riesz_derivative(f: &TestFunction, beta: f64, x: f64) -> Result<f64> {
    riesz_derivative_estimate(f, beta, x).map(|e| e.value)
}

/// Normalization `1 / C_d(alpha)` that turns the second-difference integral
/// into `-(-Laplacian)^alpha`.
pub fn frac_laplacian_constant(alpha: f64, d: usize) -> Result<f64> {
    Ok(1.0 / constant_cd(alpha, d)?)
}

/// Checks `|f(x+y) + f(x-y) - 2 f(x)| <= ||D^2 f|| |y|^2` on a few small `y`.
fn probe_second_difference(f: &TestFunction, x: &[f64]) -> Result<()> {
    let bound = f.hessian_bound();
    let scale = f.length_scale();
    let d = x.len();
    let fx = f.eval(x);
    let mut near_one: f64 = 0.0;
    let mut near_zero: f64 = 0.0;
    for k in 0..d {
        for (i, h) in [1e-1, 1e-2, 1e-3].iter().enumerate() {
            let y = h * scale;
            let mut plus = x.to_vec();
            let mut minus = x.to_vec();
            plus[k] += y;
            minus[k] -= y;
            let sd = (f.eval(&plus) + f.eval(&minus) - 2.0 * fx).abs();
            let ratio = sd / (y * y);
            if i == 0 {
                near_one = near_one.max(ratio);
            } else {
                near_zero = near_zero.max(ratio);
            }
            let slack = 1e-6 * bound + 64.0 * f64::EPSILON * fx.abs().max(1.0) / (y * y);
            if ratio > bound + slack {
                return Err(Error::Divergence {
                    near_one,
                    near_zero: ratio,
                });
            }
        }
    }
    Ok(())
}

/// Orthonormal frame whose first vector points along `axis` (or `e_1`).
fn frame(axis: &[f64]) -> Vec<Vec<f64>> {
    let d = axis.len();
    let n: f64 = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
    let e: Vec<f64> = if n > 1e-12 {
        axis.iter().map(|v| v / n).collect()
    } else {
        let mut e = vec![0.0; d];
        e[0] = 1.0;
        e
    };
    let mut basis = vec![e];
    for k in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        for b in &basis {
            let p: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= p * bi;
            }
        }
        let m: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if m > 1e-8 {
            basis.push(v.into_iter().map(|a| a / m).collect());
        }
    }
    basis
}

/// `int_{S^{d-1}} g(theta) dsigma` for d = 2, 3 in hyperspherical coordinates
/// about the first frame vector.
pub(crate) fn sphere_integral<G: Fn(&[f64]) -> f64>(
    g: G,
    basis: &[Vec<f64>],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let d = basis.len();
    let point = |coef: &[f64]| -> Vec<f64> {
        let mut v = vec![0.0; d];
        for (c, b) in coef.iter().zip(basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += c * bi;
            }
        }
        v
    };
    let circle = |rho: f64, z: f64| -> Result<Estimate> {
        // Angle phi around the pole at height z (d = 3) or the full circle (d = 2).
        let ring = |phi: f64| {
            let coef: Vec<f64> = if d == 2 {
                vec![phi.cos(), phi.sin()]
            } else {
                vec![z, rho * phi.cos(), rho * phi.sin()]
            };
            g(&point(&coef))
        };
        Ok(integrate(&ring, 0.0, PI, spec)? + integrate(&ring, PI, 2.0 * PI, spec)?)
    };
    match d {
        2 => circle(1.0, 0.0),
        3 => {
            let err = std::cell::Cell::new(0.0);
            let fail = std::cell::RefCell::new(None);
            let v = integrate(
                |t: f64| match circle(t.sin(), t.cos()) {
                    Ok(e) => {
                        err.set(err.get() + e.error * t.sin() * 1e-2);
                        e.value * t.sin()
                    }
                    Err(e) => {
                        fail.borrow_mut().get_or_insert(e);
                        0.0
                    }
                },
                0.0,
                PI,
                spec,
            )?;
            if let Some(e) = fail.into_inner() {
                return Err(e);
            }
            Ok(Estimate::new(v.value, v.error + err.get()))
        }
        _ => Err(Error::invalid(format!(
            "sphere integrals are implemented for d = 2, 3, got {d}"
        ))),
    }
}

/// Radial integral `int_0^inf r^{-2 alpha - 1} A(r) dr` with `A(r)` the
/// spherical integral of the second difference, for d = 2, 3.
fn radial_second_difference(f: &TestFunction, x: &[f64], alpha: f64) -> Result<Estimate> {
    let d = x.len();
    let spec = operator_quadrature();
    let inner = QuadratureSpec::default().with_tolerances(1e-16, 1e-11);
    let axis: Vec<f64> = match f {
        TestFunction::Gaussian { center, .. } | TestFunction::ModulatedGaussian { center, .. } => {
            center.iter().zip(x).map(|(c, a)| c - a).collect()
        }
        _ => vec![0.0; d],
    };
    let basis = frame(&axis);
    let rho = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
    let s = 2.0 * alpha + 1.0;
    let fail = std::cell::RefCell::new(None);
    let a_of_r = |r: f64| -> f64 {
        let sd = |theta: &[f64]| {
            let y: Vec<f64> = theta.iter().map(|t| r * t).collect();
            f.second_difference(x, &y)
        };
        match sphere_integral(sd, &basis, &inner) {
            Ok(e) => e.value,
            Err(e) => {
                fail.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let h = |r: f64| a_of_r(r) * r.powf(-s);
    let scale = f.length_scale();
    let r0 = CORE_FRACTION * scale;
    let core = sphere_area(d) * f.laplacian(x) / d as f64 * r0.powf(3.0 - s) / (3.0 - s);
    let core = Estimate::new(core, 1e-7 * core.abs());
    let support = f.support_radius().unwrap_or(scale);
    let pts = [scale, rho - support, rho, rho + support];
    let b = (rho + support).max(scale);
    let mid = log_panels(h, r0, b, &pts, &spec)?;
    let tail = integrate_to_infinity(h, b, &spec)?;
    if let Some(e) = fail.into_inner() {
        return Err(e);
    }
    Ok(core + mid + tail)
}

/// `-(-Laplacian)^alpha f(x)` through the second-difference singular integral
/// `(C/2) int_{R^d} (f(x+y) + f(x-y) - 2f(x)) |y|^{-2alpha-d} dy`.
pub fn frac_laplacian_estimate(f: &TestFunction, alpha: f64, x: &[f64]) -> Result<Estimate> {
    check_order("alpha", alpha, 0.0, 1.0)?;
    f.validate()?;
    let d = f.dim();
    if x.len() != d {
        return Err(Error::ShapeMismatch {
            expected: d,
            found: x.len(),
        });
    }
    if d > MAX_DIM {
        return Err(Error::invalid(format!(
            "dimension d = {d} must lie in 1..={MAX_DIM}"
        )));
    }
    probe_second_difference(f, x)?;
    match f {
        TestFunction::Constant { .. } | TestFunction::Linear { .. } => {
            return Ok(Estimate::default())
        }
        TestFunction::Quadratic { .. } => {
            return Err(Error::NonIntegrable(
                "the fractional Laplacian of a quadratic diverges".into(),
            ))
        }
        _ => {}
    }
    let c = frac_laplacian_constant(alpha, 1)?;
    if d == 1 {
        return Ok(second_difference(f, x[0], 2.0 * alpha + 1.0)?.scale(c));
    }
    if let TestFunction::Cosine { frequency, phase } = f {
        // A plane wave only sees the projection of y on its direction, and
        // the marginal of the kernel reproduces the one-dimensional constant.
        let w: f64 = frequency.iter().map(|v| v * v).sum::<f64>().sqrt();
        let p0: f64 = frequency.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + phase;
        let g = TestFunction::Cosine {
            frequency: vec![w],
            phase: p0,
        };
        return Ok(second_difference(&g, 0.0, 2.0 * alpha + 1.0)?.scale(c));
    }
    let c = frac_laplacian_constant(alpha, d)?;
    Ok(radial_second_difference(f, x, alpha)?.scale(0.5 * c))
}

pub fn frac_laplacian(f: &TestFunction, alpha: f64, x: &[f64]) -> Result<f64> {
    frac_laplacian_estimate(f, alpha, x).map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_gives_zero() {
        let f = TestFunction::constant(3.0);
        assert_eq!(weyl_left(&f, 0.4, 1.0).unwrap(), 0.0);
        assert_eq!(riesz_derivative(&f, 1.4, 1.0).unwrap(), 0.0);
        assert_eq!(frac_laplacian(&f, 0.4, &[1.0]).unwrap(), 0.0);
    }

    #[test]
    fn half_laplacian_of_gaussian_at_origin() {
        let f = TestFunction::gaussian(0.0, 1.0);
        let v = frac_laplacian(&f, 0.5, &[0.0]).unwrap();
        assert!((v + 2.0 / PI.sqrt()).abs() < 1e-8, "{v}");
    }

    #[test]
    fn weyl_cosine_is_phase_shift() {
        let (a, om) = (0.6, 1.3);
        let f = TestFunction::cosine(om);
        for x in [0.0, 0.7] {
            let left = weyl_left(&f, a, x).unwrap();
            let right = weyl_right(&f, a, x).unwrap();
            let m = om.powf(a);
            assert!(
                (left - m * (om * x + FRAC_PI_2 * a).cos()).abs() < 1e-8,
                "{left}"
            );
            assert!(
                (right - m * (om * x - FRAC_PI_2 * a).cos()).abs() < 1e-8,
                "{right}"
            );
        }
    }

    #[test]
    fn riesz_beta_one_is_singular() {
        let f = TestFunction::gaussian(0.0, 1.0);
        assert!(matches!(
            riesz_derivative(&f, 1.0, 0.0),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn polynomial_errors() {
        assert!(matches!(
            weyl_left(&TestFunction::linear(1.0, 0.0), 0.5, 0.0),
            Err(Error::NonIntegrable(_))
        ));
        assert_eq!(
            frac_laplacian(&TestFunction::linear(1.0, 0.0), 0.5, &[0.0]).unwrap(),
            0.0
        );
    }

    #[test]
    fn frame_is_orthonormal() {
        let b = frame(&[0.3, -1.0, 2.0]);
        for i in 0..3 {
            for j in 0..3 {
                let p: f64 = b[i].iter().zip(&b[j]).map(|(a, c)| a * c).sum();
                assert!((p - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }
}
