//! Fourier-multiplier inversion and the subordinated heat semigroup.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::fractional::{log_panels, operator_quadrature, sphere_integral, weyl_constant};
use super::test_function::TestFunction;
use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, integrate_to_infinity, Estimate, QuadratureSpec};
use crate::symbols::student::MAX_DIM;

/// `|f^|` relative to its peak at the truncation radius of the frequency integral.
const SPECTRAL_FLOOR: f64 = 1e-18;

/// Frequency radius outside which `|f^(xi)|` is below `SPECTRAL_FLOOR` of its peak.
fn spectral_extent(f: &TestFunction) -> Result<(f64, f64)> {
    let (w, om) =
        match f {
            TestFunction::Gaussian { width, .. } => (*width, 0.0),
            TestFunction::ModulatedGaussian {
                width, frequency, ..
            } => (*width, frequency.iter().map(|v| v * v).sum::<f64>().sqrt()),
            _ => return Err(Error::invalid(
                "multiplier inversion needs a test function with a closed-form Fourier transform",
            )),
        };
    let r = (-4.0 * SPECTRAL_FLOOR.ln()).sqrt() / w;
    Ok((om + r, om))
}

/// `(A f)(x) = -(2 pi)^{-d} int e^{-i xi.x} Phi(xi) f^(xi) dxi`.
///
/// The error estimate includes the size of the discarded imaginary part.
/// Fails with a domain error when `Phi f^` is not negligible at the
/// truncation radius.
pub fn multiplier_apply_estimate<P>(f: &TestFunction, phi: P, x: &[f64]) -> Result<Estimate>
where
    P: Fn(&[f64]) -> Complex64,
{
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
    let (extent, om) = spectral_extent(f)?;
    let integrand = |xi: &[f64]| -> Complex64 {
        let hat = f.fourier(xi).unwrap_or_default();
        if hat == Complex64::default() {
            return hat;
        }
        let ph: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
        Complex64::from_polar(1.0, -ph) * phi(xi) * hat
    };

    // Truncation check on the sphere of radius `extent` along each axis.
    let mut edge: f64 = 0.0;
    for k in 0..d {
        for sgn in [-1.0, 1.0] {
            let mut xi = vec![0.0; d];
            xi[k] = sgn * extent;
            edge = edge.max(integrand(&xi).norm());
        }
    }
    if !edge.is_finite() || edge > 1e-12 {
        return Err(Error::Domain(format!(
            "Phi f^ is {edge:e} at the frequency extent {extent}; the symbol grows too fast"
        )));
    }

    let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-11);
    let xn: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (re, im) = if d == 1 {
        let n_panels = ((extent * xn.max(1.0) / PI).ceil() as usize).clamp(4, 256);
        let mut pts: Vec<f64> = (0..=n_panels)
            .map(|k| -extent + 2.0 * extent * k as f64 / n_panels as f64)
            .collect();
        pts.extend([0.0, om, -om]);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let mut sub = spec;
        sub.abs_tol = spec.abs_tol / pts.len() as f64;
        let mut re = Estimate::default();
        let mut im = Estimate::default();
        for w in pts.windows(2) {
            re = re + integrate(|t| integrand(&[t]).re, w[0], w[1], &sub)?;
            im = im + integrate(|t| integrand(&[t]).im, w[0], w[1], &sub)?;
        }
        (re, im)
    } else {
        let basis: Vec<Vec<f64>> = (0..d)
            .map(|k| {
                let mut e = vec![0.0; d];
                e[k] = 1.0;
                e
            })
            .collect();
        let inner = QuadratureSpec::default().with_tolerances(1e-15, 1e-11);
        let fail = std::cell::RefCell::new(None);
        let shell = |rho: f64, part: fn(Complex64) -> f64| -> f64 {
            let g = |theta: &[f64]| {
                let xi: Vec<f64> = theta.iter().map(|t| rho * t).collect();
                part(integrand(&xi))
            };
            match sphere_integral(g, &basis, &inner) {
                Ok(e) => e.value * rho.powi(d as i32 - 1),
                Err(e) => {
                    fail.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let n_panels = ((extent * xn.max(1.0) / PI).ceil() as usize).clamp(2, 64);
        let mut pts: Vec<f64> = (0..=n_panels)
            .map(|k| extent * k as f64 / n_panels as f64)
            .collect();
        pts.push(om);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let mut re = Estimate::default();
        let mut im = Estimate::default();
        for w in pts.windows(2) {
            re = re + integrate(|r| shell(r, |z| z.re), w[0], w[1], &spec)?;
            im = im + integrate(|r| shell(r, |z| z.im), w[0], w[1], &spec)?;
        }
        if let Some(e) = fail.into_inner() {
            return Err(e);
        }
        (re, im)
    };
    let norm = -(2.0 * PI).powi(-(d as i32));
    Ok(Estimate::new(
        norm * re.value,
        (re.error + im.value.abs() + im.error) * norm.abs(),
    ))
}

pub fn multiplier_apply<P>(f: &TestFunction, phi: P, x: &[f64]) -> Result<f64>
where
    P: Fn(&[f64]) -> Complex64,
{
    multiplier_apply_estimate(f, phi, x).map(|e| e.value)
}

/// `|xi|^{2 alpha}`, the symbol of `(-Laplacian)^alpha`.
pub fn fractional_power_symbol(alpha: f64) -> impl Fn(&[f64]) -> Complex64 {
    move |xi: &[f64]| {
        let r2: f64 = xi.iter().map(|v| v * v).sum();
        if r2 == 0.0 {
            Complex64::default()
        } else {
            Complex64::new(r2.powf(alpha), 0.0)
        }
    }
}

/// `(alpha/Gamma(1-alpha)) int_0^inf (T_s f(x) - f(x)) s^{-alpha-1} ds` with
/// `T_s = e^{s Laplacian}` in closed form; equals `-(-Laplacian)^alpha f(x)`.
pub fn bochner_subordinate_heat_estimate(
    f: &TestFunction,
    alpha: f64,
    x: &[f64],
) -> Result<Estimate> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!(
            "alpha = {alpha} must lie in (0, 1)"
        )));
    }
    f.validate()?;
    if x.len() != f.dim() {
        return Err(Error::ShapeMismatch {
            expected: f.dim(),
            found: x.len(),
        });
    }
    match f {
        TestFunction::Constant { .. } | TestFunction::Linear { .. } => {
            return Ok(Estimate::default())
        }
        TestFunction::Quadratic { .. } => {
            return Err(Error::NonIntegrable(
                "T_s f - f grows linearly in s for a quadratic".into(),
            ))
        }
        _ => {}
    }
    let fx = f.eval(x);
    let heat = |s: f64| f.heat(s, x).unwrap_or(fx);
    let h = |s: f64| (heat(s) - fx) * s.powf(-alpha - 1.0);
    let ell = f.length_scale();
    let s0 = 1e-7 * ell * ell;
    let lap = f.laplacian(x);
    let core = lap * s0.powf(1.0 - alpha) / (1.0 - alpha);
    let core = Estimate::new(core, 1e-6 * core.abs());
    let rho2 = match f.center() {
        Some(c) => c.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
        None => 0.0,
    };
    let b = 100.0 * ell * ell + rho2;
    let spec = operator_quadrature();
    let pts = [ell * ell, 0.25 * ell * ell, 0.25 * rho2, rho2];
    let mid = log_panels(h, s0, b, &pts, &spec)?;
    let tail = integrate_to_infinity(h, b, &spec)?;
    Ok((core + mid + tail).scale(weyl_constant(alpha)?))
}

pub fn bochner_subordinate_heat(f: &TestFunction, alpha: f64, x: &[f64]) -> Result<f64> {
    bochner_subordinate_heat_estimate(f, alpha, x).map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_symbol_recovers_second_derivative() {
        let f = TestFunction::gaussian(0.0, 1.0);
        let v =
            multiplier_apply(&f, |xi: &[f64]| Complex64::new(xi[0] * xi[0], 0.0), &[0.0]).unwrap();
        assert!((v + 2.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn zero_symbol() {
        let f = TestFunction::gaussian(0.5, 1.0);
        assert_eq!(
            multiplier_apply(&f, |_: &[f64]| Complex64::default(), &[0.1]).unwrap(),
            0.0
        );
    }

    #[test]
    fn exponential_symbol_is_rejected() {
        let f = TestFunction::gaussian(0.0, 1.0);
        let phi = |xi: &[f64]| Complex64::new((xi[0] * xi[0]).exp(), 0.0);
        assert!(matches!(
            multiplier_apply(&f, phi, &[0.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cosine_is_an_eigenfunction() {
        let f = TestFunction::cosine(1.0);
        for x in [0.0, 0.8, 2.0] {
            let v = bochner_subordinate_heat(&f, 0.4, &[x]).unwrap();
            assert!((v + x.cos()).abs() < 1e-8, "{v} vs {}", -x.cos());
        }
    }

    #[test]
    fn bochner_half_at_origin() {
        let f = TestFunction::gaussian(0.0, 1.0);
        let v = bochner_subordinate_heat(&f, 0.5, &[0.0]).unwrap();
        assert!((v + 2.0 / PI.sqrt()).abs() < 1e-8, "{v}");
    }
}
