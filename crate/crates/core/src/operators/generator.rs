//! Compound-Poisson generators against a jump law.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fractional::{log_panels, operator_quadrature};
use super::test_function::TestFunction;
use crate::error::{Error, Result};
use crate::numerics::quadrature::{
    integrate, integrate_fourier_tail, integrate_to_infinity, Estimate,
};
use crate::sampling::law::JumpLaw;
use crate::symbols::student::student_constant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorForm {
    /// `lambda int (f(x+y) - f(x) - y f'(x)) nu(dy)`; needs a finite mean.
    Compensated,
    /// `lambda int (f(x+y) - f(x)) nu(dy)` for a symmetric law.
    Symmetric,
    /// `lambda int (f(x+y) - f(x)) nu(dy)` for any law that makes it integrable.
    Uncompensated,
}

/// One side of the law: `nu(dy)` restricted to `dir * y`, `y > lo`.
struct Side {
    dir: f64,
    lo: f64,
    weight: f64,
}

fn non_integrable(msg: String) -> Error {
    Error::NonIntegrable(msg)
}

/// Applies the generator of the compound Poisson process with rate `lambda`
/// and jump law `law` to `f` at `x`.
pub fn cp_generator_apply_estimate(
    f: &TestFunction,
    x: f64,
    law: &JumpLaw,
    lambda: f64,
    form: GeneratorForm,
) -> Result<Estimate> {
    law.validate()?;
    f.validate()?;
    if law.dim() != 1 || f.dim() != 1 {
        return Err(Error::invalid(
            "the compound-Poisson generator is implemented in one dimension",
        ));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!(
            "lambda = {lambda} must be positive"
        )));
    }
    let compensated = form == GeneratorForm::Compensated;
    if compensated && law.mean().is_none() {
        return Err(non_integrable(format!(
            "the compensated form needs a finite mean; tail index alpha = {} <= 1",
            law.alpha()
        )));
    }
    if form == GeneratorForm::Symmetric && !law.is_symmetric() {
        return Err(non_integrable(
            "the uncompensated symmetric form needs a symmetric law".into(),
        ));
    }
    match f {
        TestFunction::Quadratic { .. } if law.second_moment().is_none() => {
            return Err(non_integrable(format!(
                "a quadratic test function needs a finite second moment; alpha = {}",
                law.alpha()
            )))
        }
        TestFunction::Linear { .. } if !compensated && law.mean().is_none() => {
            return Err(non_integrable(format!(
                "a linear test function needs a finite mean; alpha = {}",
                law.alpha()
            )))
        }
        _ => {}
    }

    let alpha = law.alpha();
    let gamma = law.gamma();
    let fx = f.eval1(x);
    let dfx = if compensated { f.derivative(x) } else { 0.0 };
    let (sides, density): (Vec<Side>, Box<dyn Fn(f64) -> f64>) = match *law {
        JumpLaw::ParetoExp { p, q, .. } => {
            let c = alpha * gamma.powf(alpha);
            (
                vec![
                    Side {
                        dir: 1.0,
                        lo: gamma,
                        weight: p,
                    },
                    Side {
                        dir: -1.0,
                        lo: gamma,
                        weight: q,
                    },
                ],
                Box::new(move |y: f64| c * y.powf(-alpha - 1.0)),
            )
        }
        JumpLaw::StudentGauss { .. } => {
            let k = student_constant(alpha, 1)? * gamma.powf(alpha);
            (
                vec![
                    Side {
                        dir: 1.0,
                        lo: 0.0,
                        weight: 1.0,
                    },
                    Side {
                        dir: -1.0,
                        lo: 0.0,
                        weight: 1.0,
                    },
                ],
                Box::new(move |y: f64| k * (y * y + gamma).powf(-alpha - 0.5)),
            )
        }
    };
    let spec = operator_quadrature();
    let scale = f.length_scale();
    let mut total = Estimate::default();
    for side in sides.iter().filter(|s| s.weight > 0.0) {
        let dir = side.dir;
        let smooth = |y: f64| -> f64 {
            let v = match f {
                TestFunction::Cosine { .. } => -fx - dir * y * dfx,
                _ => f.first_difference(&[x], &[dir * y]) - dir * y * dfx,
            };
            v * density(y)
        };
        let full = |y: f64| (f.first_difference(&[x], &[dir * y]) - dir * y * dfx) * density(y);
        let base = gamma.sqrt();
        let lo = if side.lo > 0.0 {
            side.lo
        } else {
            1e-3 * base.min(scale)
        };
        let mut pts = vec![base, 10.0 * base, scale];
        let mut b = (10.0 * base).max(lo * 10.0);
        if let (Some(c), Some(r)) = (f.center(), f.support_radius()) {
            let ys = dir * (c[0] - x);
            pts.extend([ys - r, ys, ys + r]);
            b = b.max(ys + r);
        }
        if let TestFunction::Cosine { .. } = f {
            b = b.max(lo + 4.0 * PI * scale);
        }
        let mut part = log_panels(full, lo, b, &pts, &spec)?;
        if side.lo == 0.0 {
            part = part + integrate(&full, 0.0, lo, &spec)?;
        }
        part = part + integrate_to_infinity(smooth, b, &spec)?;
        if let TestFunction::Cosine { frequency, phase } = f {
            let p0 = frequency[0] * x + phase;
            let om = dir * frequency[0];
            if om == 0.0 {
                part = part + integrate_to_infinity(|y| p0.cos() * density(y), b, &spec)?;
            } else {
                let (t, err) = integrate_fourier_tail(&density, b, om, &spec)?;
                part = part + Estimate::new((Complex64::from_polar(1.0, p0) * t).re, 2.0 * err);
            }
        }
        total = total + part.scale(side.weight);
    }
    Ok(total.scale(lambda))
}

pub fn cp_generator_apply(
    f: &TestFunction,
    x: f64,
    law: &JumpLaw,
    lambda: f64,
    form: GeneratorForm,
) -> Result<f64> {
    cp_generator_apply_estimate(f, x, law, lambda, form).map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_gives_second_moment() {
        let law = JumpLaw::pareto(3.0, 1.0, 1.0, 0.0).unwrap();
        let v = cp_generator_apply(
            &TestFunction::quadratic(1.0),
            0.4,
            &law,
            2.0,
            GeneratorForm::Compensated,
        )
        .unwrap();
        assert!((v - 6.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn linear_compensated_vanishes() {
        let law = JumpLaw::pareto(1.5, 1.0, 0.3, 0.7).unwrap();
        let v = cp_generator_apply(
            &TestFunction::linear(2.0, 1.0),
            0.4,
            &law,
            1.0,
            GeneratorForm::Compensated,
        )
        .unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn infinite_mean_rejected() {
        let law = JumpLaw::pareto(0.5, 1.0, 1.0, 0.0).unwrap();
        let r = cp_generator_apply(
            &TestFunction::gaussian(0.0, 1.0),
            0.0,
            &law,
            1.0,
            GeneratorForm::Compensated,
        );
        assert!(matches!(r, Err(Error::NonIntegrable(_))));
        let r = cp_generator_apply(
            &TestFunction::gaussian(0.0, 1.0),
            0.0,
            &law,
            1.0,
            GeneratorForm::Symmetric,
        );
        assert!(matches!(r, Err(Error::NonIntegrable(_))));
        assert!(cp_generator_apply(
            &TestFunction::gaussian(0.0, 1.0),
            0.0,
            &law,
            1.0,
            GeneratorForm::Uncompensated
        )
        .is_ok());
    }

    #[test]
    fn cosine_against_pareto_characteristic_function() {
        // lambda (Re E[e^{i w Y}] - 1) cos(w x) for a symmetric law and f = cos(w .).
        let law = JumpLaw::pareto(0.7, 1.0, 0.5, 0.5).unwrap();
        let w = 1.3;
        let f = TestFunction::cosine(w);
        let v = cp_generator_apply(&f, 0.0, &law, 1.0, GeneratorForm::Symmetric).unwrap();
        let phi = crate::symbols::pareto::symbol_thm2_pre(w, 0.7, 1.0, 1.0).unwrap();
        assert!((v + phi).abs() < 1e-8, "{v} vs {}", -phi);
    }
}
