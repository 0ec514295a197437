//! Closed-form test functions on R^d.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TestFunction {
    /// `exp(-|x - c|^2 / w^2)`.
    Gaussian {
        center: Vec<f64>,
        width: f64,
    },
    /// `cos(omega.(x - c)) exp(-|x - c|^2 / w^2)`.
    ModulatedGaussian {
        center: Vec<f64>,
        width: f64,
        frequency: Vec<f64>,
    },
    /// `cos(omega.x + phase)`.
    Cosine {
        frequency: Vec<f64>,
        phase: f64,
    },
    Constant {
        value: f64,
        dim: usize,
    },
    /// `slope.x + intercept`.
    Linear {
        slope: Vec<f64>,
        intercept: f64,
    },
    /// `scale |x - c|^2`.
    Quadratic {
        scale: f64,
        center: Vec<f64>,
    },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

/// `e^z - 1` accurate near 0.
fn expm1_c(z: Complex64) -> Complex64 {
    let s = (0.5 * z.im).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * s * s,
        z.re.exp() * z.im.sin(),
    )
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl TestFunction {
    pub fn gaussian(center: f64, width: f64) -> Self {
        TestFunction::Gaussian {
            center: vec![center],
            width,
        }
    }

    pub fn gaussian_d(center: Vec<f64>, width: f64) -> Self {
        TestFunction::Gaussian { center, width }
    }

    pub fn modulated(center: f64, width: f64, frequency: f64) -> Self {
        TestFunction::ModulatedGaussian {
            center: vec![center],
            width,
            frequency: vec![frequency],
        }
    }

    pub fn cosine(frequency: f64) -> Self {
        TestFunction::Cosine {
            frequency: vec![frequency],
            phase: 0.0,
        }
    }

    pub fn constant(value: f64) -> Self {
        TestFunction::Constant { value, dim: 1 }
    }

    pub fn linear(slope: f64, intercept: f64) -> Self {
        TestFunction::Linear {
            slope: vec![slope],
            intercept,
        }
    }

    pub fn quadratic(scale: f64) -> Self {
        TestFunction::Quadratic {
            scale,
            center: vec![0.0],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TestFunction::Gaussian { center, .. }
            | TestFunction::ModulatedGaussian { center, .. }
            | TestFunction::Quadratic { center, .. } => center.len(),
            TestFunction::Cosine { frequency, .. } => frequency.len(),
            TestFunction::Constant { dim, .. } => *dim,
            TestFunction::Linear { slope, .. } => slope.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(Error::invalid("test function needs dimension >= 1"));
        }
        match self {
            TestFunction::Gaussian { width, .. }
            | TestFunction::ModulatedGaussian { width, .. }
                if !(*width > 0.0 && width.is_finite()) =>
            {
                Err(Error::invalid(format!(
                    "Gaussian width {width} must be positive"
                )))
            }
            TestFunction::ModulatedGaussian { frequency, .. } if frequency.len() != d => {
                Err(Error::ShapeMismatch {
                    expected: d,
                    found: frequency.len(),
                })
            }
            _ => Ok(()),
        }
    }

    /// Whether the function decays fast enough to have a Fourier transform.
    pub fn is_decaying(&self) -> bool {
        matches!(
            self,
            TestFunction::Gaussian { .. } | TestFunction::ModulatedGaussian { .. }
        )
    }

    /// Characteristic length used to size quadrature cores.
    pub fn length_scale(&self) -> f64 {
        match self {
            TestFunction::Gaussian { width, .. } => *width,
            TestFunction::ModulatedGaussian {
                width, frequency, ..
            } => {
                let w = norm2(frequency).sqrt();
                if w > 0.0 {
                    width.min(1.0 / w)
                } else {
                    *width
                }
            }
            TestFunction::Cosine { frequency, .. } => {
                let w = norm2(frequency).sqrt();
                if w > 0.0 {
                    1.0 / w
                } else {
                    1.0
                }
            }
            _ => 1.0,
        }
    }

    /// Euclidean distance scale past which the function is negligible, measured
    /// from its center.
    pub(crate) fn support_radius(&self) -> Option<f64> {
        match self {
            TestFunction::Gaussian { width, .. }
            | TestFunction::ModulatedGaussian { width, .. } => Some(6.5 * width),
            _ => None,
        }
    }

    pub(crate) fn center(&self) -> Option<&[f64]> {
        match self {
            TestFunction::Gaussian { center, .. }
            | TestFunction::ModulatedGaussian { center, .. } => Some(center),
            _ => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Gaussian { center, width } => {
                let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
                (-r2 / (width * width)).exp()
            }
            TestFunction::ModulatedGaussian {
                center,
                width,
                frequency,
            } => {
                let y = diff(x, center);
                (dot(frequency, &y)).cos() * (-norm2(&y) / (width * width)).exp()
            }
            TestFunction::Cosine { frequency, phase } => (dot(frequency, x) + phase).cos(),
            TestFunction::Constant { value, .. } => *value,
            TestFunction::Linear { slope, intercept } => dot(slope, x) + intercept,
            TestFunction::Quadratic { scale, center } => {
                scale
                    * x.iter()
                        .zip(center)
                        .map(|(a, c)| (a - c) * (a - c))
                        .sum::<f64>()
            }
        }
    }

    /// Log-quadratic form `f = Re exp(q)` of the Gaussian family:
    /// returns `exp(q(x))` and the gradient `q'(x)` as complex numbers.
    fn log_quadratic(&self, x: &[f64]) -> Option<(Complex64, Vec<Complex64>, f64)> {
        let (center, width, freq): (&[f64], f64, Option<&[f64]>) = match self {
            TestFunction::Gaussian { center, width } => (center, *width, None),
            TestFunction::ModulatedGaussian {
                center,
                width,
                frequency,
            } => (center, *width, Some(frequency)),
            _ => return None,
        };
        let w2 = width * width;
        let y = diff(x, center);
        let phase = freq.map_or(0.0, |f| dot(f, &y));
        let h = Complex64::from_polar((-norm2(&y) / w2).exp(), phase);
        let grad = y
            .iter()
            .enumerate()
            .map(|(k, yk)| Complex64::new(-2.0 * yk / w2, freq.map_or(0.0, |f| f[k])))
            .collect();
        Some((h, grad, w2))
    }

    /// `f(x + y) - f(x)` without cancellation for small `y`.
    pub fn first_difference(&self, x: &[f64], y: &[f64]) -> f64 {
        if let Some((h, grad, w2)) = self.log_quadratic(x) {
            let a: Complex64 = grad.iter().zip(y).map(|(g, v)| g * v).sum();
            let z = a - norm2(y) / w2;
            if z.norm() < 1.0 {
                return (h * expm1_c(z)).re;
            }
            let plus: Vec<f64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            return self.eval(&plus) - self.eval(x);
        }
        match self {
            TestFunction::Cosine { frequency, phase } => {
                let wy = dot(frequency, y);
                -2.0 * (dot(frequency, x) + phase + 0.5 * wy).sin() * (0.5 * wy).sin()
            }
            TestFunction::Constant { .. } => 0.0,
            TestFunction::Linear { slope, .. } => dot(slope, y),
            TestFunction::Quadratic { scale, center } => {
                scale * (2.0 * dot(&diff(x, center), y) + norm2(y))
            }
            _ => unreachable!(),
        }
    }

    /// `f(x + y) + f(x - y) - 2 f(x)` without cancellation for small `y`.
    pub fn second_difference(&self, x: &[f64], y: &[f64]) -> f64 {
        if let Some((h, grad, w2)) = self.log_quadratic(x) {
            let a: Complex64 = grad.iter().zip(y).map(|(g, v)| g * v).sum();
            let t = norm2(y) / w2;
            if a.norm() + t < 1.0 {
                let sh = (0.5 * a).sinh();
                return (h * (4.0 * (-t).exp() * sh * sh + 2.0 * (-t).exp_m1())).re;
            }
            let plus: Vec<f64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            let minus: Vec<f64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
            return self.eval(&plus) + self.eval(&minus) - 2.0 * self.eval(x);
        }
        match self {
            TestFunction::Cosine { frequency, phase } => {
                let s = (0.5 * dot(frequency, y)).sin();
                -4.0 * (dot(frequency, x) + phase).cos() * s * s
            }
            TestFunction::Constant { .. } | TestFunction::Linear { .. } => 0.0,
            TestFunction::Quadratic { scale, .. } => 2.0 * scale * norm2(y),
            _ => unreachable!(),
        }
    }

    /// Scalar evaluation for one-dimensional functions.
    pub fn eval1(&self, x: f64) -> f64 {
        self.eval(&[x])
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            TestFunction::Gaussian { center, width } => {
                let f = self.eval(x);
                let w2 = width * width;
                x.iter()
                    .zip(center)
                    .map(|(a, c)| -2.0 * (a - c) / w2 * f)
                    .collect()
            }
            TestFunction::ModulatedGaussian {
                center,
                width,
                frequency,
            } => {
                let y = diff(x, center);
                let w2 = width * width;
                let g = (-norm2(&y) / w2).exp();
                let ph = dot(frequency, &y);
                y.iter()
                    .zip(frequency)
                    .map(|(yk, wk)| g * (-wk * ph.sin() - 2.0 * yk / w2 * ph.cos()))
                    .collect()
            }
            TestFunction::Cosine { frequency, phase } => {
                let s = (dot(frequency, x) + phase).sin();
                frequency.iter().map(|w| -w * s).collect()
            }
            TestFunction::Constant { dim, .. } => vec![0.0; *dim],
            TestFunction::Linear { slope, .. } => slope.clone(),
            TestFunction::Quadratic { scale, center } => x
                .iter()
                .zip(center)
                .map(|(a, c)| 2.0 * scale * (a - c))
                .collect(),
        }
    }

    /// Second directional derivative `v^T D^2 f(x) v`.
    pub fn hessian_quadratic_form(&self, x: &[f64], v: &[f64]) -> f64 {
        match self {
            TestFunction::Gaussian { center, width } => {
                let y = diff(x, center);
                let w2 = width * width;
                let yv = dot(&y, v);
                self.eval(x) * (4.0 * yv * yv / (w2 * w2) - 2.0 * norm2(v) / w2)
            }
            TestFunction::ModulatedGaussian {
                center,
                width,
                frequency,
            } => {
                // f = Re(e^{i omega.y} g(y)) with g Gaussian; differentiate the complex form.
                let y = diff(x, center);
                let w2 = width * width;
                let g = (-norm2(&y) / w2).exp();
                let a = Complex64::new(-2.0 * dot(&y, v) / w2, dot(frequency, v));
                let h = g
                    * Complex64::from_polar(1.0, dot(frequency, &y))
                    * (a * a - 2.0 * norm2(v) / w2);
                h.re
            }
            TestFunction::Cosine { frequency, phase } => {
                let wv = dot(frequency, v);
                -wv * wv * (dot(frequency, x) + phase).cos()
            }
            TestFunction::Constant { .. } | TestFunction::Linear { .. } => 0.0,
            TestFunction::Quadratic { scale, .. } => 2.0 * scale * norm2(v),
        }
    }

    pub fn laplacian(&self, x: &[f64]) -> f64 {
        let d = self.dim();
        (0..d)
            .map(|k| {
                let mut e = vec![0.0; d];
                e[k] = 1.0;
                self.hessian_quadratic_form(x, &e)
            })
            .sum()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.gradient(&[x])[0]
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        self.hessian_quadratic_form(&[x], &[1.0])
    }

    /// Bound on the operator norm of the Hessian over R^d.
    pub fn hessian_bound(&self) -> f64 {
        match self {
            TestFunction::Gaussian { width, .. } => 2.0 / (width * width),
            TestFunction::ModulatedGaussian {
                width, frequency, ..
            } => {
                let w = norm2(frequency).sqrt();
                2.0 / (width * width) + w * w + 4.0 * w / width
            }
            TestFunction::Cosine { frequency, .. } => norm2(frequency),
            TestFunction::Constant { .. } | TestFunction::Linear { .. } => 0.0,
            TestFunction::Quadratic { scale, .. } => 2.0 * scale.abs(),
        }
    }

    /// `f^(xi) = int e^{i xi.x} f(x) dx` in closed form, when it exists.
    pub fn fourier(&self, xi: &[f64]) -> Option<Complex64> {
        match self {
            TestFunction::Gaussian { center, width } => {
                let d = center.len() as i32;
                let mag = (std::f64::consts::PI.sqrt() * width).powi(d)
                    * (-width * width * norm2(xi) / 4.0).exp();
                Some(Complex64::from_polar(mag, dot(xi, center)))
            }
            TestFunction::ModulatedGaussian {
                center,
                width,
                frequency,
            } => {
                let d = center.len() as i32;
                let base = (std::f64::consts::PI.sqrt() * width).powi(d);
                let plus: Vec<f64> = xi.iter().zip(frequency).map(|(a, b)| a + b).collect();
                let minus = diff(xi, frequency);
                let w2 = width * width;
                let mag = 0.5
                    * base
                    * ((-w2 * norm2(&plus) / 4.0).exp() + (-w2 * norm2(&minus) / 4.0).exp());
                Some(Complex64::from_polar(mag, dot(xi, center)))
            }
            _ => None,
        }
    }

    /// Heat semigroup `T_s f = e^{s Laplacian} f` evaluated at `x`.
    pub fn heat(&self, s: f64, x: &[f64]) -> Option<f64> {
        let d = self.dim() as f64;
        match self {
            TestFunction::Gaussian { center, width } => {
                let w2 = width * width;
                let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
                Some((w2 / (w2 + 4.0 * s)).powf(0.5 * d) * (-r2 / (w2 + 4.0 * s)).exp())
            }
            TestFunction::ModulatedGaussian {
                center,
                width,
                frequency,
            } => {
                // Complete the square: the modulation shifts the center to i omega w^2 / 2.
                let w2 = width * width;
                let den = w2 + 4.0 * s;
                let mut q = Complex64::new(0.0, 0.0);
                for ((xk, ck), wk) in x.iter().zip(center).zip(frequency) {
                    let z = Complex64::new(xk - ck, -0.5 * wk * w2);
                    q += z * z;
                }
                let v = (w2 / den).powf(0.5 * d)
                    * (-norm2(frequency) * w2 / 4.0).exp()
                    * (-q / den).exp();
                Some(v.re)
            }
            TestFunction::Cosine { frequency, phase } => {
                Some((-s * norm2(frequency)).exp() * (dot(frequency, x) + phase).cos())
            }
            TestFunction::Constant { value, .. } => Some(*value),
            TestFunction::Linear { .. } => Some(self.eval(x)),
            TestFunction::Quadratic { scale, .. } => Some(self.eval(x) + 2.0 * scale * d * s),
        }
    }

    /// Raw moments `int x^k f(x) dx`, `k = 0..=k_max`, for one-dimensional
    /// decaying functions.
    pub fn moments(&self, k_max: usize) -> Option<Vec<f64>> {
        if self.dim() != 1 {
            return None;
        }
        let (c, w, om) = match self {
            TestFunction::Gaussian { center, width } => (center[0], *width, 0.0),
            TestFunction::ModulatedGaussian {
                center,
                width,
                frequency,
            } => (center[0], *width, frequency[0]),
            _ => return None,
        };
        // f = Re[e^{i om y} e^{-y^2/w^2}], y = x - c: a Gaussian of variance
        // w^2/2 centred at c + i om w^2/2, with mass sqrt(pi) w e^{-om^2 w^2/4}.
        let mass = std::f64::consts::PI.sqrt() * w * (-om * om * w * w / 4.0).exp();
        let m = Complex64::new(c, 0.5 * om * w * w);
        let var = 0.5 * w * w;
        let mut out = Vec::with_capacity(k_max + 1);
        let mut prev2 = Complex64::new(0.0, 0.0);
        let mut prev = Complex64::new(1.0, 0.0);
        out.push(mass);
        for k in 1..=k_max {
            let cur = m * prev + (k as f64 - 1.0) * var * prev2;
            out.push(mass * cur.re);
            prev2 = prev;
            prev = cur;
        }
        Some(out)
    }

    /// `x -> f(x - a)`.
    pub fn translated(&self, a: &[f64]) -> Self {
        let shift = |c: &[f64]| c.iter().zip(a).map(|(x, y)| x + y).collect::<Vec<_>>();
        match self {
            TestFunction::Gaussian { center, width } => TestFunction::Gaussian {
                center: shift(center),
                width: *width,
            },
            TestFunction::ModulatedGaussian {
                center,
                width,
                frequency,
            } => TestFunction::ModulatedGaussian {
                center: shift(center),
                width: *width,
                frequency: frequency.clone(),
            },
            TestFunction::Cosine { frequency, phase } => TestFunction::Cosine {
                frequency: frequency.clone(),
                phase: phase - dot(frequency, a),
            },
            TestFunction::Constant { .. } => self.clone(),
            TestFunction::Linear { slope, intercept } => TestFunction::Linear {
                slope: slope.clone(),
                intercept: intercept - dot(slope, a),
            },
            TestFunction::Quadratic { scale, center } => TestFunction::Quadratic {
                scale: *scale,
                center: shift(center),
            },
        }
    }

    /// `x -> f(-x)`.
    pub fn reflected(&self) -> Self {
        let neg = |c: &[f64]| c.iter().map(|x| -x).collect::<Vec<_>>();
        match self {
            TestFunction::Gaussian { center, width } => TestFunction::Gaussian {
                center: neg(center),
                width: *width,
            },
            TestFunction::ModulatedGaussian {
                center,
                width,
                frequency,
            } => TestFunction::ModulatedGaussian {
                center: neg(center),
                width: *width,
                frequency: frequency.clone(),
            },
            TestFunction::Cosine { frequency, phase } => TestFunction::Cosine {
                frequency: neg(frequency),
                phase: *phase,
            },
            TestFunction::Constant { .. } => self.clone(),
            TestFunction::Linear { slope, intercept } => TestFunction::Linear {
                slope: neg(slope),
                intercept: *intercept,
            },
            TestFunction::Quadratic { scale, center } => TestFunction::Quadratic {
                scale: *scale,
                center: neg(center),
            },
        }
    }
}
