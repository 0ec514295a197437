//! Grid Fourier transform of an operator output against its multiplier.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fractional::{frac_laplacian_constant, riesz_sigma, weyl_constant};
use super::result::Operator;
use super::test_function::TestFunction;
use crate::error::{Error, Result};
use crate::numerics::grid::Grid1D;
use crate::numerics::quadrature::{integrate_fourier_tail, QuadratureSpec};
use crate::numerics::special::{gamma_fn, gauss_legendre};

/// Layout of the spatial quadrature behind the check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Spatial half-width `L`; outside `[-L, L]` the far-field expansion is used.
    pub half_width: f64,
    /// Width of each Gauss-Legendre panel.
    pub panel: f64,
    pub nodes_per_panel: usize,
    /// Terms of the far-field expansion.
    pub tail_terms: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            half_width: 16.0,
            panel: 0.5,
            nodes_per_panel: 16,
            tail_terms: 14,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierCheck {
    pub xi: Vec<f64>,
    /// Transform of the sampled operator output.
    pub computed: Vec<Complex64>,
    /// Multiplier times the closed-form transform.
    pub expected: Vec<Complex64>,
    pub sup_error: f64,
}

/// Far-field law `g(x) ~ A sum_k c_k |x|^{-s-k}` of an operator output on
/// each side, for decaying one-dimensional test functions.
struct FarField {
    amplitude_right: f64,
    amplitude_left: f64,
    order: f64,
}

fn far_field(op: &Operator) -> Result<FarField> {
    Ok(match op {
        Operator::WeylLeft { alpha } => FarField {
            amplitude_right: -weyl_constant(*alpha)?,
            amplitude_left: 0.0,
            order: alpha + 1.0,
        },
        Operator::WeylRight { alpha } => FarField {
            amplitude_right: 0.0,
            amplitude_left: -weyl_constant(*alpha)?,
            order: alpha + 1.0,
        },
        Operator::Riesz { beta } => {
            let a = -0.5 * riesz_sigma(*beta)? * beta / gamma_fn(1.0 - beta)?;
            FarField {
                amplitude_right: a,
                amplitude_left: a,
                order: beta + 1.0,
            }
        }
        Operator::FracLaplacian { alpha }
        | Operator::Bochner { alpha }
        | Operator::FracMultiplier { alpha } => {
            let a = frac_laplacian_constant(*alpha, 1)?;
            FarField {
                amplitude_right: a,
                amplitude_left: a,
                order: 2.0 * alpha + 1.0,
            }
        }
        _ => {
            return Err(Error::invalid(format!(
                "no multiplier check for operator {}",
                op.name()
            )))
        }
    })
}

/// Compares the Fourier transform of `x -> OP(f)(x)` with `m(xi) f^(xi)`.
///
/// The transform is a Gauss-Legendre sum over `[-L, L]` plus the transform
/// of the far-field expansion built from the moments of `f`.
pub fn multiplier_check(
    op: &Operator,
    f: &TestFunction,
    xi: &Grid1D,
    cfg: &CheckConfig,
) -> Result<MultiplierCheck> {
    if f.dim() != 1 || !f.is_decaying() {
        return Err(Error::invalid(
            "the multiplier check needs a one-dimensional Gaussian-family function",
        ));
    }
    let ff = far_field(op)?;
    let moments = f
        .moments(cfg.tail_terms)
        .ok_or_else(|| Error::invalid("test function has no moments"))?;
    let l = cfg.half_width;
    let n_panels = (2.0 * l / cfg.panel).round().max(1.0) as usize;
    let h = 2.0 * l / n_panels as f64;
    let (gx, gw) = gauss_legendre(cfg.nodes_per_panel);
    let mut nodes = Vec::with_capacity(n_panels * gx.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for p in 0..n_panels {
        let a = -l + p as f64 * h;
        for (x, w) in gx.iter().zip(&gw) {
            nodes.push(a + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    let values = nodes
        .par_iter()
        .map(|x| op.apply(f, &[*x]).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;

    // c_k = (s)_k / k! m_k on the right, (-1)^k of that on the left.
    let s = ff.order;
    let mut coef = Vec::with_capacity(moments.len());
    let mut poch = 1.0;
    for (k, m) in moments.iter().enumerate() {
        if k > 0 {
            poch *= (s + k as f64 - 1.0) / k as f64;
        }
        coef.push(poch * m);
    }
    let series = |u: f64, sign: f64| -> f64 {
        let mut acc = 0.0;
        let mut pow = u.powf(-s);
        let mut sg = 1.0;
        for c in &coef {
            acc += sg * c * pow;
            pow /= u;
            sg *= sign;
        }
        acc
    };
    let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-11);

    let pts = xi.points().to_vec();
    let rows = pts
        .par_iter()
        .map(|&w| -> Result<(Complex64, Complex64)> {
            let mut acc = Complex64::new(0.0, 0.0);
            for ((x, wt), v) in nodes.iter().zip(&weights).zip(&values) {
                acc += Complex64::from_polar(wt * v, w * x);
            }
            for (amp, sign, dir) in [
                (ff.amplitude_right, 1.0, 1.0),
                (ff.amplitude_left, -1.0, -1.0),
            ] {
                if amp == 0.0 {
                    continue;
                }
                let g = |u: f64| amp * series(u, sign);
                if w == 0.0 {
                    let mut tail = 0.0;
                    let mut sg = 1.0;
                    for (k, c) in coef.iter().enumerate() {
                        let e = s + k as f64 - 1.0;
                        tail += sg * c * l.powf(-e) / e;
                        sg *= sign;
                    }
                    acc += amp * tail;
                } else {
                    let (t, _) = integrate_fourier_tail(g, l, dir * w, &spec)?;
                    acc += t;
                }
            }
            let m = op
                .multiplier(w)
                .ok_or_else(|| Error::invalid("operator has no multiplier"))?;
            let hat = f.fourier(&[w]).unwrap_or_default();
            Ok((acc, m * hat))
        })
        .collect::<Result<Vec<_>>>()?;
    let computed: Vec<Complex64> = rows.iter().map(|r| r.0).collect();
    let expected: Vec<Complex64> = rows.iter().map(|r| r.1).collect();
    let sup_error = computed
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(MultiplierCheck {
        xi: pts,
        computed,
        expected,
        sup_error,
    })
}
