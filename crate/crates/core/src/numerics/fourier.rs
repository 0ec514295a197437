//! Direct-summation Fourier transforms, `f^(xi) = int e^{i xi.x} f(x) dx`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{Grid1D, GridD};
use crate::error::{Error, Result};

/// Transform values together with a note when the sampled function is not
/// negligible at the edge of its grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub values: Vec<Complex64>,
    /// Largest |f| on the grid boundary relative to max |f|.
    pub edge_mass: f64,
    pub extent_warning: Option<String>,
}

/// Relative edge magnitude above which a transform is flagged.
pub const EDGE_TOLERANCE: f64 = 1e-12;

/// `sum_k w_k f_k e^{i xi x_k}` at every frequency.
pub fn fourier_sum(
    nodes: &[f64],
    weights: &[f64],
    values: &[f64],
    xi: &[f64],
) -> Result<Vec<Complex64>> {
    if nodes.len() != weights.len() || nodes.len() != values.len() {
        return Err(Error::ShapeMismatch {
            expected: nodes.len(),
            found: values.len().min(weights.len()),
        });
    }
    Ok(xi
        .par_iter()
        .map(|&k| {
            let mut re = 0.0;
            let mut im = 0.0;
            for ((x, w), f) in nodes.iter().zip(weights).zip(values) {
                let (s, c) = (k * x).sin_cos();
                re += w * f * c;
                im += w * f * s;
            }
            Complex64::new(re, im)
        })
        .collect())
}

fn edge_check(values: &[f64], edge: impl Iterator<Item = f64>) -> (f64, Option<String>) {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = edge.fold(0.0f64, |m, v| m.max(v.abs()));
    let ratio = if peak > 0.0 { edge / peak } else { 0.0 };
    let warn = (ratio > EDGE_TOLERANCE).then(|| {
        format!("function is {ratio:.3e} of its peak at the grid boundary; widen the grid")
    });
    (ratio, warn)
}

/// Trapezoid-rule transform of samples on a 1-d grid.
pub fn fourier_transform_grid(x: &Grid1D, values: &[f64], xi: &Grid1D) -> Result<Transform> {
    if x.len() != values.len() {
        return Err(Error::ShapeMismatch {
            expected: x.len(),
            found: values.len(),
        });
    }
    let w = x.trapezoid_weights();
    let out = fourier_sum(x.points(), &w, values, xi.points())?;
    let (edge_mass, extent_warning) =
        edge_check(values, [values[0], values[values.len() - 1]].into_iter());
    Ok(Transform {
        values: out,
        edge_mass,
        extent_warning,
    })
}

/// Trapezoid-rule transform of samples on a tensor grid in R^d.
pub fn fourier_transform_tensor(x: &GridD, values: &[f64], xi: &GridD) -> Result<Transform> {
    let axes = x
        .axes()
        .ok_or_else(|| Error::invalid("sampled d-dimensional transform needs a tensor grid"))?;
    if x.len() != values.len() {
        return Err(Error::ShapeMismatch {
            expected: x.len(),
            found: values.len(),
        });
    }
    if x.dim() != xi.dim() {
        return Err(Error::ShapeMismatch {
            expected: x.dim(),
            found: xi.dim(),
        });
    }
    let axis_w: Vec<Vec<f64>> = axes.iter().map(Grid1D::trapezoid_weights).collect();
    let dim = x.dim();
    let mut weights = Vec::with_capacity(x.len());
    let mut on_edge = Vec::new();
    let mut idx = vec![0usize; dim];
    for v in values {
        weights.push((0..dim).map(|k| axis_w[k][idx[k]]).product::<f64>());
        if (0..dim).any(|k| idx[k] == 0 || idx[k] + 1 == axes[k].len()) {
            on_edge.push(*v);
        }
        for k in (0..dim).rev() {
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    let out: Vec<Complex64> = xi
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, p) in x.iter().enumerate() {
                let phase: f64 = k.iter().zip(p).map(|(a, b)| a * b).sum();
                acc += Complex64::from_polar(weights[j] * values[j], phase);
            }
            acc
        })
        .collect();
    let (edge_mass, extent_warning) = edge_check(values, on_edge.into_iter());
    Ok(Transform {
        values: out,
        edge_mass,
        extent_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_transform() {
        let x = Grid1D::uniform(-12.0, 12.0, 801).unwrap();
        let f: Vec<f64> = x.points().iter().map(|x| (-x * x).exp()).collect();
        let xi = Grid1D::from_points(vec![0.0, 2.0]).unwrap();
        let t = fourier_transform_grid(&x, &f, &xi).unwrap();
        assert!((t.values[0].re - PI.sqrt()).abs() < 1e-12);
        assert!((t.values[1].re - PI.sqrt() * (-1f64).exp()).abs() < 1e-12);
        assert!(t.values.iter().all(|v| v.im.abs() < 1e-13));
        assert!(t.extent_warning.is_none());
    }

    #[test]
    fn narrow_grid_warns() {
        let x = Grid1D::uniform(-1.0, 1.0, 101).unwrap();
        let f: Vec<f64> = x.points().iter().map(|x| (-x * x).exp()).collect();
        let xi = Grid1D::from_points(vec![0.0]).unwrap();
        assert!(fourier_transform_grid(&x, &f, &xi)
            .unwrap()
            .extent_warning
            .is_some());
    }

    #[test]
    fn tensor_gaussian() {
        let ax = Grid1D::uniform(-8.0, 8.0, 121).unwrap();
        let x = GridD::tensor(vec![ax.clone(), ax]).unwrap();
        let f: Vec<f64> = x
            .iter()
            .map(|p| (-(p[0] * p[0] + p[1] * p[1])).exp())
            .collect();
        let xi = GridD::from_points(2, vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let t = fourier_transform_tensor(&x, &f, &xi).unwrap();
        assert!((t.values[0].re - PI).abs() < 1e-10);
        assert!((t.values[1].re - PI * (-0.5f64).exp()).abs() < 1e-10);
    }
}
