//! Sample grids for frequencies and evaluation points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing points on the line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    points: Vec<f64>,
    uniform: bool,
}

impl Grid1D {
    /// `n` equally spaced points from `a` to `b` inclusive.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid(format!(
                "uniform grid needs n >= 2 and a < b, got n={n}, [{a}, {b}]"
            )));
        }
        let h = (b - a) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| a + i as f64 * h).collect();
        points[n - 1] = b;
        Ok(Self {
            points,
            uniform: true,
        })
    }

    /// Symmetric grid of `n` points on `[-r, r]`.
    pub fn symmetric(r: f64, n: usize) -> Result<Self> {
        let mut g = Self::uniform(-r, r, n)?;
        // Mirror exactly so symmetry checks are not polluted by rounding.
        for i in 0..n / 2 {
            g.points[i] = -g.points[n - 1 - i];
        }
        if n % 2 == 1 {
            g.points[n / 2] = 0.0;
        }
        Ok(g)
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("grid must contain at least one point"));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("grid points must be finite"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("grid points must be strictly increasing"));
        }
        Ok(Self {
            points,
            uniform: false,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn spacing(&self) -> Option<f64> {
        (self.uniform && self.points.len() > 1).then(|| self.points[1] - self.points[0])
    }

    pub fn extent(&self) -> (f64, f64) {
        (self.points[0], *self.points.last().unwrap())
    }

    /// Trapezoid weights for the grid points.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.points.len();
        if n == 1 {
            return vec![0.0];
        }
        (0..n)
            .map(|i| {
                let left = if i > 0 {
                    self.points[i] - self.points[i - 1]
                } else {
                    0.0
                };
                let right = if i + 1 < n {
                    self.points[i + 1] - self.points[i]
                } else {
                    0.0
                };
                0.5 * (left + right)
            })
            .collect()
    }
}

/// Points in R^d, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridD {
    dim: usize,
    coords: Vec<f64>,
    /// Per-axis grids when this is a tensor product.
    axes: Option<Vec<Grid1D>>,
}

impl GridD {
    pub fn tensor(axes: Vec<Grid1D>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::invalid("tensor grid needs at least one axis"));
        }
        let dim = axes.len();
        let total: usize = axes.iter().map(Grid1D::len).product();
        let mut coords = Vec::with_capacity(total * dim);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            for (k, ax) in axes.iter().enumerate() {
                coords.push(ax.points()[idx[k]]);
            }
            for k in (0..dim).rev() {
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(Self {
            dim,
            coords,
            axes: Some(axes),
        })
    }

    /// Planar polar grid: every radius at every angle, radius-major.
    pub fn polar(radii: &Grid1D, angles: &[f64]) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::invalid("polar grid needs at least one angle"));
        }
        let mut coords = Vec::with_capacity(2 * radii.len() * angles.len());
        for &r in radii.points() {
            for &th in angles {
                coords.push(r * th.cos());
                coords.push(r * th.sin());
            }
        }
        Ok(Self {
            dim: 2,
            coords,
            axes: None,
        })
    }

    pub fn from_points(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::ShapeMismatch {
                expected: dim.max(1),
                found: coords.len(),
            });
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("grid points must be finite"));
        }
        Ok(Self {
            dim,
            coords,
            axes: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn axes(&self) -> Option<&[Grid1D]> {
        self.axes.as_deref()
    }
}

impl From<Grid1D> for GridD {
    fn from(g: Grid1D) -> Self {
        let coords = g.points().to_vec();
        Self {
            dim: 1,
            coords,
            axes: Some(vec![g]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_endpoints_and_spacing() {
        let g = Grid1D::uniform(-5.0, 5.0, 101).unwrap();
        assert_eq!(g.extent(), (-5.0, 5.0));
        assert!((g.spacing().unwrap() - 0.1).abs() < 1e-15);
        let s = Grid1D::symmetric(5.0, 101).unwrap();
        assert_eq!(s.points()[50], 0.0);
        assert_eq!(s.points()[10], -s.points()[90]);
    }

    #[test]
    fn rejects_unordered() {
        assert!(Grid1D::from_points(vec![0.0, 0.0]).is_err());
        assert!(Grid1D::from_points(vec![1.0, 0.5]).is_err());
        assert!(Grid1D::uniform(1.0, 0.0, 5).is_err());
    }

    #[test]
    fn tensor_layout() {
        let a = Grid1D::from_points(vec![0.0, 1.0]).unwrap();
        let b = Grid1D::from_points(vec![10.0, 20.0, 30.0]).unwrap();
        let g = GridD::tensor(vec![a, b]).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.point(1), &[0.0, 20.0]);
        assert_eq!(g.point(3), &[1.0, 10.0]);
    }

    #[test]
    fn trapezoid_weights_sum_to_length() {
        let g = Grid1D::uniform(0.0, 2.0, 9).unwrap();
        let s: f64 = g.trapezoid_weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-15);
    }
}
