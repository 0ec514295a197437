//! Symbol specifications and evaluated symbol grids.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pareto::{
    constant_c1, symbol_thm1_limit, symbol_thm1_pre, symbol_thm2_limit, symbol_thm2_pre,
};
use super::student::{constant_cd, student_constant, symbol_thm3_limit, symbol_thm3_pre, MAX_DIM};
use crate::error::{Error, Result};
use crate::io::{parse_csv, write_csv};
use crate::numerics::grid::GridD;
use crate::numerics::special::gamma_fn;
use crate::sampling::law::check_skew;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// One-sided Pareto jumps, limit a difference of stable subordinators.
    Thm1,
    /// Symmetric Pareto jumps, symmetric stable limit.
    Thm2,
    /// Student-type jumps in R^d, isotropic stable limit of index 2 alpha.
    Thm3,
}

impl Theorem {
    pub fn number(self) -> u8 {
        match self {
            Theorem::Thm1 => 1,
            Theorem::Thm2 => 2,
            Theorem::Thm3 => 3,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Theorem::Thm1),
            2 => Ok(Theorem::Thm2),
            3 => Ok(Theorem::Thm3),
            _ => Err(Error::invalid(format!(
                "theorem must be 1, 2 or 3, got {n}"
            ))),
        }
    }

    /// Admissible tail-index range `(0, hi)`.
    pub fn alpha_upper(self) -> f64 {
        match self {
            Theorem::Thm2 => 2.0,
            Theorem::Thm1 | Theorem::Thm3 => 1.0,
        }
    }
}

/// A symbol: pre-limit when `gamma` is present, the limit otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub theorem: Theorem,
    pub alpha: f64,
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    pub gamma: Option<f64>,
    pub d: usize,
}

impl SymbolSpec {
    pub fn thm1(alpha: f64, lambda: f64, p: f64, q: f64, gamma: Option<f64>) -> Self {
        Self {
            theorem: Theorem::Thm1,
            alpha,
            lambda,
            p,
            q,
            gamma,
            d: 1,
        }
    }

    pub fn thm2(alpha: f64, lambda: f64, gamma: Option<f64>) -> Self {
        Self {
            theorem: Theorem::Thm2,
            alpha,
            lambda,
            p: 0.5,
            q: 0.5,
            gamma,
            d: 1,
        }
    }

    pub fn thm3(alpha: f64, lambda: f64, d: usize, gamma: Option<f64>) -> Self {
        Self {
            theorem: Theorem::Thm3,
            alpha,
            lambda,
            p: 0.5,
            q: 0.5,
            gamma,
            d,
        }
    }

    pub fn limit(&self) -> Self {
        Self {
            gamma: None,
            ..*self
        }
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self {
            gamma: Some(gamma),
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let hi = self.theorem.alpha_upper();
        if !(self.alpha > 0.0 && self.alpha < hi) {
            return Err(Error::invalid(format!(
                "theorem {} requires alpha in (0, {hi}), got {}",
                self.theorem.number(),
                self.alpha
            )));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "lambda = {} must be positive",
                self.lambda
            )));
        }
        check_skew(self.p, self.q)?;
        if self.theorem == Theorem::Thm2 && (self.p != 0.5 || self.q != 0.5) {
            return Err(Error::invalid(format!(
                "theorem 2 requires symmetric jumps p = q = 1/2, got p={}, q={}",
                self.p, self.q
            )));
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::invalid(format!("gamma = {g} must be positive")));
            }
        }
        let dim_ok = match self.theorem {
            Theorem::Thm3 => (1..=MAX_DIM).contains(&self.d),
            _ => self.d == 1,
        };
        if !dim_ok {
            return Err(Error::invalid(format!(
                "theorem {} does not support dimension d = {}",
                self.theorem.number(),
                self.d
            )));
        }
        Ok(())
    }

    /// Index of the limiting stable law.
    pub fn stable_index(&self) -> f64 {
        match self.theorem {
            Theorem::Thm3 => 2.0 * self.alpha,
            _ => self.alpha,
        }
    }

    /// Time change `t -> t*` of the limit.
    pub fn time_map(&self, t: f64) -> Result<f64> {
        let c = match self.theorem {
            Theorem::Thm1 => self.lambda * gamma_fn(1.0 - self.alpha)?,
            Theorem::Thm2 => self.alpha * self.lambda * constant_c1(self.alpha)?,
            Theorem::Thm3 => {
                self.lambda
                    * student_constant(self.alpha, self.d)?
                    * constant_cd(self.alpha, self.d)?
            }
        };
        Ok(c * t)
    }

    /// `Phi(xi)` at one frequency.
    pub fn eval(&self, xi: &[f64]) -> Result<Complex64> {
        if xi.len() != self.d {
            return Err(Error::ShapeMismatch {
                expected: self.d,
                found: xi.len(),
            });
        }
        let real = |v: f64| Complex64::new(v, 0.0);
        match (self.theorem, self.gamma) {
            (Theorem::Thm1, Some(g)) => {
                symbol_thm1_pre(xi[0], self.alpha, g, self.lambda, self.p, self.q)
            }
            (Theorem::Thm1, None) => {
                symbol_thm1_limit(xi[0], self.alpha, self.lambda, self.p, self.q)
            }
            (Theorem::Thm2, Some(g)) => {
                symbol_thm2_pre(xi[0], self.alpha, g, self.lambda).map(real)
            }
            (Theorem::Thm2, None) => symbol_thm2_limit(xi[0], self.alpha, self.lambda).map(real),
            (Theorem::Thm3, Some(g)) => {
                symbol_thm3_pre(xi, self.alpha, g, self.lambda, self.d).map(real)
            }
            (Theorem::Thm3, None) => {
                symbol_thm3_limit(xi, self.alpha, self.lambda, self.d).map(real)
            }
        }
    }

    /// `exp(-t Phi(xi))`: the characteristic function of the process at time `t`.
    pub fn cf(&self, xi: &[f64], t: f64) -> Result<Complex64> {
        Ok((-t * self.eval(xi)?).exp())
    }

    pub fn evaluate(&self, grid: &GridD) -> Result<SymbolGrid> {
        self.validate()?;
        if grid.dim() != self.d {
            return Err(Error::ShapeMismatch {
                expected: self.d,
                found: grid.dim(),
            });
        }
        let pts: Vec<&[f64]> = grid.iter().collect();
        let values = pts
            .par_iter()
            .map(|xi| self.eval(xi))
            .collect::<Result<Vec<_>>>()?;
        Ok(SymbolGrid {
            spec: Some(*self),
            dim: self.d,
            xi: pts.iter().flat_map(|p| p.iter().copied()).collect(),
            values,
        })
    }
}

/// Frequencies with their symbol values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolGrid {
    /// Absent when decoded from CSV.
    pub spec: Option<SymbolSpec>,
    pub dim: usize,
    /// Row-major frequencies.
    pub xi: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl SymbolGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.xi[i * self.dim..(i + 1) * self.dim]
    }

    fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = if self.dim == 1 {
            vec!["xi".into()]
        } else {
            (1..=self.dim).map(|k| format!("xi{k}")).collect()
        };
        h.push("re".into());
        h.push("im".into());
        h
    }

    pub fn to_csv(&self, comment: Option<&str>) -> String {
        let header = self.header();
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = (0..self.len()).map(|i| {
            let mut r = self.point(i).to_vec();
            r.push(self.values[i].re);
            r.push(self.values[i].im);
            r
        });
        write_csv(comment, &refs, rows)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let table = parse_csv(text)?;
        let n = table.header.len();
        if n < 3 || table.header[n - 2] != "re" || table.header[n - 1] != "im" {
            return Err(Error::Parse {
                line: 1,
                message: "header must end with re,im".into(),
            });
        }
        let dim = n - 2;
        let mut xi = Vec::with_capacity(table.rows.len() * dim);
        let mut values = Vec::with_capacity(table.rows.len());
        for row in &table.rows {
            xi.extend_from_slice(&row[..dim]);
            values.push(Complex64::new(row[dim], row[dim + 1]));
        }
        Ok(Self {
            spec: None,
            dim,
            xi,
            values,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.len())
            .map(|i| serde_json::json!({ "xi": self.point(i), "re": self.values[i].re, "im": self.values[i].im }))
            .collect();
        serde_json::json!({ "spec": self.spec, "dim": self.dim, "values": rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::Grid1D;

    #[test]
    fn validation_ranges() {
        assert!(SymbolSpec::thm1(1.5, 1.0, 1.0, 0.0, None)
            .validate()
            .is_err());
        assert!(SymbolSpec::thm2(1.5, 1.0, None).validate().is_ok());
        let mut s = SymbolSpec::thm2(1.5, 1.0, None);
        s.p = 0.6;
        s.q = 0.4;
        assert!(s.validate().is_err());
        assert!(SymbolSpec::thm3(0.5, 1.0, 4, None).validate().is_err());
        assert!(SymbolSpec::thm1(0.5, 1.0, 0.7, 0.4, None)
            .validate()
            .is_err());
    }

    #[test]
    fn grid_round_trip() {
        let g: GridD = Grid1D::symmetric(5.0, 11).unwrap().into();
        let sg = SymbolSpec::thm1(0.5, 1.0, 1.0, 0.0, None)
            .evaluate(&g)
            .unwrap();
        assert_eq!(sg.values[5], Complex64::new(0.0, 0.0));
        let back = SymbolGrid::from_csv(&sg.to_csv(None)).unwrap();
        assert_eq!(back.values, sg.values);
        assert_eq!(back.xi, sg.xi);
    }

    #[test]
    fn time_maps() {
        let t = SymbolSpec::thm1(0.5, 1.0, 1.0, 0.0, None)
            .time_map(1.0)
            .unwrap();
        assert!((t - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        let t3 = SymbolSpec::thm3(0.5, 1.0, 2, None).time_map(1.0).unwrap();
        assert!((t3 - 1.0).abs() < 1e-9);
    }
}
