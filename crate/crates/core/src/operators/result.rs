//! Operator tags and evaluated operator grids.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fractional::{
    frac_laplacian_estimate, riesz_derivative_estimate, weyl_left_estimate, weyl_right_estimate,
};
use super::generator::{cp_generator_apply_estimate, GeneratorForm};
use super::multiplier::{
    bochner_subordinate_heat_estimate, fractional_power_symbol, multiplier_apply_estimate,
};
use super::test_function::TestFunction;
use crate::error::{Error, Result};
use crate::io::write_csv;
use crate::numerics::grid::GridD;
use crate::numerics::quadrature::Estimate;
use crate::sampling::law::JumpLaw;
use crate::symbols::pareto::minus_i_xi_pow;
use crate::symbols::spec::SymbolSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Operator {
    WeylLeft {
        alpha: f64,
    },
    WeylRight {
        alpha: f64,
    },
    Riesz {
        beta: f64,
    },
    /// Second-difference singular integral for `-(-Laplacian)^alpha`.
    FracLaplacian {
        alpha: f64,
    },
    /// Subordinated heat semigroup, also `-(-Laplacian)^alpha`.
    Bochner {
        alpha: f64,
    },
    /// Multiplier inversion with `Phi = |xi|^{2 alpha}`.
    FracMultiplier {
        alpha: f64,
    },
    /// Multiplier inversion with the symbol of a jump process.
    Symbol {
        symbol: SymbolSpec,
    },
    Generator {
        law: JumpLaw,
        lambda: f64,
        form: GeneratorForm,
    },
}

impl Operator {
    pub fn name(&self) -> &'static str {
        match self {
            Operator::WeylLeft { .. } => "weyl_left",
            Operator::WeylRight { .. } => "weyl_right",
            Operator::Riesz { .. } => "riesz",
            Operator::FracLaplacian { .. } => "frac_laplacian",
            Operator::Bochner { .. } => "bochner",
            Operator::FracMultiplier { .. } => "frac_multiplier",
            Operator::Symbol { .. } => "symbol",
            Operator::Generator { .. } => "generator",
        }
    }

    /// Whether the operator is only defined on the line.
    pub fn one_dimensional(&self) -> bool {
        matches!(
            self,
            Operator::WeylLeft { .. }
                | Operator::WeylRight { .. }
                | Operator::Riesz { .. }
                | Operator::Generator { .. }
        )
    }

    pub fn apply(&self, f: &TestFunction, x: &[f64]) -> Result<Estimate> {
        if x.len() != f.dim() {
            return Err(Error::ShapeMismatch {
                expected: f.dim(),
                found: x.len(),
            });
        }
        if self.one_dimensional() && x.len() != 1 {
            return Err(Error::ShapeMismatch {
                expected: 1,
                found: x.len(),
            });
        }
        match self {
            Operator::WeylLeft { alpha } => weyl_left_estimate(f, *alpha, x[0]),
            Operator::WeylRight { alpha } => weyl_right_estimate(f, *alpha, x[0]),
            Operator::Riesz { beta } => riesz_derivative_estimate(f, *beta, x[0]),
            Operator::FracLaplacian { alpha } => frac_laplacian_estimate(f, *alpha, x),
            Operator::Bochner { alpha } => bochner_subordinate_heat_estimate(f, *alpha, x),
            Operator::FracMultiplier { alpha } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::invalid(format!(
                        "alpha = {alpha} must lie in (0, 1)"
                    )));
                }
                multiplier_apply_estimate(f, fractional_power_symbol(*alpha), x)
            }
            Operator::Symbol { symbol } => {
                symbol.validate()?;
                if symbol.d != f.dim() {
                    return Err(Error::ShapeMismatch {
                        expected: symbol.d,
                        found: f.dim(),
                    });
                }
                multiplier_apply_estimate(
                    f,
                    |xi: &[f64]| symbol.eval(xi).unwrap_or(Complex64::new(f64::NAN, 0.0)),
                    x,
                )
            }
            Operator::Generator { law, lambda, form } => {
                cp_generator_apply_estimate(f, x[0], law, *lambda, *form)
            }
        }
    }

    /// Fourier multiplier `m` with `(OP f)^ = m f^`, for the fractional operators.
    pub fn multiplier(&self, xi: f64) -> Option<Complex64> {
        let frac = |a: f64| Complex64::new(-(xi.abs().powf(2.0 * a)), 0.0);
        match self {
            Operator::WeylLeft { alpha } => Some(minus_i_xi_pow(xi, *alpha)),
            Operator::WeylRight { alpha } => Some(minus_i_xi_pow(-xi, *alpha)),
            Operator::Riesz { beta } => Some(Complex64::new(xi.abs().powf(*beta), 0.0)),
            Operator::FracLaplacian { alpha }
            | Operator::Bochner { alpha }
            | Operator::FracMultiplier { alpha } => Some(frac(*alpha)),
            Operator::Symbol { symbol } => symbol.eval(&[xi]).ok().map(|v| -v),
            Operator::Generator { .. } => None,
        }
    }

    /// Evaluates the operator at every grid point.
    pub fn apply_grid(&self, f: &TestFunction, grid: &GridD) -> Result<OperatorResult> {
        if grid.dim() != f.dim() {
            return Err(Error::ShapeMismatch {
                expected: f.dim(),
                found: grid.dim(),
            });
        }
        let pts: Vec<&[f64]> = grid.iter().collect();
        let est = pts
            .par_iter()
            .map(|x| self.apply(f, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(OperatorResult {
            operator: self.clone(),
            function: f.clone(),
            dim: grid.dim(),
            grid: pts.iter().flat_map(|p| p.iter().copied()).collect(),
            values: est.iter().map(|e| e.value).collect(),
            errors: est.iter().map(|e| e.error.abs()).collect(),
        })
    }
}

/// Operator values on a grid with per-point error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorResult {
    pub operator: Operator,
    pub function: TestFunction,
    pub dim: usize,
    /// Row-major evaluation points.
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

impl OperatorResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.grid[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_csv(&self, comment: Option<&str>) -> String {
        let mut header: Vec<String> = if self.dim == 1 {
            vec!["x".into()]
        } else {
            (1..=self.dim).map(|k| format!("x{k}")).collect()
        };
        header.push("value".into());
        header.push("error".into());
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = (0..self.len()).map(|i| {
            let mut r = self.point(i).to_vec();
            r.push(self.values[i]);
            r.push(self.errors[i]);
            r
        });
        write_csv(comment, &refs, rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.len())
            .map(|i| serde_json::json!({ "x": self.point(i), "value": self.values[i], "error": self.errors[i] }))
            .collect();
        serde_json::json!({
            "operator": self.operator,
            "function": self.function,
            "dim": self.dim,
            "values": rows,
        })
    }
}
