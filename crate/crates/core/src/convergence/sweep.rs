//! Gamma sweeps: walk endpoints against the exact limit law at each scale.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{cf_sup_distance, empirical_cf, two_sample_band, two_sample_ks};
use crate::error::{Error, Result};
use crate::io::write_csv;
use crate::numerics::grid::{Grid1D, GridD};
use crate::sampling::batch::{sample_limit_batch, sample_walk_batch, LimitSpec, SampleBatch};
use crate::sampling::law::JumpLaw;
use crate::sampling::rng::derive_seed;
use crate::sampling::stable::thm1_time;
use crate::sampling::walk::WalkConfig;
use crate::symbols::spec::{SymbolSpec, Theorem};

pub const DEFAULT_XI_HALF_WIDTH: f64 = 5.0;
pub const DEFAULT_XI_POINTS: usize = 101;
pub const DEFAULT_KS_LEVEL: f64 = 0.99;

/// 101 uniform frequencies on `[-5, 5]`.
pub fn default_xi_grid() -> GridD {
    Grid1D::symmetric(DEFAULT_XI_HALF_WIDTH, DEFAULT_XI_POINTS)
        .expect("static grid")
        .into()
}

/// Frequencies for the multidimensional sweeps, radius-major: 51 radii on
/// `[0, 5]` times a fixed set of directions (8 angles in the plane, the 8
/// cube diagonals in space, `+-1` on the line).
pub fn radial_xi_grid(d: usize) -> Result<GridD> {
    let radii = Grid1D::uniform(0.0, DEFAULT_XI_HALF_WIDTH, 51)?;
    match d {
        1 => Ok(Grid1D::symmetric(DEFAULT_XI_HALF_WIDTH, DEFAULT_XI_POINTS)?.into()),
        2 => {
            let angles: Vec<f64> = (0..8).map(|k| k as f64 * PI / 4.0).collect();
            GridD::polar(&radii, &angles)
        }
        3 => {
            let s = 1.0 / 3f64.sqrt();
            let mut coords = Vec::with_capacity(3 * 8 * radii.len());
            for &r in radii.points() {
                for k in 0..8 {
                    for bit in 0..3 {
                        let sign = if k >> bit & 1 == 1 { -1.0 } else { 1.0 };
                        coords.push(sign * s * r);
                    }
                }
            }
            GridD::from_points(3, coords)
        }
        _ => Err(Error::invalid(format!("no radial grid for d = {d}"))),
    }
}

/// Number of directions per radius in [`radial_xi_grid`].
fn directions(d: usize) -> usize {
    match d {
        1 => 1,
        _ => 8,
    }
}

/// Largest angular RMS spread of `values` over a radius-major grid with
/// `k` directions per radius.
pub fn radial_deviation(values: &[Complex64], k: usize) -> Result<f64> {
    if k == 0 || values.is_empty() || values.len() % k != 0 {
        return Err(Error::ShapeMismatch {
            expected: k.max(1),
            found: values.len(),
        });
    }
    Ok(values
        .chunks_exact(k)
        .map(|ring| {
            let mean = ring.iter().sum::<Complex64>() / k as f64;
            (ring.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / k as f64).sqrt()
        })
        .fold(0.0, f64::max))
}

/// Empirical against theoretical characteristic function at one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcfReport {
    pub dim: usize,
    /// Row-major frequencies.
    pub xi: Vec<f64>,
    pub empirical: Vec<Complex64>,
    pub theoretical: Vec<Complex64>,
    pub sup_error: f64,
    pub n: usize,
    pub seed: u64,
    pub spec: SymbolSpec,
    pub t: f64,
}

impl EcfReport {
    /// Compares `batch` with `exp(-t Phi)` of `spec` on `grid`.
    pub fn compute(
        batch: &SampleBatch,
        spec: &SymbolSpec,
        t: f64,
        grid: &GridD,
        seed: u64,
    ) -> Result<Self> {
        let empirical = empirical_cf(batch, grid)?;
        let pts: Vec<&[f64]> = grid.iter().collect();
        let theoretical = pts
            .par_iter()
            .map(|xi| spec.cf(xi, t))
            .collect::<Result<Vec<_>>>()?;
        let sup_error = cf_sup_distance(&empirical, &theoretical)?;
        Ok(Self {
            dim: grid.dim(),
            xi: pts.iter().flat_map(|p| p.iter().copied()).collect(),
            empirical,
            theoretical,
            sup_error,
            n: batch.len(),
            seed,
            spec: *spec,
            t,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub n: usize,
    pub sup_cf_error: f64,
    /// Two-sample KS between walk and limit draws (first coordinate).
    pub ks: f64,
    pub ks_band: f64,
    /// Angular spread of the empirical CF, multidimensional sweeps only.
    pub radial_deviation: Option<f64>,
    /// Seconds; kept out of the serialized forms so they stay reproducible.
    #[serde(skip)]
    pub wall_time: f64,
    /// Error that stopped this row, if any; the numeric fields are then NaN.
    pub failure: Option<String>,
}

impl SweepRow {
    fn failed(gamma: f64, n: usize, err: &Error, wall_time: f64) -> Self {
        Self {
            gamma,
            n,
            sup_cf_error: f64::NAN,
            ks: f64::NAN,
            ks_band: f64::NAN,
            radial_deviation: None,
            wall_time,
            failure: Some(err.to_string()),
        }
    }

    pub fn ks_passes(&self) -> bool {
        self.ks <= self.ks_band
    }
}

/// A full sweep with the per-row ECF comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    /// Limit symbol the rows are compared with.
    pub spec: SymbolSpec,
    pub t: f64,
    pub n: usize,
    pub seed: u64,
    pub limit: LimitSpec,
    pub rows: Vec<SweepRow>,
    pub ecf: Vec<Option<EcfReport>>,
}

impl SweepReport {
    /// `err(gamma_{i+1}) <= err(gamma_i) + slack` for consecutive rows.
    pub fn cf_error_nonincreasing(&self, slack: f64) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].sup_cf_error <= w[0].sup_cf_error + slack)
    }

    pub fn last(&self) -> Option<&SweepRow> {
        self.rows.last()
    }

    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| r.failure.is_some())
    }

    /// One row per scale; `failed` is 1 when the numbers are missing.
    pub fn to_csv(&self, comment: Option<&str>) -> String {
        let header = [
            "gamma",
            "n",
            "sup_cf_error",
            "ks",
            "ks_band",
            "radial_deviation",
            "failed",
        ];
        let rows = self.rows.iter().map(|r| {
            vec![
                r.gamma,
                r.n as f64,
                r.sup_cf_error,
                r.ks,
                r.ks_band,
                r.radial_deviation.unwrap_or(f64::NAN),
                if r.failure.is_some() { 1.0 } else { 0.0 },
            ]
        });
        write_csv(comment, &header, rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("sweep report serializes")
    }
}

/// Walk law at scale `gamma` for a sweep.
fn walk_law(spec: &SymbolSpec, gamma: f64) -> Result<JumpLaw> {
    match spec.theorem {
        Theorem::Thm1 | Theorem::Thm2 => JumpLaw::pareto(spec.alpha, gamma, spec.p, spec.q),
        Theorem::Thm3 => JumpLaw::student(spec.alpha, gamma, spec.d),
    }
}

/// Exact sampler of the limit law at time `t`.
pub fn limit_sampler(spec: &SymbolSpec, t: f64) -> Result<LimitSpec> {
    spec.validate()?;
    Ok(match spec.theorem {
        Theorem::Thm1 if spec.q == 0.0 => LimitSpec::Subordinator {
            alpha: spec.alpha,
            t: thm1_time(spec.alpha, spec.lambda, t)?,
        },
        Theorem::Thm1 => LimitSpec::Thm1 {
            alpha: spec.alpha,
            p: spec.p,
            q: spec.q,
            lambda: spec.lambda,
            t,
        },
        Theorem::Thm2 => LimitSpec::Symmetric {
            beta: spec.alpha,
            t_star: spec.time_map(t)?,
        },
        Theorem::Thm3 => LimitSpec::Isotropic {
            beta: 2.0 * spec.alpha,
            t_star: spec.time_map(t)?,
            d: spec.d,
        },
    })
}

/// Runs a sweep for any theorem. Rows are independent and may run
/// concurrently; row `i` draws walks from `derive_seed(seed, 2i)` and the
/// limit from `derive_seed(seed, 2i + 1)`.
pub fn run_sweep(
    spec: &SymbolSpec,
    t: f64,
    gammas: &[f64],
    n: usize,
    seed: u64,
) -> Result<SweepReport> {
    let spec = spec.limit();
    spec.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time t = {t} must be positive")));
    }
    if gammas.is_empty() {
        return Err(Error::invalid("gamma list is empty"));
    }
    if let Some(g) = gammas.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(Error::invalid(format!("gamma = {g} must be positive")));
    }
    if gammas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("gamma list must be strictly decreasing"));
    }
    if n == 0 {
        return Err(Error::EmptyBatch);
    }
    let limit = limit_sampler(&spec, t)?;
    let grid = if spec.d == 1 {
        default_xi_grid()
    } else {
        radial_xi_grid(spec.d)?
    };
    let band = two_sample_band(DEFAULT_KS_LEVEL, n, n)?;

    let rows: Vec<(SweepRow, Option<EcfReport>)> = gammas
        .par_iter()
        .enumerate()
        .map(|(i, &gamma)| {
            let start = Instant::now();
            let walk_seed = derive_seed(seed, 2 * i as u64);
            let limit_seed = derive_seed(seed, 2 * i as u64 + 1);
            let row = || -> Result<(SweepRow, EcfReport)> {
                let cfg = WalkConfig::new(walk_law(&spec, gamma)?, spec.lambda, t, n, walk_seed);
                let walk = sample_walk_batch(&cfg)?;
                let exact = sample_limit_batch(&limit, n, limit_seed)?;
                let ecf = EcfReport::compute(&walk, &spec, t, &grid, walk_seed)?;
                let ks = two_sample_ks(&walk.column(0), &exact.column(0))?;
                let radial = if spec.d > 1 {
                    Some(radial_deviation(&ecf.empirical, directions(spec.d))?)
                } else {
                    None
                };
                Ok((
                    SweepRow {
                        gamma,
                        n,
                        sup_cf_error: ecf.sup_error,
                        ks,
                        ks_band: band,
                        radial_deviation: radial,
                        wall_time: 0.0,
                        failure: None,
                    },
                    ecf,
                ))
            };
            match row() {
                Ok((mut r, ecf)) => {
                    r.wall_time = start.elapsed().as_secs_f64();
                    (r, Some(ecf))
                }
                Err(e) => (
                    SweepRow::failed(gamma, n, &e, start.elapsed().as_secs_f64()),
                    None,
                ),
            }
        })
        .collect();
    let (rows, ecf) = rows.into_iter().unzip();
    Ok(SweepReport {
        spec,
        t,
        n,
        seed,
        limit,
        rows,
        ecf,
    })
}

pub fn run_sweep_thm1(
    alpha: f64,
    p: f64,
    q: f64,
    lambda: f64,
    t: f64,
    gammas: &[f64],
    n: usize,
    seed: u64,
) -> Result<SweepReport> {
    run_sweep(
        &SymbolSpec::thm1(alpha, lambda, p, q, None),
        t,
        gammas,
        n,
        seed,
    )
}

pub fn run_sweep_thm2(
    alpha: f64,
    lambda: f64,
    t: f64,
    gammas: &[f64],
    n: usize,
    seed: u64,
) -> Result<SweepReport> {
    run_sweep(&SymbolSpec::thm2(alpha, lambda, None), t, gammas, n, seed)
}

pub fn run_sweep_thm3(
    alpha: f64,
    lambda: f64,
    t: f64,
    d: usize,
    gammas: &[f64],
    n: usize,
    seed: u64,
) -> Result<SweepReport> {
    run_sweep(
        &SymbolSpec::thm3(alpha, lambda, d, None),
        t,
        gammas,
        n,
        seed,
    )
}
