//! Batches of endpoints and their serialized forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::RngStream;
use super::stable::{
    isotropic_into, sample_limit_thm1, sample_stable_subordinator, sample_symmetric_stable,
};
use super::walk::{WalkConfig, WalkSampler};
use crate::error::{Error, Result};
use crate::io::{parse_csv, write_csv};

/// Exact samplers of the limiting laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitSpec {
    Subordinator {
        alpha: f64,
        t: f64,
    },
    Thm1 {
        alpha: f64,
        p: f64,
        q: f64,
        lambda: f64,
        t: f64,
    },
    Symmetric {
        beta: f64,
        t_star: f64,
    },
    Isotropic {
        beta: f64,
        t_star: f64,
        d: usize,
    },
}

impl LimitSpec {
    pub fn dim(&self) -> usize {
        match *self {
            LimitSpec::Isotropic { d, .. } => d,
            _ => 1,
        }
    }

    fn sample_into(&self, rng: &mut RngStream, out: &mut [f64]) -> Result<()> {
        match *self {
            LimitSpec::Subordinator { alpha, t } => {
                out[0] = sample_stable_subordinator(alpha, t, rng)?
            }
            LimitSpec::Thm1 {
                alpha,
                p,
                q,
                lambda,
                t,
            } => out[0] = sample_limit_thm1(alpha, p, q, lambda, t, rng)?,
            LimitSpec::Symmetric { beta, t_star } => {
                out[0] = sample_symmetric_stable(beta, t_star, rng)?
            }
            LimitSpec::Isotropic { beta, t_star, .. } => isotropic_into(beta, t_star, out, rng)?,
        }
        Ok(())
    }
}

/// Where a batch came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BatchSource {
    Walk {
        config: WalkConfig,
    },
    Limit {
        spec: LimitSpec,
        n: usize,
        seed: u64,
    },
    /// Decoded from a file; provenance lives in the file's manifest.
    External,
}

/// `n` points in R^d, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    dim: usize,
    points: Vec<f64>,
    source: BatchSource,
}

impl SampleBatch {
    pub fn new(dim: usize, points: Vec<f64>, source: BatchSource) -> Result<Self> {
        if dim == 0 || points.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if points.len() % dim != 0 {
            return Err(Error::ShapeMismatch {
                expected: dim,
                found: points.len() % dim,
            });
        }
        if let Some(bad) = points.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "batch contains non-finite value {bad}"
            )));
        }
        Ok(Self {
            dim,
            points,
            source,
        })
    }

    pub fn from_scalars(values: Vec<f64>) -> Result<Self> {
        Self::new(1, values, BatchSource::External)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn source(&self) -> &BatchSource {
        &self.source
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    pub fn flat(&self) -> &[f64] {
        &self.points
    }

    /// Coordinate `k` of every point.
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.iter().map(|p| p[k]).collect()
    }

    /// Euclidean norms of the points.
    pub fn norms(&self) -> Vec<f64> {
        self.iter()
            .map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect()
    }

    pub fn negated(&self) -> Self {
        Self {
            dim: self.dim,
            points: self.points.iter().map(|x| -x).collect(),
            source: BatchSource::External,
        }
    }

    fn header(&self) -> Vec<String> {
        if self.dim == 1 {
            vec!["x".to_string()]
        } else {
            (1..=self.dim).map(|k| format!("x{k}")).collect()
        }
    }

    pub fn to_csv(&self, comment: Option<&str>) -> String {
        let header = self.header();
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        write_csv(comment, &refs, self.iter().map(<[f64]>::to_vec))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let table = parse_csv(text)?;
        let dim = table.header.len();
        let points: Vec<f64> = table.rows.into_iter().flatten().collect();
        Self::new(dim, points, BatchSource::External)
    }

    /// JSON envelope: source echo plus points as arrays.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<&[f64]> = self.iter().collect();
        serde_json::json!({
            "dim": self.dim,
            "n": self.len(),
            "source": self.source,
            "points": rows,
        })
    }
}

fn fill_parallel<F>(n: usize, dim: usize, seed: u64, f: F) -> Result<Vec<f64>>
where
    F: Fn(&mut RngStream, &mut [f64]) -> Result<()> + Sync,
{
    let mut points = vec![0.0; n * dim];
    points
        .par_chunks_mut(dim)
        .enumerate()
        .try_for_each(|(i, out)| {
            let mut rng = RngStream::new(seed, i as u64);
            f(&mut rng, out)
        })?;
    Ok(points)
}

/// `config.n` walk endpoints; sample `i` uses stream `(seed, i)`.
pub fn sample_walk_batch(config: &WalkConfig) -> Result<SampleBatch> {
    let sampler = WalkSampler::new(config)?;
    let dim = sampler.dim();
    let points = fill_parallel(config.n, dim, config.seed, |rng, out| {
        sampler.sample_into(rng, out)
    })?;
    SampleBatch::new(
        dim,
        points,
        BatchSource::Walk {
            config: config.clone(),
        },
    )
}

/// `n` draws from a limit law; sample `i` uses stream `(seed, i)`.
pub fn sample_limit_batch(spec: &LimitSpec, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::EmptyBatch);
    }
    let dim = spec.dim();
    if dim == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let points = fill_parallel(n, dim, seed, |rng, out| spec.sample_into(rng, out))?;
    SampleBatch::new(
        dim,
        points,
        BatchSource::Limit {
            spec: *spec,
            n,
            seed,
        },
    )
}
