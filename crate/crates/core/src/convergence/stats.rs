//! Empirical characteristic functions, Kolmogorov-Smirnov distances and the
//! Hill tail-index estimator.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::grid::GridD;
use crate::sampling::batch::SampleBatch;

/// `(1/n) sum_k e^{i xi.x_k}` at every grid frequency.
///
/// Each frequency is summed sequentially in sample order, so the result does
/// not depend on the thread count. At `xi = 0` the value is exactly 1.
pub fn empirical_cf(batch: &SampleBatch, grid: &GridD) -> Result<Vec<Complex64>> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if grid.dim() != batch.dim() {
        return Err(Error::ShapeMismatch {
            expected: batch.dim(),
            found: grid.dim(),
        });
    }
    let n = batch.len() as f64;
    let d = batch.dim();
    let flat = batch.flat();
    let pts: Vec<&[f64]> = grid.iter().collect();
    Ok(pts
        .par_iter()
        .map(|xi| {
            if xi.iter().all(|v| *v == 0.0) {
                return Complex64::new(1.0, 0.0);
            }
            let (mut re, mut im) = (0.0, 0.0);
            for x in flat.chunks_exact(d) {
                let ph: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
                let (s, c) = ph.sin_cos();
                re += c;
                im += s;
            }
            Complex64::new(re / n, im / n)
        })
        .collect())
}

/// `max_k |a_k - b_k|`.
pub fn cf_sup_distance(empirical: &[Complex64], theoretical: &[Complex64]) -> Result<f64> {
    if empirical.len() != theoretical.len() {
        return Err(Error::ShapeMismatch {
            expected: empirical.len(),
            found: theoretical.len(),
        });
    }
    Ok(empirical
        .iter()
        .zip(theoretical)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("sample contains NaN"));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(v)
}

/// One-sample statistic `sup_x |F_n(x) - F(x)|`.
pub fn ks_statistic<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> Result<f64> {
    let v = sorted(values)?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        // Ties jump together.
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[i] {
            j += 1;
        }
        let f = cdf(v[i]);
        d = d
            .max((f - i as f64 / n).abs())
            .max(((j + 1) as f64 / n - f).abs());
        i = j + 1;
    }
    Ok(d)
}

/// Two-sample statistic `sup_x |F_a(x) - F_b(x)|`.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted(a)?;
    let b = sorted(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Kolmogorov distribution `P{K <= c} = 1 - 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 c^2}`.
pub fn kolmogorov_cdf(c: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    if c < 0.2 {
        // The alternating series converges slowly here; the value is below 1e-20.
        return 0.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * c * c).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (1.0 - 2.0 * s).clamp(0.0, 1.0)
}

/// Quantile `c(level)` of the Kolmogorov distribution, by bisection.
pub fn kolmogorov_quantile(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("level {level} must lie in (0, 1)")));
    }
    let (mut lo, mut hi) = (0.2, 5.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_cdf(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Asymptotic one-sample band `c(level) / sqrt(n)`.
pub fn ks_band(level: f64, n: usize) -> Result<f64> {
    Ok(kolmogorov_quantile(level)? / (n as f64).sqrt())
}

/// Asymptotic two-sample band `c(level) sqrt((n + m) / (n m))`.
pub fn two_sample_band(level: f64, n: usize, m: usize) -> Result<f64> {
    let (n, m) = (n as f64, m as f64);
    Ok(kolmogorov_quantile(level)? * ((n + m) / (n * m)).sqrt())
}

/// Hill estimate of the tail index from the top `k` order statistics:
/// the reciprocal of `(1/k) sum_{i<k} ln(X_(i) / X_(k))`.
pub fn hill_estimator(values: &[f64], k: usize) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if k == 0 || k >= values.len() {
        return Err(Error::invalid(format!(
            "Hill needs 0 < k < n, got k = {k}, n = {}",
            values.len()
        )));
    }
    if let Some(bad) = values.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::Domain(format!(
            "Hill needs positive samples, found {bad}"
        )));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let threshold = v[k].ln();
    let mean: f64 = v[..k].iter().map(|x| x.ln() - threshold).sum::<f64>() / k as f64;
    if mean <= 0.0 {
        return Err(Error::Domain(
            "top order statistics are tied; the Hill estimate is undefined".into(),
        ));
    }
    Ok(1.0 / mean)
}
