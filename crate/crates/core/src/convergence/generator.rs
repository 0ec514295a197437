//! Monte Carlo semigroup quotients `(E f(x + Z_h) - f(x)) / h` for a compound
//! Poisson process `Z` with rate `lambda`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::generator::GeneratorForm;
use crate::operators::test_function::TestFunction;
use crate::sampling::distributions::{sample_pareto_jump, sample_rademacher, StudentSampler};
use crate::sampling::law::JumpLaw;
use crate::sampling::rng::{derive_seed, RngStream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientEstimate {
    pub h: f64,
    pub n: usize,
    pub value: f64,
    /// Standard error of `value`.
    pub std_error: f64,
}

/// Jump count given at least one arrival, by inversion.
fn poisson_at_least_one(mean: f64, rng: &mut RngStream) -> u64 {
    let tail = -(-mean).exp_m1();
    let mut u = rng.uniform() * tail;
    let mut k = 1u64;
    let mut pk = mean * (-mean).exp();
    loop {
        if u <= pk || pk == 0.0 {
            return k;
        }
        u -= pk;
        k += 1;
        pk *= mean / k as f64;
    }
}

enum OneDimJump {
    Pareto { alpha: f64, gamma: f64, p: f64 },
    Student(StudentSampler),
}

impl OneDimJump {
    fn new(law: &JumpLaw) -> Result<Self> {
        match *law {
            JumpLaw::ParetoExp {
                alpha, gamma, p, ..
            } => Ok(Self::Pareto { alpha, gamma, p }),
            JumpLaw::StudentGauss { alpha, gamma, d: 1 } => {
                Ok(Self::Student(StudentSampler::new(alpha, gamma, 1)?))
            }
            JumpLaw::StudentGauss { d, .. } => Err(Error::ShapeMismatch {
                expected: 1,
                found: d,
            }),
        }
    }

    fn draw(&self, rng: &mut RngStream) -> f64 {
        match self {
            Self::Pareto { alpha, gamma, p } => {
                sample_rademacher(*p, rng) * sample_pareto_jump(*alpha, *gamma, rng)
            }
            Self::Student(_) => self.draw_stratified(rng.uniform(), rng),
        }
    }

    /// A jump whose magnitude is driven by the given uniform (Pareto only;
    /// Student jumps ignore it).
    fn draw_stratified(&self, u: f64, rng: &mut RngStream) -> f64 {
        match self {
            Self::Pareto { alpha, gamma, p } => {
                sample_rademacher(*p, rng) * gamma * u.powf(-1.0 / alpha)
            }
            Self::Student(s) => {
                let mut y = [0.0];
                s.add_into(&mut y, 1.0, rng);
                y[0]
            }
        }
    }
}

/// Stratified estimate of `(E f(x + Z_h) - f(x)) / h`.
///
/// The no-arrival stratum has probability `e^{-lambda h}` and is computed
/// exactly; the `n` draws are conditioned on at least one arrival. With
/// [`GeneratorForm::Compensated`] the drift `lambda h E[Y]` is subtracted.
///
/// Draw `i` takes the uniform behind its first Pareto magnitude from
/// `[i/n, (i+1)/n)`, which keeps the estimator unbiased and tames the
/// largest jumps. The reported standard error ignores the stratification and
/// so overstates the spread.
pub fn semigroup_quotient(
    f: &TestFunction,
    x: f64,
    law: &JumpLaw,
    lambda: f64,
    form: GeneratorForm,
    h: f64,
    n: usize,
    seed: u64,
) -> Result<QuotientEstimate> {
    law.validate()?;
    if f.dim() != 1 {
        return Err(Error::ShapeMismatch {
            expected: 1,
            found: f.dim(),
        });
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!(
            "rate lambda = {lambda} must be positive"
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("step h = {h} must be positive")));
    }
    if n < 2 {
        return Err(Error::EmptyBatch);
    }
    let drift = match form {
        GeneratorForm::Compensated => {
            let m = law
                .mean()
                .ok_or_else(|| Error::NonIntegrable("compensation needs a finite mean".into()))?;
            lambda * h * m[0]
        }
        GeneratorForm::Symmetric if !law.is_symmetric() => {
            return Err(Error::NonIntegrable(
                "symmetric form needs a symmetric law".into(),
            ))
        }
        _ => 0.0,
    };
    let jump = OneDimJump::new(law)?;
    let mean = lambda * h;
    let fx = f.eval1(x);
    let nf = n as f64;
    let diffs: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i as u64);
            let k = poisson_at_least_one(mean, &mut rng);
            let u = (i as f64 + rng.uniform()) / nf;
            let z: f64 = jump.draw_stratified(u, &mut rng)
                + (1..k).map(|_| jump.draw(&mut rng)).sum::<f64>();
            f.eval1(x + z - drift) - fx
        })
        .collect();
    let m = diffs.iter().sum::<f64>() / nf;
    let var = diffs.iter().map(|d| (d - m) * (d - m)).sum::<f64>() / (nf - 1.0);
    let p0 = (-mean).exp();
    let p1 = -(-mean).exp_m1();
    let value = (p0 * (f.eval1(x - drift) - fx) + p1 * m) / h;
    let std_error = p1 * (var / nf).sqrt() / h;
    Ok(QuotientEstimate {
        h,
        n,
        value,
        std_error,
    })
}

/// Quotients at a list of steps, each with stream base `derive_seed(seed, i)`.
pub fn semigroup_quotients(
    f: &TestFunction,
    x: f64,
    law: &JumpLaw,
    lambda: f64,
    form: GeneratorForm,
    steps: &[f64],
    n: usize,
    seed: u64,
) -> Result<Vec<QuotientEstimate>> {
    steps
        .iter()
        .enumerate()
        .map(|(i, h)| {
            semigroup_quotient(f, x, law, lambda, form, *h, n, derive_seed(seed, i as u64))
        })
        .collect()
}
