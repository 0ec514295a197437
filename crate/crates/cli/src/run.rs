//! Dispatch from a validated [`RunConfig`] to the library pipelines.

use fraclab_core::convergence::{limit_sampler, run_sweep, SweepReport};
use fraclab_core::numerics::{Grid1D, GridD};
use fraclab_core::operators::{Operator, TestFunction};
use fraclab_core::sampling::{sample_limit_batch, sample_walk_batch, JumpLaw, WalkConfig};
use fraclab_core::symbols::{SymbolSpec, Theorem};

use crate::config::{Axis, Command, RunConfig, Source};
use crate::error::CliError;
use crate::manifest::{csv_comment, json_envelope, now_ms, OutputWriter, RunManifest};
use crate::verify::run_checks;

/// Outcome of a run whose outputs were all written.
#[derive(Debug)]
pub struct RunOutcome {
    pub manifest: RunManifest,
}

impl RunOutcome {
    /// `Err` when a statistical check failed after writing.
    pub fn into_result(self) -> Result<RunManifest, CliError> {
        if self.manifest.failures.is_empty() {
            Ok(self.manifest)
        } else {
            Err(CliError::Acceptance(self.manifest.failures.join("; ")))
        }
    }
}

fn spec_of(cfg: &RunConfig) -> SymbolSpec {
    let theorem = cfg.theorem.expect("validated");
    let alpha = cfg.alpha.expect("validated");
    SymbolSpec {
        theorem,
        alpha,
        lambda: cfg.lambda,
        p: cfg.p,
        q: cfg.q,
        gamma: cfg.gamma,
        d: cfg.d,
    }
}

fn law_of(cfg: &RunConfig, gamma: f64) -> fraclab_core::Result<JumpLaw> {
    let alpha = cfg.alpha.expect("validated");
    match cfg.theorem.expect("validated") {
        Theorem::Thm1 | Theorem::Thm2 => JumpLaw::pareto(alpha, gamma, cfg.p, cfg.q),
        Theorem::Thm3 => JumpLaw::student(alpha, gamma, cfg.d),
    }
}

fn grid_of(axis: &Axis, d: usize) -> fraclab_core::Result<GridD> {
    let g = Grid1D::uniform(axis.min, axis.max, axis.points)?;
    if d == 1 {
        Ok(g.into())
    } else {
        GridD::tensor(vec![g; d])
    }
}

fn function_of(cfg: &RunConfig) -> TestFunction {
    let f = &cfg.function;
    let d = cfg.d;
    match f.family.as_str() {
        "modulated" => TestFunction::ModulatedGaussian {
            center: vec![f.center; d],
            width: f.width,
            frequency: vec![f.frequency; d],
        },
        "cosine" => TestFunction::Cosine {
            frequency: vec![f.frequency; d],
            phase: f.phase,
        },
        "constant" => TestFunction::Constant {
            value: f.value,
            dim: d,
        },
        "linear" => TestFunction::Linear {
            slope: vec![f.value; d],
            intercept: 0.0,
        },
        "quadratic" => TestFunction::Quadratic {
            scale: f.value,
            center: vec![f.center; d],
        },
        _ => TestFunction::Gaussian {
            center: vec![f.center; d],
            width: f.width,
        },
    }
}

fn operator_of(cfg: &RunConfig) -> fraclab_core::Result<Operator> {
    let alpha = || cfg.alpha.expect("validated");
    Ok(match cfg.operator.as_deref().expect("validated") {
        "weyl_left" => Operator::WeylLeft { alpha: alpha() },
        "weyl_right" => Operator::WeylRight { alpha: alpha() },
        "riesz" => Operator::Riesz {
            beta: cfg.beta.expect("validated"),
        },
        "frac_laplacian" => Operator::FracLaplacian { alpha: alpha() },
        "bochner" => Operator::Bochner { alpha: alpha() },
        "frac_multiplier" => Operator::FracMultiplier { alpha: alpha() },
        "symbol" => Operator::Symbol {
            symbol: spec_of(cfg),
        },
        _ => Operator::Generator {
            law: law_of(cfg, cfg.gamma.expect("validated"))?,
            lambda: cfg.lambda,
            form: cfg.form,
        },
    })
}

/// Statistical checks a sweep must pass: KS within its band at the smallest
/// scale, CF errors nonincreasing within `3/sqrt(n)`, last CF error within
/// `cf_tol`, and radial symmetry within `3/sqrt(n)` when `d > 1`.
pub fn sweep_failures(report: &SweepReport, cf_tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    for row in report.rows.iter().filter(|r| r.failure.is_some()) {
        out.push(format!(
            "gamma = {}: {}",
            row.gamma,
            row.failure.as_deref().unwrap_or_default()
        ));
    }
    if !out.is_empty() {
        return out;
    }
    let mc = 3.0 / (report.n as f64).sqrt();
    if !report.cf_error_nonincreasing(mc) {
        out.push(format!(
            "sup CF error increases across the sweep by more than {mc:.3e}"
        ));
    }
    let last = report.last().expect("sweeps have at least one row");
    if !(last.sup_cf_error <= cf_tol) {
        out.push(format!(
            "sup CF error {:.4e} at gamma = {} exceeds {cf_tol}",
            last.sup_cf_error, last.gamma
        ));
    }
    if !last.ks_passes() {
        out.push(format!(
            "KS {:.4e} at gamma = {} exceeds the band {:.4e}",
            last.ks, last.gamma, last.ks_band
        ));
    }
    if let Some(r) = last.radial_deviation {
        if !(r <= mc) {
            out.push(format!("radial deviation {r:.4e} exceeds {mc:.3e}"));
        }
    }
    out
}

fn dispatch(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let started = now_ms();
    let mut w = OutputWriter::new(&cfg.out_dir)?;
    let comment = csv_comment(cfg);
    let mut failures = Vec::new();
    match cfg.command {
        Command::Symbol => {
            let grid = grid_of(&cfg.xi, cfg.d)?;
            let values = spec_of(cfg).evaluate(&grid)?;
            if cfg.format.csv() {
                w.write("symbol.csv", values.to_csv(Some(&comment)).as_bytes())?;
            }
            if cfg.format.json() {
                w.write_json("symbol.json", &json_envelope(cfg, values.to_json()))?;
            }
        }
        Command::Simulate => {
            let batch = match cfg.source {
                Source::Walk => {
                    let law = law_of(cfg, cfg.gamma.expect("validated"))?;
                    sample_walk_batch(&WalkConfig::new(law, cfg.lambda, cfg.t, cfg.n, cfg.seed))?
                }
                Source::Limit => {
                    sample_limit_batch(&limit_sampler(&spec_of(cfg), cfg.t)?, cfg.n, cfg.seed)?
                }
            };
            if cfg.format.csv() {
                w.write("samples.csv", batch.to_csv(Some(&comment)).as_bytes())?;
            }
            if cfg.format.json() {
                w.write_json("samples.json", &json_envelope(cfg, batch.to_json()))?;
            }
        }
        Command::Converge => {
            let report = run_sweep(&spec_of(cfg).limit(), cfg.t, &cfg.gammas, cfg.n, cfg.seed)?;
            failures = sweep_failures(&report, cfg.cf_tol);
            if cfg.format.csv() {
                w.write("sweep.csv", report.to_csv(Some(&comment)).as_bytes())?;
            }
            if cfg.format.json() {
                w.write_json("sweep.json", &json_envelope(cfg, report.to_json()))?;
            }
        }
        Command::Operator => {
            let grid = grid_of(&cfg.x, cfg.d)?;
            let result = operator_of(cfg)?.apply_grid(&function_of(cfg), &grid)?;
            if cfg.format.csv() {
                w.write("operator.csv", result.to_csv(Some(&comment)).as_bytes())?;
            }
            if cfg.format.json() {
                w.write_json("operator.json", &json_envelope(cfg, result.to_json()))?;
            }
        }
        Command::Verify => {
            let report = run_checks()?;
            failures = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{}: {:.3e} > {:.1e}", c.name, c.value, c.tolerance))
                .collect();
            let value = serde_json::to_value(&report).expect("report serializes");
            w.write_json("verify.json", &json_envelope(cfg, value))?;
        }
    }
    Ok(RunOutcome {
        manifest: w.finish(cfg, started, failures)?,
    })
}

/// Runs the command, on a dedicated pool when `threads` is set.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    match cfg.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Threads {
                    threads: n,
                    message: e.to_string(),
                })?;
            pool.install(|| dispatch(cfg))
        }
        None => dispatch(cfg),
    }
}
