//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion line reads FAIL when any of its checks misses. The process
//! exits nonzero unless every miss is a listed known limitation.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use fraclab_core::convergence::{
    hill_estimator, ks_band, ks_statistic, run_sweep_thm1, run_sweep_thm2, run_sweep_thm3,
    semigroup_quotients, SweepReport,
};
use fraclab_core::numerics::{gamma_fn, Grid1D};
use fraclab_core::operators::{
    bochner_subordinate_heat, frac_laplacian, fractional_power_symbol, multiplier_apply,
    multiplier_check, riesz_derivative, CheckConfig, GeneratorForm, Operator, TestFunction,
};
use fraclab_core::sampling::{sample_student_jump, JumpLaw, LimitSpec, RngStream};
use fraclab_core::symbols::{
    constant_c1, student_marginal_cdf, student_normalization, student_radial_cdf,
};
use fraclab_core::Error;

const SEED: u64 = 7;
const SWEEP: [f64; 3] = [1e-1, 1e-2, 1e-3];
const SWEEP_N: usize = 200_000;

#[derive(Default)]
struct Outcome {
    notes: Vec<String>,
    misses: Vec<String>,
    /// Misses explained by a known rate limitation rather than a defect.
    known: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: String) {
        if ok {
            self.notes.push(what);
        } else {
            self.misses.push(what);
        }
    }
}

fn sweep_checks(o: &mut Outcome, label: &str, r: &SweepReport, limit_ok: bool) {
    let mc = 3.0 / (r.n as f64).sqrt();
    let errs: Vec<String> = r
        .rows
        .iter()
        .map(|x| format!("{:.4}", x.sup_cf_error))
        .collect();
    o.check(!r.any_failed(), format!("{label}: all rows ran"));
    o.check(
        r.cf_error_nonincreasing(mc),
        format!(
            "{label}: CF errors [{}] nonincreasing within 3/sqrt(n)",
            errs.join(", ")
        ),
    );
    let last = r.last().unwrap();
    o.check(
        last.sup_cf_error <= 0.02,
        format!("{label}: last CF error {:.4} <= 0.02", last.sup_cf_error),
    );
    let ks = format!(
        "{label}: KS {:.5} vs 99% band {:.5} at gamma = {}",
        last.ks, last.ks_band, last.gamma
    );
    if limit_ok {
        o.check(last.ks_passes(), ks);
    } else if last.ks_passes() {
        o.notes.push(ks);
    } else {
        o.known.push(ks);
    }
}

fn c1_constant_identity() -> Outcome {
    let mut o = Outcome::default();
    let mut worst = 0.0f64;
    for k in 1..=9 {
        let a = k as f64 / 10.0;
        let lhs = a * constant_c1(a).unwrap();
        worst = worst.max((lhs - gamma_fn(1.0 - a).unwrap() * (PI * a / 2.0).cos()).abs());
    }
    o.check(
        worst <= 1e-8,
        format!("max identity gap {worst:.2e} <= 1e-8"),
    );
    o
}

fn c2_student_density() -> Outcome {
    let mut o = Outcome::default();
    let n = 10_000;
    let band = ks_band(0.99, n).unwrap();
    for (i, (d, a)) in [(1, 0.5), (1, 1.5), (2, 0.5), (2, 1.5)]
        .into_iter()
        .enumerate()
    {
        let m = student_normalization(a, 1.0, d).unwrap();
        o.check(
            (m - 1.0).abs() <= 1e-6,
            format!("d={d} alpha={a}: mass {m:.9}"),
        );
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                sample_student_jump(a, 1.0, d, &mut RngStream::new(SEED + i as u64, j as u64))
                    .unwrap()
            })
            .collect();
        let ks = if d == 1 {
            let v: Vec<f64> = rows.iter().map(|y| y[0]).collect();
            ks_statistic(&v, |x| student_marginal_cdf(x, a, 1.0).unwrap()).unwrap()
        } else {
            let v: Vec<f64> = rows.iter().map(|y| y[0].hypot(y[1])).collect();
            ks_statistic(&v, |r| student_radial_cdf(r, a, 1.0, d).unwrap()).unwrap()
        };
        o.check(
            ks < band,
            format!("d={d} alpha={a}: KS {ks:.4} < {band:.4}"),
        );
    }
    o
}

fn c3_theorem1() -> Outcome {
    let mut o = Outcome::default();
    let one = run_sweep_thm1(0.5, 1.0, 0.0, 1.0, 1.0, &SWEEP, SWEEP_N, SEED).unwrap();
    let t = gamma_fn(0.5).unwrap();
    o.check(
        one.limit == LimitSpec::Subordinator { alpha: 0.5, t },
        format!("p=1 limit is the subordinator at time {t:.6}"),
    );
    // The one-sided walk lacks the drift of its jumps below gamma, of order
    // alpha gamma^{1-alpha}/(1-alpha) = 0.032 at gamma = 1e-3, which is far
    // above the KS band at n = 2e5.
    sweep_checks(&mut o, "p=1", &one, false);
    let two = run_sweep_thm1(0.5, 0.5, 0.5, 1.0, 1.0, &SWEEP, SWEEP_N, SEED + 1).unwrap();
    o.check(
        matches!(two.limit, LimitSpec::Thm1 { .. }),
        "p=q limit sampler is the difference of subordinators".into(),
    );
    sweep_checks(&mut o, "p=q", &two, true);
    o
}

fn c4_theorem2() -> Outcome {
    let mut o = Outcome::default();
    for (i, a) in [0.7, 1.2].into_iter().enumerate() {
        let start = Instant::now();
        let r = run_sweep_thm2(a, 1.0, 1.0, &SWEEP, SWEEP_N, SEED + 10 + i as u64).unwrap();
        sweep_checks(&mut o, &format!("alpha={a}"), &r, true);
        let s = start.elapsed().as_secs_f64();
        o.check(s <= 120.0, format!("alpha={a}: {s:.1} s <= 120 s"));
    }
    o
}

fn c5_theorem3() -> Outcome {
    let mut o = Outcome::default();
    let r = run_sweep_thm3(0.5, 1.0, 1.0, 2, &SWEEP, SWEEP_N, SEED + 20).unwrap();
    match r.limit {
        LimitSpec::Isotropic { beta, d, .. } => o.check(
            beta == 1.0 && d == 2,
            format!("isotropic limit of index {beta} in d={d}"),
        ),
        other => o.check(false, format!("unexpected limit {other:?}")),
    }
    sweep_checks(&mut o, "d=2", &r, true);
    let mc = 3.0 / (SWEEP_N as f64).sqrt();
    let radial = r.last().unwrap().radial_deviation.unwrap();
    o.check(
        radial <= mc,
        format!("radial deviation {radial:.5} <= 3/sqrt(n) = {mc:.5}"),
    );
    o
}

fn c6_multipliers() -> Outcome {
    let mut o = Outcome::default();
    let xi = Grid1D::symmetric(4.0, 33).unwrap();
    let cfg = CheckConfig::default();
    let f = TestFunction::gaussian(0.3, 1.0);
    for a in [0.3, 0.5, 0.8] {
        let mut ops = vec![
            Operator::WeylLeft { alpha: a },
            Operator::WeylRight { alpha: a },
            Operator::FracLaplacian { alpha: a },
        ];
        let beta = 2.0 * a;
        if beta == 1.0 {
            // sigma = 1/cos(pi beta/2) has a pole here.
            let r = riesz_derivative(&f, beta, 0.0);
            o.check(
                matches!(r, Err(Error::Singular(_))),
                "riesz beta=1 reports Singular".into(),
            );
        } else {
            ops.push(Operator::Riesz { beta });
        }
        for op in ops {
            let e = multiplier_check(&op, &f, &xi, &cfg).unwrap().sup_error;
            o.check(e <= 1e-4, format!("{} at {a}: {e:.1e}", op.name()));
        }
    }
    let g = TestFunction::gaussian(0.0, 1.0);
    let v = frac_laplacian(&g, 0.5, &[0.0]).unwrap();
    let oracle = multiplier_apply(&g, fractional_power_symbol(0.5), &[0.0]).unwrap();
    let target = -2.0 / PI.sqrt();
    o.check(
        (v - target).abs() <= 1e-4 && (oracle - target).abs() <= 1e-4,
        format!("Gaussian half Laplacian at 0: {v:.10} (multiplier {oracle:.10})"),
    );
    o
}

fn c7_representations() -> Outcome {
    let mut o = Outcome::default();
    let f = TestFunction::gaussian(0.2, 1.0);
    let probes = [-1.3, -0.5, 0.0, 0.4, 1.1];
    for a in [0.3, 0.5, 0.7] {
        let mut worst = 0.0f64;
        for x in probes {
            let sd = frac_laplacian(&f, a, &[x]).unwrap();
            let heat = bochner_subordinate_heat(&f, a, &[x]).unwrap();
            let mult = multiplier_apply(&f, fractional_power_symbol(a), &[x]).unwrap();
            worst = worst
                .max((sd - heat).abs())
                .max((sd - mult).abs())
                .max((heat - mult).abs());
        }
        o.check(worst <= 1e-3, format!("alpha={a}: pairwise {worst:.1e}"));
    }
    let c = TestFunction::Cosine {
        frequency: vec![1.7],
        phase: 0.3,
    };
    let mut worst = 0.0f64;
    for a in [0.3, 0.5, 0.7] {
        for x in probes {
            let v = frac_laplacian(&c, a, &[x]).unwrap();
            worst = worst.max((v + 1.7f64.powf(2.0 * a) * c.eval(&[x])).abs());
        }
    }
    o.check(worst <= 1e-6, format!("cosine eigenvalue gap {worst:.1e}"));
    o
}

fn c8_generator_limit() -> Outcome {
    let mut o = Outcome::default();
    let law = JumpLaw::pareto(3.0, 1.0, 1.0, 0.0).unwrap();
    let steps = [0.1, 0.05, 0.025];
    let est = semigroup_quotients(
        &TestFunction::quadratic(1.0),
        0.0,
        &law,
        1.0,
        GeneratorForm::Compensated,
        &steps,
        1_000_000,
        SEED,
    )
    .unwrap();
    let errs: Vec<f64> = est.iter().map(|e| (e.value - 3.0).abs()).collect();
    for (k, e) in est.iter().enumerate() {
        o.notes
            .push(format!("h={}: {:.4} +- {:.4}", e.h, e.value, e.std_error));
        if k > 0 {
            o.check(
                errs[k] <= errs[k - 1] + 3.0 * e.std_error,
                format!("h={}: error {:.4} shrinks within 3 SE", e.h, errs[k]),
            );
        }
    }
    let last = *errs.last().unwrap();
    o.check(last <= 0.05, format!("final error {last:.4} <= 0.05"));
    o
}

fn c9_tail_order() -> Outcome {
    let mut o = Outcome::default();
    let v: Vec<f64> = (0..100_000u64)
        .map(|i| sample_student_jump(0.5, 1.0, 1, &mut RngStream::new(SEED, i)).unwrap()[0].abs())
        .collect();
    let h = hill_estimator(&v, 1000).unwrap();
    o.check((h - 1.0).abs() <= 0.15, format!("Hill {h:.4} = 1 +- 0.15"));
    o
}

fn run_cli(dir: &Path, args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_fraclab"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .arg("--format")
        .arg("both")
        .output()
        .expect("binary runs");
    assert!(
        matches!(status.status.code(), Some(0 | 4)),
        "{args:?}: {}",
        String::from_utf8_lossy(&status.stderr)
    );
}

fn c10_determinism() -> Outcome {
    let mut o = Outcome::default();
    let tmp = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &[
            "symbol",
            "--thm",
            "3",
            "--alpha",
            "0.4",
            "--d",
            "2",
            "--gamma",
            "0.01",
            "--xi-points",
            "11",
        ],
        &[
            "simulate", "--thm", "1", "--alpha", "0.6", "--p", "0.3", "--gamma", "0.05", "--n",
            "2000", "--seed", "5",
        ],
        &[
            "converge", "--thm", "2", "--alpha", "0.9", "--gammas", "0.3,0.1", "--n", "2000",
            "--seed", "5",
        ],
        &[
            "operator",
            "--operator",
            "riesz",
            "--beta",
            "1.4",
            "--x-points",
            "9",
        ],
        &["verify"],
    ];
    for args in cases {
        let a = tmp.path().join(format!("{}-a", args[0]));
        let b = tmp.path().join(format!("{}-b", args[0]));
        run_cli(&a, args);
        run_cli(&b, args);
        let mut names: Vec<String> = fs::read_dir(&a)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n != "manifest.json")
            .collect();
        names.sort();
        let same = names
            .iter()
            .all(|n| fs::read(a.join(n)).unwrap() == fs::read(b.join(n)).unwrap());
        let hashes = |d: &Path| {
            let m: serde_json::Value =
                serde_json::from_slice(&fs::read(d.join("manifest.json")).unwrap()).unwrap();
            m["files"].clone()
        };
        o.check(
            same && !names.is_empty() && hashes(&a) == hashes(&b),
            format!("{}: {} identical", args[0], names.join(", ")),
        );
    }
    o
}

fn main() {
    let criteria: [(&str, f64, fn() -> Outcome); 10] = [
        ("constant identity", 5.0, c1_constant_identity),
        ("Student density", 30.0, c2_student_density),
        ("theorem 1 sweep", 120.0, c3_theorem1),
        ("theorem 2 sweep", 240.0, c4_theorem2),
        ("theorem 3 sweep", 180.0, c5_theorem3),
        ("operator multipliers", 30.0, c6_multipliers),
        ("representation equivalence", 30.0, c7_representations),
        ("generator limit", 120.0, c8_generator_limit),
        ("tail order", 10.0, c9_tail_order),
        ("determinism", 60.0, c10_determinism),
    ];
    let mut unexplained = 0;
    for (i, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut o = f();
        let secs = start.elapsed().as_secs_f64();
        o.check(secs <= budget, format!("runtime {secs:.1} s <= {budget} s"));
        let status = if o.misses.is_empty() && o.known.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("criterion {:>2} {status}: {name}", i + 1);
        for n in &o.notes {
            println!("    ok    {n}");
        }
        for n in &o.known {
            println!("    known {n}");
        }
        for n in &o.misses {
            println!("    miss  {n}");
        }
        unexplained += o.misses.len();
    }
    if unexplained > 0 {
        eprintln!("{unexplained} unexplained acceptance misses");
        std::process::exit(1);
    }
}
