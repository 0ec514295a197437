use std::f64::consts::PI;

use fraclab_core::convergence::{
    cf_sup_distance, empirical_cf, hill_estimator, ks_band, ks_statistic, two_sample_band,
    two_sample_ks,
};
use fraclab_core::numerics::{erfc, Grid1D, GridD};
use fraclab_core::sampling::*;
use fraclab_core::symbols::{student_marginal_cdf, student_radial_cdf, SymbolSpec};
use num_complex::Complex64;

// tests/oracles/numerics.py
const INV_GAMMA_CDF_2_AT_0_7: f64 = 0.582_009_659_930_026_9;
const LEVY_CDF_AT_3: f64 = 0.683_091_398_309_608_7;

fn draws<F: FnMut(&mut RngStream) -> f64>(n: usize, seed: u64, mut f: F) -> Vec<f64> {
    (0..n)
        .map(|i| f(&mut RngStream::new(seed, i as u64)))
        .collect()
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (
        m,
        v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0),
    )
}

fn band99(n: usize) -> f64 {
    ks_band(0.99, n).unwrap()
}

fn xi5() -> GridD {
    Grid1D::symmetric(5.0, 101).unwrap().into()
}

#[test]
fn poisson_moments_at_three() {
    let v = draws(100_000, 11, |r| sample_poisson(3.0, r).unwrap() as f64);
    let (m, s2) = mean_var(&v);
    assert!((m - 3.0).abs() < 0.05, "{m}");
    assert!((s2 - 3.0).abs() < 0.15, "{s2}");
    assert!(draws(100, 1, |r| sample_poisson(0.0, r).unwrap() as f64)
        .iter()
        .all(|&k| k == 0.0));
}

#[test]
fn pareto_cdf_and_tail_index() {
    let v = draws(100_000, 12, |r| sample_pareto_jump(1.0, 1.0, r));
    assert!(v.iter().all(|&y| y >= 1.0));
    let below = v.iter().filter(|&&y| y <= 2.0).count() as f64 / v.len() as f64;
    assert!((below - 0.5).abs() < 0.01);
    let v = draws(100_000, 13, |r| sample_pareto_jump(1.5, 0.3, r));
    let h = hill_estimator(&v, 1000).unwrap();
    assert!((h - 1.5).abs() < 0.15, "{h}");
}

#[test]
fn rademacher_balance() {
    let v = draws(100_000, 14, |r| sample_rademacher(0.5, r));
    assert!(v.iter().sum::<f64>().abs() / 1e5 < 0.01);
    assert!(draws(50, 1, |r| sample_rademacher(1.0, r))
        .iter()
        .all(|&s| s == 1.0));
    assert!(draws(50, 1, |r| sample_rademacher(0.0, r))
        .iter()
        .all(|&s| s == -1.0));
}

#[test]
fn reciprocal_gamma_law() {
    let v = draws(100_000, 15, |r| sample_reciprocal_gamma(2.0, r).unwrap());
    assert!(v.iter().all(|&x| x > 0.0));
    let inv_mean = v.iter().map(|x| 1.0 / x).sum::<f64>() / v.len() as f64;
    assert!((inv_mean - 2.0).abs() < 0.02);
    // P{E <= x} = P{G >= 1/x} = e^{-1/x} (1 + 1/x) for shape 2.
    let cdf = |x: f64| (-1.0 / x).exp() * (1.0 + 1.0 / x);
    assert!((cdf(0.7) - INV_GAMMA_CDF_2_AT_0_7).abs() < 1e-15);
    let d = ks_statistic(&v[..10_000], cdf).unwrap();
    assert!(d < band99(10_000), "{d}");
}

#[test]
fn student_jumps_match_their_density() {
    let v = draws(100_000, 16, |r| {
        sample_student_jump(1.5, 1.0, 1, r).unwrap()[0]
    });
    let (m, s2) = mean_var(&v);
    assert!(m.abs() < 3.0 * (s2 / 1e5).sqrt());
    let n = 10_000;
    let v = draws(n, 17, |r| sample_student_jump(1.0, 1.0, 1, r).unwrap()[0]);
    let d = ks_statistic(&v, |x| student_marginal_cdf(x, 1.0, 1.0).unwrap()).unwrap();
    assert!(d < band99(n), "{d}");
    let r2 = draws(n, 18, |r| {
        let y = sample_student_jump(0.5, 1.0, 2, r).unwrap();
        y[0].hypot(y[1])
    });
    let d = ks_statistic(&r2, |x| student_radial_cdf(x, 0.5, 1.0, 2).unwrap()).unwrap();
    assert!(d < band99(n), "{d}");
}

#[test]
fn student_tail_order() {
    let v = draws(100_000, 19, |r| {
        sample_student_jump(0.5, 1.0, 1, r).unwrap()[0].abs()
    });
    let h = hill_estimator(&v, 1000).unwrap();
    assert!((h - 1.0).abs() < 0.15, "{h}");
}

#[test]
fn half_stable_subordinator_is_levy() {
    let n = 10_000;
    let v = draws(n, 20, |r| sample_stable_subordinator(0.5, 1.0, r).unwrap());
    assert!(v.iter().all(|&x| x > 0.0));
    let cdf = |x: f64| erfc(1.0 / (2.0 * x.sqrt()));
    assert!((cdf(3.0) - LEVY_CDF_AT_3).abs() < 1e-14);
    let d = ks_statistic(&v, cdf).unwrap();
    assert!(d < band99(n), "{d}");
}

#[test]
fn subordinator_self_similarity() {
    let n = 10_000;
    let a = 0.7;
    let at2 = draws(n, 21, |r| sample_stable_subordinator(a, 2.0, r).unwrap());
    let scaled = draws(n, 22, |r| {
        2f64.powf(1.0 / a) * sample_stable_subordinator(a, 1.0, r).unwrap()
    });
    assert!(two_sample_ks(&at2, &scaled).unwrap() < two_sample_band(0.99, n, n).unwrap());
}

#[test]
fn thm1_limit_signs_and_cf() {
    assert!(
        draws(2000, 23, |r| sample_limit_thm1(0.6, 1.0, 0.0, 1.0, 1.0, r)
            .unwrap())
        .iter()
        .all(|&x| x > 0.0)
    );
    assert!(
        draws(2000, 24, |r| sample_limit_thm1(0.6, 0.0, 1.0, 1.0, 1.0, r)
            .unwrap())
        .iter()
        .all(|&x| x < 0.0)
    );
    let n = 100_000;
    let spec = LimitSpec::Thm1 {
        alpha: 0.6,
        p: 0.5,
        q: 0.5,
        lambda: 1.0,
        t: 1.0,
    };
    let b = sample_limit_batch(&spec, n, 25).unwrap();
    let grid = xi5();
    let emp = empirical_cf(&b, &grid).unwrap();
    let sym = SymbolSpec::thm1(0.6, 1.0, 0.5, 0.5, None);
    let theo: Vec<Complex64> = grid.iter().map(|x| sym.cf(x, 1.0).unwrap()).collect();
    assert!(cf_sup_distance(&emp, &theo).unwrap() < 0.02);
}

#[test]
fn cauchy_case() {
    let v = draws(100_000, 26, |r| {
        sample_symmetric_stable(1.0, 1.0, r).unwrap()
    });
    let inside = v.iter().filter(|x| x.abs() <= 1.0).count() as f64 / 1e5;
    assert!((inside - 0.5).abs() < 0.01);
    let mut s = v.clone();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Median standard error of a Cauchy sample is pi / (2 sqrt(n)).
    assert!(s[50_000].abs() < 4.0 * PI / (2.0 * 1e5f64.sqrt()));
}

#[test]
fn isotropic_projections_agree_under_rotation() {
    let n = 20_000;
    let b = sample_limit_batch(
        &LimitSpec::Isotropic {
            beta: 1.3,
            t_star: 0.8,
            d: 2,
        },
        n,
        27,
    )
    .unwrap();
    let x = b.column(0);
    let rotated: Vec<f64> = b.column(1).iter().map(|y| -y).collect();
    assert!(two_sample_ks(&x, &rotated).unwrap() < two_sample_band(0.99, n, n).unwrap());
}

#[test]
fn walk_support_and_symmetry() {
    let law = JumpLaw::pareto(0.6, 0.02, 1.0, 0.0).unwrap();
    let b = sample_walk_batch(&WalkConfig::new(law, 1.0, 1.0, 5000, 28)).unwrap();
    assert!(b.flat().iter().all(|&x| x > 0.0));
    let law = JumpLaw::pareto(0.6, 0.02, 0.5, 0.5).unwrap();
    let n = 50_000;
    let b = sample_walk_batch(&WalkConfig::new(law, 1.0, 1.0, n, 29)).unwrap();
    let neg = b.negated();
    assert!(two_sample_ks(b.flat(), neg.flat()).unwrap() < two_sample_band(0.99, n, n).unwrap());
}

#[test]
fn walk_cf_matches_the_pre_limit_symbol() {
    let n = 100_000;
    let band = 3.0 / (n as f64).sqrt() + 0.005;
    let cases = [
        (
            JumpLaw::pareto(0.6, 0.05, 0.5, 0.5).unwrap(),
            SymbolSpec::thm2(0.6, 1.0, Some(0.05)),
        ),
        (
            JumpLaw::pareto(1.4, 0.1, 0.5, 0.5).unwrap(),
            SymbolSpec::thm2(1.4, 1.0, Some(0.1)),
        ),
        (
            JumpLaw::pareto(0.4, 0.05, 0.8, 0.2).unwrap(),
            SymbolSpec::thm1(0.4, 1.0, 0.8, 0.2, Some(0.05)),
        ),
        (
            JumpLaw::student(0.7, 0.1, 1).unwrap(),
            SymbolSpec::thm3(0.7, 1.0, 1, Some(0.1)),
        ),
    ];
    let grid = xi5();
    for (i, (law, sym)) in cases.iter().enumerate() {
        let b = sample_walk_batch(&WalkConfig::new(*law, 1.0, 1.0, n, 30 + i as u64)).unwrap();
        let emp = empirical_cf(&b, &grid).unwrap();
        let theo: Vec<Complex64> = grid.iter().map(|x| sym.cf(x, 1.0).unwrap()).collect();
        let e = cf_sup_distance(&emp, &theo).unwrap();
        assert!(e < band, "case {i}: {e}");
    }
}

#[test]
fn limit_batches_do_not_depend_on_threads() {
    let spec = LimitSpec::Isotropic {
        beta: 0.9,
        t_star: 1.0,
        d: 3,
    };
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| sample_limit_batch(&spec, 3000, 31).unwrap());
    let b = four.install(|| sample_limit_batch(&spec, 3000, 31).unwrap());
    assert_eq!(a, b);
}
