use std::f64::consts::PI;

use fraclab_core::convergence::*;
use fraclab_core::numerics::{Grid1D, GridD};
use fraclab_core::operators::{GeneratorForm, TestFunction};
use fraclab_core::sampling::*;
use fraclab_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn xi(r: f64, n: usize) -> GridD {
    Grid1D::symmetric(r, n).unwrap().into()
}

fn normals(n: usize, seed: u64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let mut r = RngStream::new(seed, i as u64);
            (-2.0 * r.uniform().ln()).sqrt() * (2.0 * PI * r.uniform()).cos()
        })
        .collect()
}

#[test]
fn ecf_trivial_cases() {
    let zeros = SampleBatch::from_scalars(vec![0.0; 17]).unwrap();
    let cf = empirical_cf(&zeros, &xi(5.0, 11)).unwrap();
    assert!(cf.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    let plane = GridD::tensor(vec![Grid1D::symmetric(1.0, 3).unwrap(); 2]).unwrap();
    let err = empirical_cf(&zeros, &plane);
    assert!(matches!(err, Err(Error::ShapeMismatch { .. })));
}

#[test]
fn cf_distance_trivial_cases() {
    let a = vec![Complex64::new(0.3, -0.2); 5];
    assert_eq!(cf_sup_distance(&a, &a).unwrap(), 0.0);
    let ones = vec![Complex64::new(1.0, 0.0); 5];
    let zeros = vec![Complex64::new(0.0, 0.0); 5];
    assert_eq!(cf_sup_distance(&ones, &zeros).unwrap(), 1.0);
    assert!(matches!(
        cf_sup_distance(&ones, &a[..3]),
        Err(Error::ShapeMismatch { .. })
    ));
}

#[test]
fn gaussian_ecf_band() {
    let n = 100_000;
    let b = SampleBatch::from_scalars(normals(n, 3)).unwrap();
    let grid = xi(3.0, 61);
    let emp = empirical_cf(&b, &grid).unwrap();
    let theo: Vec<Complex64> = grid
        .iter()
        .map(|x| Complex64::new((-0.5 * x[0] * x[0]).exp(), 0.0))
        .collect();
    let e = cf_sup_distance(&emp, &theo).unwrap();
    assert!(e <= 3.0 / (n as f64).sqrt() + 0.005, "{e}");
}

#[test]
fn ks_calibration_over_seeds() {
    let n = 10_000;
    let band = 1.63 / (n as f64).sqrt();
    let exceed = (0..200u64)
        .filter(|&s| {
            let v: Vec<f64> = (0..n)
                .map(|i| RngStream::new(1000 + s, i as u64).exponential())
                .collect();
            ks_statistic(&v, |x| -(-x).exp_m1()).unwrap() > band
        })
        .count();
    assert!(exceed <= 5, "{exceed} exceedances");
}

#[test]
fn ks_edge_cases() {
    let d = ks_statistic(&[0.0; 10], |x| 0.5 * (1.0 + x.tanh())).unwrap();
    assert_eq!(d, 0.5);
    let v = normals(500, 9);
    assert_eq!(two_sample_ks(&v, &v).unwrap(), 0.0);
    assert!(matches!(ks_statistic(&[], |x| x), Err(Error::EmptyBatch)));
    assert!(matches!(two_sample_ks(&v, &[]), Err(Error::EmptyBatch)));
}

#[test]
fn hill_on_exact_pareto() {
    let v: Vec<f64> = (0..100_000)
        .map(|i| sample_pareto_jump(2.0, 1.0, &mut RngStream::new(5, i)))
        .collect();
    let h = hill_estimator(&v, 1000).unwrap();
    assert!((h - 2.0).abs() < 0.2, "{h}");
    assert!(hill_estimator(&v, 0).is_err());
    assert!(hill_estimator(&v, v.len()).is_err());
    assert!(matches!(
        hill_estimator(&[1.0, 0.0, 2.0], 1),
        Err(Error::Domain(_))
    ));
}

#[test]
fn ks_power_on_the_time_map() {
    // h1(t*/2) - h2(t*/2) with t* = lambda Gamma(1 - a) t is symmetric stable
    // with scale cos(pi a / 2) t*.
    let (a, lambda, t, n) = (0.6, 1.0, 1.0, 100_000);
    let ts = thm1_time(a, lambda, t).unwrap() * (PI * a / 2.0).cos();
    let diff = sample_limit_batch(
        &LimitSpec::Thm1 {
            alpha: a,
            p: 0.5,
            q: 0.5,
            lambda,
            t,
        },
        n,
        11,
    )
    .unwrap();
    let matched = sample_limit_batch(
        &LimitSpec::Symmetric {
            beta: a,
            t_star: ts,
        },
        n,
        12,
    )
    .unwrap();
    let off = sample_limit_batch(
        &LimitSpec::Symmetric {
            beta: a,
            t_star: 1.2 * ts,
        },
        n,
        12,
    )
    .unwrap();
    let d_ok = two_sample_ks(diff.flat(), matched.flat()).unwrap();
    let d_off = two_sample_ks(diff.flat(), off.flat()).unwrap();
    assert!(d_ok < two_sample_band(0.99, n, n).unwrap(), "{d_ok}");
    assert!(d_off > two_sample_band(0.95, n, n).unwrap(), "{d_off}");
}

#[test]
fn one_sided_sweep_stays_positive() {
    let r = run_sweep_thm1(0.5, 1.0, 0.0, 1.0, 1.0, &[0.1, 0.01], 2000, 4).unwrap();
    assert!(matches!(r.limit, LimitSpec::Subordinator { .. }));
    for (i, g) in [0.1, 0.01].iter().enumerate() {
        let law = JumpLaw::pareto(0.5, *g, 1.0, 0.0).unwrap();
        let mut cfg = WalkConfig::new(law, 1.0, 1.0, 2000, derive_seed(4, 2 * i as u64));
        let walk = sample_walk_batch(&cfg).unwrap();
        // Without the j = 0 term an endpoint is exactly 0 when no jump arrives.
        assert!(walk.flat().iter().all(|&x| x >= 0.0));
        let zeros = walk.flat().iter().filter(|&&x| x == 0.0).count() as f64 / 2000.0;
        let p0 = (-cfg.poisson_mean()).exp();
        assert!((zeros - p0).abs() < 4.0 * (p0 * (1.0 - p0) / 2000.0).sqrt() + 1e-3);
        cfg.include_j0 = true;
        assert!(sample_walk_batch(&cfg)
            .unwrap()
            .flat()
            .iter()
            .all(|&x| x > 0.0));
        let lim = sample_limit_batch(&r.limit, 2000, derive_seed(4, 2 * i as u64 + 1)).unwrap();
        assert!(lim.flat().iter().all(|&x| x > 0.0));
    }
}

#[test]
fn sweep_rows_shrink_and_echo_inputs() {
    let n = 50_000;
    let gammas = [0.3, 0.03, 0.003];
    let r = run_sweep_thm2(0.7, 1.0, 1.0, &gammas, n, 8).unwrap();
    assert!(!r.any_failed());
    assert_eq!(r.rows.iter().map(|x| x.gamma).collect::<Vec<_>>(), gammas);
    assert!(r.cf_error_nonincreasing(3.0 / (n as f64).sqrt()));
    for (row, ecf) in r.rows.iter().zip(&r.ecf) {
        let ecf = ecf.as_ref().unwrap();
        assert!(row.sup_cf_error >= 0.0 && row.ks >= 0.0);
        assert_eq!(ecf.empirical[50], Complex64::new(1.0, 0.0));
        assert!(ecf.empirical.iter().all(|v| v.norm() <= 1.0 + 1e-12));
        assert_eq!(row.sup_cf_error, ecf.sup_error);
    }
}

#[test]
fn sweeps_are_reproducible() {
    let a = run_sweep_thm3(0.6, 1.0, 1.0, 2, &[0.1, 0.01], 5000, 21).unwrap();
    let b = run_sweep_thm3(0.6, 1.0, 1.0, 2, &[0.1, 0.01], 5000, 21).unwrap();
    assert_eq!(a.to_csv(None), b.to_csv(None));
    assert_eq!(a.to_json().to_string(), b.to_json().to_string());
    assert!(a.rows.iter().all(|r| r.radial_deviation.is_some()));
    let back: SweepReport = serde_json::from_value(a.to_json()).unwrap();
    assert_eq!(back.rows.len(), 2);
}

#[test]
fn semigroup_quotient_of_a_square() {
    let law = JumpLaw::pareto(3.0, 1.0, 1.0, 0.0).unwrap();
    let e = semigroup_quotient(
        &TestFunction::quadratic(1.0),
        0.0,
        &law,
        1.0,
        GeneratorForm::Compensated,
        0.05,
        200_000,
        3,
    )
    .unwrap();
    assert!(
        (e.value - 3.0).abs() < 5.0 * e.std_error + 0.05,
        "{} +- {}",
        e.value,
        e.std_error
    );
    let heavy = JumpLaw::pareto(0.8, 1.0, 1.0, 0.0).unwrap();
    let r = semigroup_quotient(
        &TestFunction::quadratic(1.0),
        0.0,
        &heavy,
        1.0,
        GeneratorForm::Compensated,
        0.05,
        10,
        3,
    );
    assert!(matches!(r, Err(Error::NonIntegrable(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ecf_is_bounded_and_one_at_zero(pts in proptest::collection::vec(-50.0f64..50.0, 1..40)) {
        let b = SampleBatch::from_scalars(pts).unwrap();
        let cf = empirical_cf(&b, &xi(4.0, 9)).unwrap();
        prop_assert_eq!(cf[4], Complex64::new(1.0, 0.0));
        prop_assert!(cf.iter().all(|v| v.norm() <= 1.0 + 1e-12));
    }

    #[test]
    fn hill_scale_invariance(seed in 0u64..1000, c in 0.01f64..100.0) {
        let v: Vec<f64> = (0..2000).map(|i| sample_pareto_jump(1.7, 1.0, &mut RngStream::new(seed, i))).collect();
        let w: Vec<f64> = v.iter().map(|x| c * x).collect();
        let a = hill_estimator(&v, 100).unwrap();
        let b = hill_estimator(&w, 100).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * a);
    }
}
