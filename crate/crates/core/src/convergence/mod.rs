//! Empirical characteristic functions, distribution distances, tail-index
//! estimation and the gamma sweeps built on them.

pub mod generator;
pub mod stats;
pub mod sweep;

pub use generator::{semigroup_quotient, semigroup_quotients, QuotientEstimate};
pub use stats::{
    cf_sup_distance, empirical_cf, hill_estimator, kolmogorov_cdf, kolmogorov_quantile, ks_band,
    ks_statistic, two_sample_band, two_sample_ks,
};
pub use sweep::{
    default_xi_grid, limit_sampler, radial_deviation, radial_xi_grid, run_sweep, run_sweep_thm1,
    run_sweep_thm2, run_sweep_thm3, EcfReport, SweepReport, SweepRow, DEFAULT_KS_LEVEL,
};
