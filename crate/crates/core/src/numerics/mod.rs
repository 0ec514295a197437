//! Special functions, quadrature and Fourier sums.

pub mod fourier;
pub mod grid;
pub mod quadrature;
pub mod special;

pub use fourier::{fourier_sum, fourier_transform_grid, fourier_transform_tensor, Transform};
pub use grid::{Grid1D, GridD};
pub use quadrature::{
    integrate, integrate_fourier_tail, integrate_from_zero, integrate_half_line,
    integrate_log_interval, integrate_periodic_tail, integrate_singular_symmetric, integrate_tail,
    integrate_to_infinity, Estimate, QuadratureSpec,
};
pub use special::{erfc, gamma_fn, gauss_legendre, ln_gamma, sin_pi, sphere_area};
