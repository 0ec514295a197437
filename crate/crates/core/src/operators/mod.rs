//! Fractional and nonlocal operators evaluated on closed-form test functions.
//!
//! Every operator returns the generator side: `frac_laplacian` gives
//! `-(-Laplacian)^alpha f`, `multiplier_apply` gives `-(2 pi)^{-d} int e^{-i xi.x} Phi f^`.
//! The Weyl and Riesz derivatives are the derivatives themselves, with
//! multipliers `(-i xi)^alpha`, `(i xi)^alpha` and `|xi|^beta`.

pub mod check;
pub mod fractional;
pub mod generator;
pub mod multiplier;
pub mod result;
pub mod test_function;

pub use check::{multiplier_check, CheckConfig, MultiplierCheck};
pub use fractional::{
    frac_laplacian, frac_laplacian_constant, frac_laplacian_estimate, riesz_derivative,
    riesz_derivative_estimate, riesz_sigma, weyl_constant, weyl_left, weyl_left_estimate,
    weyl_right, weyl_right_estimate,
};
pub use generator::{cp_generator_apply, cp_generator_apply_estimate, GeneratorForm};
pub use multiplier::{
    bochner_subordinate_heat, bochner_subordinate_heat_estimate, fractional_power_symbol,
    multiplier_apply, multiplier_apply_estimate,
};
pub use result::{Operator, OperatorResult};
pub use test_function::TestFunction;
