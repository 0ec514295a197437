//! Fourier symbols of the walks and their limits, and the constants that
//! fix the limiting time scales.

pub mod pareto;
pub mod spec;
pub mod student;

pub use pareto::{
    constant_c1, constant_c1_by_parts, constant_c1_closed_form, minus_i_xi_pow, symbol_thm1_limit,
    symbol_thm1_pre, symbol_thm2_limit, symbol_thm2_pre,
};
pub use spec::{SymbolGrid, SymbolSpec, Theorem};
pub use student::{
    constant_cd, sphere_moment, student_constant, student_density, student_marginal_cdf,
    student_normalization, student_radial_cdf, symbol_thm3_limit, symbol_thm3_pre,
    tail_exponent_bound,
};
