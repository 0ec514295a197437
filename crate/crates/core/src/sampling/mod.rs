//! Seeded variates, compound Poisson walks and exact stable samplers.

pub mod batch;
pub mod distributions;
pub mod law;
pub mod rng;
pub mod stable;
pub mod walk;

pub use batch::{sample_limit_batch, sample_walk_batch, BatchSource, LimitSpec, SampleBatch};
pub use distributions::{
    sample_pareto_jump, sample_poisson, sample_rademacher, sample_reciprocal_gamma,
    sample_student_jump, StudentSampler,
};
pub use law::{check_skew, JumpLaw};
pub use rng::{derive_seed, RngStream};
pub use stable::{
    sample_isotropic_stable, sample_limit_thm1, sample_stable_subordinator,
    sample_symmetric_stable, thm1_time,
};
pub use walk::{sample_walk_endpoint, WalkConfig, WalkSampler, DEFAULT_POISSON_CAP};
