//! Quadrature for the Cauchy, Teodorescu and singular Cauchy transforms,
//! boundary limits, and the verification suites built on them.

mod boundary;
mod cauchy;
mod holder;
mod kernel;
mod membership;
pub mod panel;
mod singular;
mod teodorescu;
mod verify;

pub use boundary::BoundaryField;
pub use cauchy::{
    cauchy_transform, cauchy_transform_near, cauchy_transform_unchecked, right_cauchy_transform,
    right_cauchy_transform_near, sc_vec_split,
};
pub use holder::{holder_condition_estimate, HolderEstimate, DIVERGENCE_RATIO, HOLDER_WARNING_THRESHOLD};
pub use kernel::{cauchy_kernel, KernelField};
pub use membership::{default_probes, m_psi_star_test, m_psi_test, MembershipReport};
pub use singular::{
    boundary_limit, jump_check, normal_limit, richardson_limit, right_boundary_limit, right_singular_cauchy,
    singular_cauchy, JumpReport, Side, DEFAULT_EPS_FACTOR, RICHARDSON_LEVELS,
};
pub use teodorescu::{split_tet, teodorescu, SingularTreatment, Teodorescu, TeodorescuOptions, VolumeQuadrature};
pub use verify::{
    borel_pompeiu_residual, equivalence_suite, BorelPompeiu, EquivalenceReport, EquivalenceTolerances,
};
