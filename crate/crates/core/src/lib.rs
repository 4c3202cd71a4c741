//! Precision bounds and measurement strategies for estimating the
//! parameters of a single bosonic mode coupled to a thermal bath, with time
//! and mean photon number treated as resources.
//!
//! The mode evolves under
//! `dρ/dt = −i[H, ρ] + Γ(1+n_E) D[a]ρ + Γ n_E D[a†]ρ`
//! and the estimated parameter is one of the frequency `ω`, the drive
//! amplitude `α`, the squeezing strength `ε`, the loss rate `Γ` or the bath
//! occupation `n_E`.
//!
//! * [`model`] holds the shared types.
//! * [`gaussian`] evolves Gaussian moments in closed form.
//! * [`fock`] simulates the mode in a truncated Fock space.
//! * [`bounds`] evaluates the fundamental rate bounds.
//! * [`cat`] implements the cat-code protocol for squeezing estimation.
//! * [`report`] builds the summary table and figure datasets.

pub mod bounds;
pub mod cat;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod model;
pub mod numerics;
pub mod report;

pub use error::{Error, Result};
pub use model::{
    make_gaussian, photon_number, DenseOperator, FockSpace, GaussianState, HamiltonianKind,
    LindbladModel, OutcomeDistribution, ParameterTag, StateVector,
};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
