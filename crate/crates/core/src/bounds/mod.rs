//! Fundamental bounds on the Fisher information: the quadratic bound, the
//! HNLS test, the linear rate bound `I/t ≤ 4⟨𝔞(h)⟩` with `𝔟(h) = 0`, the
//! noise-parameter bounds, the instantaneous rate `dI/dt` bound and the
//! passive temperature bounds.

mod family;
mod hamiltonian;
mod noise;
mod rate;

use serde::{Deserialize, Serialize};

use crate::model::ParameterTag;

pub use family::{ab_operators, AffineFamily, HCorrection};
pub use hamiltonian::{
    closed_form_h, hamiltonian_rate_bound, hnls_residual, hnls_test, numeric_h_optimization,
    squeezing_geometric_estimate, HOptimum, HNLS_TOL, INTERIOR_MARGIN,
};
pub use noise::{noise_rate_bound, passive_temperature_bounds, PassiveTemperatureBounds};
pub use rate::{
    linear_bound, quadratic_bound, quadratic_bound_constant, theorem1_rate,
    theorem1_rate_min,
};

/// Rate bound on `I/t` for one parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub target: ParameterTag,
    /// Bound on `I/t`; `+∞` when `unbounded`.
    pub rate_bound: f64,
    /// Time at which the quadratic and linear bounds cross, when known.
    pub tau: Option<f64>,
    pub unbounded: bool,
    /// Named contributions and side values.
    pub components: Vec<(String, f64)>,
    /// Why the bound is infinite, when it is.
    pub note: Option<String>,
}

impl BoundReport {
    pub fn unbounded(target: ParameterTag, note: impl Into<String>) -> Self {
        Self {
            target,
            rate_bound: f64::INFINITY,
            tau: None,
            unbounded: true,
            components: Vec::new(),
            note: Some(note.into()),
        }
    }

    /// Value of a named component.
    pub fn component(&self, name: &str) -> Option<f64> {
        self.components.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

/// Rate bound for any target: Hamiltonian parameters through the
/// h-optimisation, noise parameters through `4⟨L̇†L̇⟩`.
pub fn rate_bound(model: &crate::LindbladModel, mean_photons: f64) -> crate::Result<BoundReport> {
    if model.target.is_hamiltonian() {
        hamiltonian_rate_bound(model, mean_photons)
    } else {
        noise_rate_bound(model, mean_photons)
    }
}
