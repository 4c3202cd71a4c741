use serde::{Deserialize, Serialize};

use super::BoundReport;
use crate::error::{check_nonneg, check_positive, Error, Result};
use crate::model::{LindbladModel, ParameterTag};

/// `I/t ≤ 4⟨L̇†L̇⟩` for a noise parameter on a photon budget `N`:
///
/// * loss: `(N(1+2n_E) + n_E)/Γ`
/// * temperature: `ΓN(1+2n_E)/(n_E(1+n_E)) + Γ/n_E`, unbounded at `n_E = 0`
///
/// The component `without_factor_4` is `⟨L̇†L̇⟩` itself.
pub fn noise_rate_bound(model: &LindbladModel, mean_photons: f64) -> Result<BoundReport> {
    let n_ph = check_nonneg("mean_photons", mean_photons)?;
    let g = model.gamma;
    let n = model.n_env;
    let (photon_term, constant_term) = match model.target {
        ParameterTag::Loss => (n_ph * (1.0 + 2.0 * n) / g, n / g),
        ParameterTag::Temperature => {
            if n == 0.0 {
                return Ok(BoundReport::unbounded(
                    ParameterTag::Temperature,
                    "the temperature bound diverges as 1/n_E at zero temperature",
                ));
            }
            (g * n_ph * (1.0 + 2.0 * n) / (n * (1.0 + n)), g / n)
        }
        other => {
            return Err(Error::Unsupported(format!(
                "noise bound is defined for loss and temperature, not {other}"
            )))
        }
    };
    let rate = photon_term + constant_term;
    Ok(BoundReport {
        target: model.target,
        rate_bound: rate,
        tau: None,
        unbounded: false,
        components: vec![
            ("photon_term".into(), photon_term),
            ("constant_term".into(), constant_term),
            ("without_factor_4".into(), rate / 4.0),
        ],
        note: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PassiveTemperatureBounds {
    /// `1/(n_E(1+n_E))`, the information in the bath state itself.
    pub single_shot: f64,
    /// Channel-purification bound for input photon number `N`.
    pub purification: f64,
}

/// Bounds on the temperature QFI of a passive strategy (prepare, wait,
/// measure) through a beamsplitter of transmissivity `κ`.
pub fn passive_temperature_bounds(n_env: f64, mean_photons: f64, kappa: f64) -> Result<PassiveTemperatureBounds> {
    let n = check_positive("n_env", n_env)?;
    let n_ph = check_nonneg("mean_photons", mean_photons)?;
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            value: kappa,
            reason: "transmissivity must lie in (0, 1]",
        });
    }
    let single_shot = 1.0 / (n * (1.0 + n));
    let loss = 1.0 - kappa;
    let purification = if loss == 0.0 {
        0.0
    } else {
        1.0 / (n * (n + 1.0 / loss))
            + kappa * n_ph * (2.0 * n + 1.0) * loss / (n * (n + 1.0) * (n * loss + 1.0).powi(2))
    };
    Ok(PassiveTemperatureBounds {
        single_shot,
        purification,
    })
}
