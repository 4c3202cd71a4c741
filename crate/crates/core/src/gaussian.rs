//! Closed-form moment evolution of Gaussian probes under the thermal-loss
//! model and the homodyne signal-to-noise ratio built from it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_nonneg, check_positive, Error, Result};
use crate::model::{make_gaussian, GaussianState, HamiltonianKind, LindbladModel, ParameterTag};
use crate::numerics::{maximize_log_grid, maximize_log_unimodal};

/// Default search interval for the iteration time, in units of `1/Γ`.
pub const DEFAULT_T_RANGE: (f64, f64) = (1e-4, 20.0);
const PRESCAN_POINTS: usize = 64;
const FALLBACK_POINTS: usize = 1024;
const T_REL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnrResult {
    pub t: f64,
    pub snr: f64,
    /// `snr / t`, zero at `t = 0`.
    pub rate: f64,
}

impl SnrResult {
    fn new(t: f64, snr: f64) -> Self {
        Self {
            t,
            snr,
            rate: if t > 0.0 { snr / t } else { 0.0 },
        }
    }
}

/// Quadrature rotation `x′ = x cos θ + p sin θ`, `p′ = −x sin θ + p cos θ`.
fn rotation(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, s], [-s, c]]
}

fn one_minus_exp(x: f64) -> f64 {
    -(-x).exp_m1()
}

fn frequency_and_drive(model: &LindbladModel) -> Result<(f64, f64)> {
    match model.hamiltonian {
        HamiltonianKind::None => Ok((0.0, 0.0)),
        HamiltonianKind::Frequency(w) => Ok((w, 0.0)),
        HamiltonianKind::Displacement(a) => Ok((0.0, a)),
        HamiltonianKind::Squeezing(_) => Err(Error::Unsupported(
            "Gaussian moment evolution under the squeezing Hamiltonian is not provided; use the cat protocol".into(),
        )),
    }
}

/// First and second moments after time `t`.
pub fn evolve_moments(state: &GaussianState, model: &LindbladModel, t: f64) -> Result<GaussianState> {
    check_nonneg("t", t)?;
    let (omega, drive) = frequency_and_drive(model)?;
    let g = model.gamma;
    let r = rotation(omega * t);
    let damp = (-0.5 * g * t).exp();
    let m = state.mean;
    let mut mean = [
        damp * (r[0][0] * m[0] + r[0][1] * m[1]),
        damp * (r[1][0] * m[0] + r[1][1] * m[1]),
    ];
    mean[0] += 4.0 * drive * one_minus_exp(0.5 * g * t) / g;
    let c = state.cov;
    let mut rc = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    rc[i][j] += r[i][k] * c[k][l] * r[j][l];
                }
            }
        }
    }
    let keep = (-g * t).exp();
    let fill = one_minus_exp(g * t) * (1.0 + 2.0 * model.n_env);
    let mut cov = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            cov[i][j] = keep * rc[i][j] + if i == j { fill } else { 0.0 };
        }
    }
    // exact symmetry despite rounding
    let off = 0.5 * (cov[0][1] + cov[1][0]);
    cov[0][1] = off;
    cov[1][0] = off;
    Ok(GaussianState { mean, cov })
}

/// `∂⟨x̂(t)⟩/∂θ` for the model's target, analytically.
pub fn mean_x_derivative(state: &GaussianState, model: &LindbladModel, t: f64) -> Result<f64> {
    let (omega, drive) = frequency_and_drive(model)?;
    let g = model.gamma;
    let damp = (-0.5 * g * t).exp();
    let (s, c) = (omega * t).sin_cos();
    let [x0, p0] = state.mean;
    match model.target {
        ParameterTag::Frequency => Ok(damp * t * (-x0 * s + p0 * c)),
        ParameterTag::Displacement => Ok(4.0 * one_minus_exp(0.5 * g * t) / g),
        ParameterTag::Loss => {
            let rot_x = x0 * c + p0 * s;
            let drive_part = 4.0 * drive * (0.5 * t * damp / g - one_minus_exp(0.5 * g * t) / (g * g));
            Ok(-0.5 * t * damp * rot_x + drive_part)
        }
        ParameterTag::Squeezing | ParameterTag::Temperature => Err(Error::Unsupported(format!(
            "the homodyne mean carries no first-order information about {}; use a Fock-space strategy",
            model.target
        ))),
    }
}

/// Homodyne detection of `x̂`: `S = |∂⟨x̂(t)⟩|² / Var x̂(t)`.
pub fn homodyne_snr(probe: &GaussianState, model: &LindbladModel, t: f64) -> Result<SnrResult> {
    check_nonneg("t", t)?;
    let dx = mean_x_derivative(probe, model, t)?;
    let moments = evolve_moments(probe, model, t)?;
    let var = moments.cov[0][0];
    Ok(SnrResult::new(t, dx * dx / var))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationOptimum {
    pub t_star: f64,
    pub rate_star: f64,
}

/// Maximises `S(t)/t` over `t_range` by golden-section search in `ln t`
/// after a unimodality pre-scan.
pub fn optimize_iteration_time(
    probe: &GaussianState,
    model: &LindbladModel,
    t_range: (f64, f64),
) -> Result<IterationOptimum> {
    // surface unsupported targets before the search
    homodyne_snr(probe, model, t_range.0)?;
    let f = |t: f64| homodyne_snr(probe, model, t).map(|r| r.rate).unwrap_or(f64::NAN);
    let (t_star, rate_star) = maximize_log_unimodal(f, t_range.0, t_range.1, PRESCAN_POINTS, T_REL_TOL)?;
    Ok(IterationOptimum { t_star, rate_star })
}

/// Grid fallback for [`optimize_iteration_time`] (1024 log points plus
/// local refinement).
pub fn optimize_iteration_time_grid(
    probe: &GaussianState,
    model: &LindbladModel,
    t_range: (f64, f64),
) -> Result<IterationOptimum> {
    homodyne_snr(probe, model, t_range.0)?;
    let f = |t: f64| homodyne_snr(probe, model, t).map(|r| r.rate).unwrap_or(f64::NAN);
    let (t_star, rate_star) = maximize_log_grid(f, t_range.0, t_range.1, FALLBACK_POINTS, T_REL_TOL)?;
    Ok(IterationOptimum { t_star, rate_star })
}

/// `t_range` scaled to the model's loss rate.
pub fn default_t_range(model: &LindbladModel) -> (f64, f64) {
    (DEFAULT_T_RANGE.0 / model.gamma, DEFAULT_T_RANGE.1 / model.gamma)
}

/// Probe used by the homodyne strategies: the frequency probe is displaced
/// along `p̂`, all others along `x̂`; squeezing always reduces `Var x̂`.
pub fn homodyne_probe(target: ParameterTag, photons: f64, r: f64) -> Result<GaussianState> {
    check_nonneg("photons", photons)?;
    check_nonneg("r", r)?;
    let squeeze = r.sinh().powi(2);
    if squeeze > photons * (1.0 + 1e-12) + 1e-12 {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "squeezing uses more photons than the budget",
        });
    }
    let amp = (photons - squeeze).max(0.0).sqrt();
    let alpha = match target {
        ParameterTag::Frequency => Complex64::new(0.0, amp),
        ParameterTag::Displacement => Complex64::new(0.0, 0.0),
        _ => Complex64::new(amp, 0.0),
    };
    make_gaussian(alpha, r, 0.0)
}

/// Effective extra bath occupation produced by a Gaussian-random drive of
/// variance `σ²` acting for time `t`:
/// `n(t) = σ² [4(1 − e^{−tΓ/2})/Γ]² / (1 − e^{−tΓ})`.
pub fn effective_thermal_photons(sigma2: f64, gamma: f64, t: f64) -> Result<f64> {
    check_nonneg("sigma2", sigma2)?;
    check_positive("gamma", gamma)?;
    check_nonneg("t", t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let shift = 4.0 * one_minus_exp(0.5 * gamma * t) / gamma;
    Ok(sigma2 * shift * shift / one_minus_exp(gamma * t))
}
