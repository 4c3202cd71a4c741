use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_nonneg, Error, Result};

const PHYSICALITY_TOL: f64 = 1e-10;

/// First and second moments of a single-mode Gaussian state.
///
/// Quadratures are `x̂ = a + a†` and `p̂ = −i(a − a†)`, so the vacuum has unit
/// covariance matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
}

impl GaussianState {
    /// Validated constructor: `cov` must be symmetric with `det cov ≥ 1`.
    pub fn new(mean: [f64; 2], cov: [[f64; 2]; 2]) -> Result<Self> {
        for &m in &mean {
            check_finite("mean", m)?;
        }
        for row in &cov {
            for &c in row {
                check_finite("cov", c)?;
            }
        }
        if (cov[0][1] - cov[1][0]).abs() > PHYSICALITY_TOL {
            return Err(Error::InvalidState("covariance matrix is not symmetric".into()));
        }
        let state = Self { mean, cov };
        if cov[0][0] <= 0.0 || state.det() < 1.0 - PHYSICALITY_TOL {
            return Err(Error::InvalidState(format!(
                "covariance violates the uncertainty relation (det = {:.6e})",
                state.det()
            )));
        }
        Ok(state)
    }

    pub fn vacuum() -> Self {
        Self {
            mean: [0.0, 0.0],
            cov: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    /// Thermal state with `n` mean photons.
    pub fn thermal(n: f64) -> Result<Self> {
        check_nonneg("n", n)?;
        let v = 1.0 + 2.0 * n;
        Ok(Self {
            mean: [0.0, 0.0],
            cov: [[v, 0.0], [0.0, v]],
        })
    }

    pub fn coherent(alpha: Complex64) -> Self {
        Self {
            mean: [2.0 * alpha.re, 2.0 * alpha.im],
            cov: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    pub fn det(&self) -> f64 {
        self.cov[0][0] * self.cov[1][1] - self.cov[0][1] * self.cov[1][0]
    }

    pub fn photon_number(&self) -> f64 {
        photon_number(self)
    }

    /// Complex amplitude `⟨a⟩`.
    pub fn amplitude(&self) -> Complex64 {
        Complex64::new(self.mean[0] / 2.0, self.mean[1] / 2.0)
    }
}

/// `N = (⟨x̂⟩² + ⟨p̂⟩²)/4 + (tr cov − 2)/4`.
pub fn photon_number(state: &GaussianState) -> f64 {
    let [x, p] = state.mean;
    (x * x + p * p) / 4.0 + (state.cov[0][0] + state.cov[1][1] - 2.0) / 4.0
}

/// `D(α) S(r, axis) |0⟩` as moments.
///
/// The quadrature at angle `squeeze_axis` (measured from the x̂ axis) carries
/// the reduced variance `e^{−2r}`.
pub fn make_gaussian(alpha: Complex64, r: f64, squeeze_axis: f64) -> Result<GaussianState> {
    check_nonneg("r", r)?;
    check_finite("squeeze_axis", squeeze_axis)?;
    check_finite("alpha", alpha.norm())?;
    let (s, c) = squeeze_axis.sin_cos();
    let lo = (-2.0 * r).exp();
    let hi = (2.0 * r).exp();
    // R diag(lo, hi) Rᵀ with R = [[c, −s], [s, c]]
    let cov = [
        [c * c * lo + s * s * hi, c * s * (lo - hi)],
        [c * s * (lo - hi), s * s * lo + c * c * hi],
    ];
    Ok(GaussianState {
        mean: [2.0 * alpha.re, 2.0 * alpha.im],
        cov,
    })
}
