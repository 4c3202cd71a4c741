use std::cell::Cell;

use nalgebra::{DMatrix, DVector};

use super::family::{AffineFamily, HCorrection};
use super::hamiltonian::numeric_h_optimization;
use crate::error::{check_nonneg, Error, Result};
use crate::model::{expectation, DenseOperator, FockSpace, LindbladModel};
use crate::numerics::{adaptive_simpson, golden_section_max, log_grid};

const QUADRATURE_TOL: f64 = 1e-8;

/// `4t²Δ²G` for a constant generator.
pub fn quadratic_bound_constant(variance: f64, t: f64) -> f64 {
    4.0 * t * t * variance
}

/// `I(t) ≤ 4(∫₀ᵗ √(Δ²Ḣ(t′)) dt′)²` for a variance profile along the
/// trajectory.
pub fn quadratic_bound(variance_profile: impl Fn(f64) -> f64, t: f64) -> Result<f64> {
    check_nonneg("t", t)?;
    let bad = Cell::new(None);
    let integral = adaptive_simpson(
        |s| {
            let v = variance_profile(s);
            if v < 0.0 || !v.is_finite() {
                bad.set(Some(v));
                return 0.0;
            }
            v.sqrt()
        },
        0.0,
        t,
        QUADRATURE_TOL,
    )?;
    if let Some(v) = bad.get() {
        return Err(Error::InvalidParameter {
            name: "variance_profile",
            value: v,
            reason: "variance samples must be finite and non-negative",
        });
    }
    Ok(4.0 * integral * integral)
}

/// `I(t) ≤ ∫₀ᵗ R(N(t′)) dt′` with `R = 4⟨𝔞⟩` the rate bound of the target at
/// the photon number `N(t′) = N₀e^{−Γt′} + n_E(1 − e^{−Γt′})` of a passive
/// trajectory.
pub fn linear_bound(model: &LindbladModel, initial_photons: f64, t: f64) -> Result<f64> {
    check_nonneg("t", t)?;
    check_nonneg("initial_photons", initial_photons)?;
    let g = model.gamma;
    let n = model.n_env;
    let probe = super::rate_bound(model, initial_photons)?;
    if probe.unbounded {
        return Err(Error::Unbounded(probe.note.unwrap_or_default()));
    }
    let failure = Cell::new(None);
    let v = adaptive_simpson(
        |s| {
            let decay = (-g * s).exp();
            let photons = initial_photons * decay + n * (1.0 - decay);
            match super::rate_bound(model, photons) {
                Ok(r) => r.rate_bound,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        },
        0.0,
        t,
        QUADRATURE_TOL,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// `4(⟨𝔞(h)⟩ + √(⟨𝔟(h)²⟩ I))`, the bound on `dI/dt` at a state with current
/// QFI `I`, using the general operators.
pub fn theorem1_rate(
    rho: &DenseOperator,
    h: &HCorrection,
    model: &LindbladModel,
    qfi_now: f64,
    space: &FockSpace,
) -> Result<f64> {
    let qfi = check_nonneg("qfi_now", qfi_now)?;
    if rho.nrows() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: rho.nrows(),
        });
    }
    let (a, b) = super::ab_operators(h, model, space, true)?;
    let a_mean = expectation(rho, &a).re;
    let b2 = expectation(rho, &(&b * &b)).re.max(0.0);
    Ok(4.0 * (a_mean + (b2 * qfi).sqrt()))
}

/// [`theorem1_rate`] minimised over `h`.
///
/// Both `⟨𝔞⟩` and `√⟨𝔟²⟩` are convex in `h`, so the minimiser lies on the
/// path of `argmin ⟨𝔞⟩ + λ⟨𝔟²⟩`, which is scanned in `λ` and refined; the
/// constrained optimum (`𝔟 = 0`) and `h = 0` are kept as candidates.
pub fn theorem1_rate_min(
    rho: &DenseOperator,
    model: &LindbladModel,
    qfi_now: f64,
    space: &FockSpace,
) -> Result<(HCorrection, f64)> {
    let qfi = check_nonneg("qfi_now", qfi_now)?;
    if rho.nrows() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: rho.nrows(),
        });
    }
    let fam = AffineFamily::new(model, space, true)?;
    let (q, c, k) = fam.a_quadratic(rho);
    let (p, pc, m) = fam.b2_quadratic(rho);
    let objective = |x: &DVector<f64>| {
        let a = x.dot(&(&q * x)) + 2.0 * c.dot(x) + k;
        let b2 = (x.dot(&(&p * x)) + 2.0 * pc.dot(x) + m).max(0.0);
        4.0 * (a + (b2 * qfi).sqrt())
    };
    let path = |lambda: f64| -> Option<DVector<f64>> {
        let lhs: DMatrix<f64> = &q + &p * lambda;
        let rhs = -(&c + &pc * lambda);
        let svd = lhs.svd(true, true);
        let eps = 1e-13 * svd.singular_values.max();
        svd.solve(&rhs, eps).ok()
    };
    let n = fam.vars();
    let mut best = (DVector::zeros(n), objective(&DVector::zeros(n)));
    let consider = |x: DVector<f64>, best: &mut (DVector<f64>, f64)| {
        let v = objective(&x);
        if v < best.1 {
            *best = (x, v);
        }
    };
    if let Ok(opt) = numeric_h_optimization(model, rho, space) {
        consider(DVector::from_vec(opt.h.to_real()), &mut best);
    }
    let scale = q.trace().abs().max(1e-300) / p.trace().abs().max(1e-300);
    let us = log_grid(1e-10, 1e14, 97);
    let mut best_u = None;
    let mut best_path = f64::INFINITY;
    for &u in &us {
        if let Some(x) = path(u * scale) {
            let v = objective(&x);
            if v < best_path {
                best_path = v;
                best_u = Some(u);
            }
            consider(x, &mut best);
        }
    }
    if let Some(u0) = best_u {
        let step = (us[1] / us[0]).ln();
        let (s, _) = golden_section_max(
            |s| path(s.exp() * scale).map_or(f64::NEG_INFINITY, |x| -objective(&x)),
            u0.ln() - step,
            u0.ln() + step,
            1e-6,
        );
        if let Some(x) = path(s.exp() * scale) {
            consider(x, &mut best);
        }
    }
    let h = HCorrection::from_real(best.0.as_slice(), fam.jumps)?;
    Ok((h, best.1))
}
