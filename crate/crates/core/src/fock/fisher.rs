use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    projector, DenseOperator, FockSpace, LindbladModel, OutcomeDistribution, ParameterTag,
    DEFAULT_TAIL_TOL,
};

use super::evolve::integrate_with_sensitivity;
use super::generator::check_dim;

const ZERO_PROB: f64 = 1e-14;
const ZERO_DERIVATIVE: f64 = 1e-10;

/// `Σᵢ (∂pᵢ)²/pᵢ`.
///
/// Outcomes with `p < 1e−14` are skipped provided their derivative is below
/// `1e−10`; otherwise the information diverges and an error is returned.
pub fn classical_fisher(dist: &OutcomeDistribution) -> Result<f64> {
    let mut fi = 0.0;
    for k in 0..dist.len() {
        let p = dist.probs[k];
        let dp = dist.dprobs[k];
        if p < ZERO_PROB {
            if dp.abs() >= ZERO_DERIVATIVE {
                return Err(Error::FisherDivergence {
                    outcome: dist.labels[k],
                    derivative: dp,
                });
            }
            continue;
        }
        fi += dp * dp / p;
    }
    Ok(fi)
}

/// Photon-counting statistics `(⟨n|ρ|n⟩, ⟨n|∂ρ|n⟩)`.
pub fn photon_counting(rho: &DenseOperator, drho: &DenseOperator) -> Result<OutcomeDistribution> {
    let d = rho.nrows();
    if drho.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: drho.nrows(),
        });
    }
    OutcomeDistribution::new(
        (0..d).collect(),
        (0..d).map(|k| rho[(k, k)].re).collect(),
        (0..d).map(|k| drho[(k, k)].re).collect(),
        DEFAULT_TAIL_TOL,
    )
}

/// Photon counting coarse-grained to parity (label 0 even, 1 odd).
pub fn parity_distribution(rho: &DenseOperator, drho: &DenseOperator) -> Result<OutcomeDistribution> {
    photon_counting(rho, drho)?.coarse_grain(|n| n % 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityFisher {
    pub t: f64,
    pub mean_photons: f64,
    pub parity_fi: f64,
    pub counting_fi: f64,
    /// `t[N(1+2n_E) + n_E]/Γ`
    pub short_time_prediction: f64,
}

/// Loss-rate information of squeezed vacuum `S(r)|0⟩` after time `t`,
/// measured by parity and by full photon counting.
pub fn parity_fisher_squeezed_vacuum(
    r: f64,
    model: &LindbladModel,
    t: f64,
    space: &FockSpace,
) -> Result<ParityFisher> {
    if model.target != ParameterTag::Loss {
        return Err(Error::Unsupported(format!(
            "parity strategy estimates the loss rate, not {}",
            model.target
        )));
    }
    let psi = space.squeezed_vacuum(r, DEFAULT_TAIL_TOL)?;
    let rho0 = projector(&psi);
    check_dim(&rho0, space)?;
    let (rho, drho) = integrate_with_sensitivity(&rho0, None, model, t, space)?;
    let parity_fi = classical_fisher(&parity_distribution(&rho, &drho)?)?;
    let counting_fi = classical_fisher(&photon_counting(&rho, &drho)?)?;
    let n = r.sinh().powi(2);
    let ne = model.n_env;
    Ok(ParityFisher {
        t,
        mean_photons: n,
        parity_fi,
        counting_fi,
        short_time_prediction: t * (n * (1.0 + 2.0 * ne) + ne) / model.gamma,
    })
}

/// Photon-counting information about the model's target for a Fock input
/// `|n⟩` evolved with the master equation.
pub fn fock_counting_fisher(n: usize, model: &LindbladModel, t: f64, space: &FockSpace) -> Result<f64> {
    let rho0 = space.fock_density(n)?;
    let (rho, drho) = integrate_with_sensitivity(&rho0, None, model, t, space)?;
    classical_fisher(&photon_counting(&rho, &drho)?)
}

/// Photon-counting statistics of an arbitrary input under the model,
/// returning the evolved state as well.
pub fn evolve_and_count(
    rho0: &DenseOperator,
    model: &LindbladModel,
    t: f64,
    space: &FockSpace,
) -> Result<(DenseOperator, DenseOperator, OutcomeDistribution)> {
    let (rho, drho) = integrate_with_sensitivity(rho0, None, model, t, space)?;
    let dist = photon_counting(&rho, &drho)?;
    Ok((rho, drho, dist))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli() {
        let phi: f64 = 0.3;
        let d = OutcomeDistribution::new(vec![0, 1], vec![1.0 - phi, phi], vec![-1.0, 1.0], 1e-12).unwrap();
        let fi = classical_fisher(&d).unwrap();
        assert!((fi - 1.0 / (phi * (1.0 - phi))).abs() < 1e-12);
    }

    #[test]
    fn divergence_is_reported() {
        let d = OutcomeDistribution::new(vec![0, 1], vec![1.0, 0.0], vec![-1e-3, 1e-3], 1e-12).unwrap();
        assert!(matches!(classical_fisher(&d), Err(Error::FisherDivergence { outcome: 1, .. })));
    }

    #[test]
    fn merging_equal_log_derivatives_keeps_information() {
        // outcomes 1 and 2 share dp/p = 2
        let d = OutcomeDistribution::new(
            vec![0, 1, 2],
            vec![0.7, 0.1, 0.2],
            vec![-0.6, 0.2, 0.4],
            1e-12,
        )
        .unwrap();
        let merged = d.coarse_grain(|k| usize::from(k > 0)).unwrap();
        let a = classical_fisher(&d).unwrap();
        let b = classical_fisher(&merged).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn product_doubles_information() {
        let d = OutcomeDistribution::new(vec![0, 1, 2], vec![0.5, 0.3, 0.2], vec![-0.2, 0.15, 0.05], 1e-12).unwrap();
        let single = classical_fisher(&d).unwrap();
        let pair = classical_fisher(&d.product(&d).unwrap()).unwrap();
        assert!((pair - 2.0 * single).abs() < 1e-12);
    }

    #[test]
    fn parity_at_zero_time() {
        let space = FockSpace::new(70).unwrap();
        let model = LindbladModel::for_target(ParameterTag::Loss, 1.0, 0.1).unwrap();
        let r = 1.0f64.asinh();
        let res = parity_fisher_squeezed_vacuum(r, &model, 0.0, &space).unwrap();
        assert_eq!(res.parity_fi, 0.0);
        assert_eq!(res.counting_fi, 0.0);
    }
}
