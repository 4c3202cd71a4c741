use crate::error::{check_nonneg, Error, Result};
use crate::model::{DenseOperator, FockSpace, LindbladModel, DEFAULT_TAIL_TOL};
use crate::numerics::{integrate, OdeStats, StepControl};

use super::generator::{check_dim, Generator};

/// Levels at the top of the truncated space that must stay (almost) empty.
const EDGE_LEVELS: usize = 2;

#[derive(Clone, Copy, Debug)]
pub struct IntegratorOptions {
    pub control: StepControl,
    pub tail_tol: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            control: StepControl::default(),
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

/// `ρ(t)` and, when requested, `∂ρ(t)/∂θ` for the model's target.
#[derive(Clone, Debug)]
pub struct EvolvedState {
    pub t: f64,
    pub rho: DenseOperator,
    pub drho: Option<DenseOperator>,
    pub stats: OdeStats,
}

/// `ρ(t) = e^{t𝓛} ρ₀`.
pub fn integrate_master_equation(
    rho0: &DenseOperator,
    model: &LindbladModel,
    t: f64,
    space: &FockSpace,
) -> Result<DenseOperator> {
    Ok(evolve(rho0, None, model, t, space, IntegratorOptions::default())?.rho)
}

/// Integrates `ρ` together with its parameter derivative `σ = ∂ρ/∂θ`, which
/// obeys `dσ/dt = 𝓛σ + (∂𝓛)ρ`. `drho0` defaults to zero (parameter-independent
/// input state).
pub fn integrate_with_sensitivity(
    rho0: &DenseOperator,
    drho0: Option<&DenseOperator>,
    model: &LindbladModel,
    t: f64,
    space: &FockSpace,
) -> Result<(DenseOperator, DenseOperator)> {
    let start = drho0.cloned().unwrap_or_else(|| space.zeros());
    let out = evolve(rho0, Some(&start), model, t, space, IntegratorOptions::default())?;
    let drho = out.drho.expect("sensitivity requested");
    Ok((out.rho, drho))
}

pub fn evolve(
    rho0: &DenseOperator,
    drho0: Option<&DenseOperator>,
    model: &LindbladModel,
    t: f64,
    space: &FockSpace,
    options: IntegratorOptions,
) -> Result<EvolvedState> {
    check_dim(rho0, space)?;
    check_nonneg("t", t)?;
    check_edge(rho0, space, options.tail_tol)?;
    let gen = Generator::new(model, space);
    let (rho, drho, stats) = match drho0 {
        None => {
            let (rho, stats) = integrate(|r: &DenseOperator| gen.apply(r), rho0.clone(), t, options.control)?;
            (rho, None, stats)
        }
        Some(s0) => {
            check_dim(s0, space)?;
            let dgen = Generator::derivative(model, space)?;
            let (y, stats) = integrate(
                |y: &Vec<DenseOperator>| vec![gen.apply(&y[0]), gen.apply(&y[1]) + dgen.apply(&y[0])],
                vec![rho0.clone(), s0.clone()],
                t,
                options.control,
            )?;
            let mut y = y.into_iter();
            let rho = y.next().unwrap();
            let drho = y.next().unwrap();
            (rho, Some(drho), stats)
        }
    };
    check_edge(&rho, space, options.tail_tol)?;
    Ok(EvolvedState { t, rho, drho, stats })
}

/// States at each of the (ascending) `times`, integrating segment by segment.
pub fn trajectory(
    rho0: &DenseOperator,
    with_sensitivity: bool,
    model: &LindbladModel,
    times: &[f64],
    space: &FockSpace,
    options: IntegratorOptions,
) -> Result<Vec<EvolvedState>> {
    let mut out = Vec::with_capacity(times.len());
    let mut rho = rho0.clone();
    let mut drho = with_sensitivity.then(|| space.zeros());
    let mut now = 0.0;
    for &t in times {
        if t < now {
            return Err(Error::InvalidParameter {
                name: "times",
                value: t,
                reason: "must be ascending and non-negative",
            });
        }
        let step = evolve(&rho, drho.as_ref(), model, t - now, space, options)?;
        rho = step.rho.clone();
        drho = step.drho.clone();
        now = t;
        out.push(EvolvedState { t, ..step });
    }
    Ok(out)
}

fn check_edge(rho: &DenseOperator, space: &FockSpace, tail_tol: f64) -> Result<()> {
    let edge = space.edge_population(rho, EDGE_LEVELS);
    if edge > tail_tol {
        let d = space.dim();
        return Err(Error::CutoffTooSmall {
            cutoff: d,
            population: edge,
            suggested: d + d / 2 + 4,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fidelity, projector, trace, validate_density, ParameterTag};
    use num_complex::Complex64;

    #[test]
    fn fock_state_relaxes_to_thermal() {
        let space = FockSpace::new(40).unwrap();
        let model = LindbladModel::for_target(ParameterTag::Loss, 1.0, 0.2).unwrap();
        let rho0 = projector(&space.basis(3).unwrap());
        let rho = integrate_master_equation(&rho0, &model, 30.0, &space).unwrap();
        let th = space.thermal(0.2, 1e-8).unwrap();
        assert!(fidelity(&rho, &th) > 1.0 - 1e-6);
        validate_density(&rho).unwrap();
    }

    #[test]
    fn single_photon_decay_is_exponential() {
        let space = FockSpace::new(4).unwrap();
        let model = LindbladModel::for_target(ParameterTag::Loss, 2.0, 0.0).unwrap();
        let rho0 = projector(&space.basis(1).unwrap());
        let rho = integrate_master_equation(&rho0, &model, 0.8, &space).unwrap();
        assert!((rho[(1, 1)].re - (-1.6f64).exp()).abs() < 1e-10);
        assert!((trace(&rho) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn sensitivity_matches_finite_difference() {
        let space = FockSpace::new(20).unwrap();
        let psi = space.coherent(Complex64::new(1.0, 0.5), 1e-10).unwrap();
        let rho0 = projector(&psi);
        let t = 0.7;
        let (g, n) = (1.0, 0.15);
        let model = LindbladModel::for_target(ParameterTag::Temperature, g, n).unwrap();
        let (_, drho) = integrate_with_sensitivity(&rho0, None, &model, t, &space).unwrap();
        let h = 1e-5;
        let at = |n: f64| {
            let m = LindbladModel::for_target(ParameterTag::Temperature, g, n).unwrap();
            integrate_master_equation(&rho0, &m, t, &space).unwrap()
        };
        let fd = (at(n + h) - at(n - h)).map(|z| z / (2.0 * h));
        assert!((fd - drho).norm() < 1e-7);
    }

    #[test]
    fn truncation_is_detected() {
        let space = FockSpace::new(12).unwrap();
        let model = LindbladModel::for_target(ParameterTag::Loss, 1.0, 3.0).unwrap();
        let rho0 = projector(&space.basis(0).unwrap());
        match integrate_master_equation(&rho0, &model, 5.0, &space) {
            Err(Error::CutoffTooSmall { suggested, .. }) => assert!(suggested > 12),
            other => panic!("expected truncation error, got {other:?}"),
        }
    }
}
