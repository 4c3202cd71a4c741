//! The thermal-loss channel written as a beamsplitter with a thermal
//! environment reproduces the master equation.

use bosonic_metrology::fock::{thermal_mix_distribution, trajectory, ChannelSpec, IntegratorOptions};
use bosonic_metrology::model::DEFAULT_TAIL_TOL;
use bosonic_metrology::{FockSpace, LindbladModel, ParameterTag};

#[test]
fn photon_statistics_agree_with_integration() {
    let times = [0.01, 0.1, 1.0];
    for n_env in [0.0, 0.1, 1.0] {
        let model = LindbladModel::for_target(ParameterTag::Loss, 1.0, n_env).unwrap();
        for n_in in 0..=20usize {
            let space = FockSpace::new(n_in + 32).unwrap();
            let rho0 = space.fock_density(n_in).unwrap();
            let states = trajectory(&rho0, false, &model, &times, &space, IntegratorOptions::default()).unwrap();
            for s in &states {
                let spec = ChannelSpec::new((-s.t).exp(), n_env, DEFAULT_TAIL_TOL * 1e-4).unwrap();
                let dist = thermal_mix_distribution(n_in, &spec).unwrap();
                for k in 0..space.dim() {
                    let p = dist.probs.get(k).copied().unwrap_or(0.0);
                    let q = s.rho[(k, k)].re;
                    assert!((p - q).abs() < 1e-6, "n_in={n_in} n_E={n_env} t={} k={k}: {p} vs {q}", s.t);
                }
            }
        }
    }
}

#[test]
fn loss_without_bath_is_binomial_thinning() {
    let space = FockSpace::new(24).unwrap();
    let model = LindbladModel::for_target(ParameterTag::Loss, 0.7, 0.0).unwrap();
    let states = trajectory(&space.fock_density(6).unwrap(), false, &model, &[0.4], &space, IntegratorOptions::default()).unwrap();
    let kappa = (-0.7f64 * 0.4).exp();
    let mean: f64 = (0..24).map(|k| k as f64 * states[0].rho[(k, k)].re).sum();
    assert!((mean - 6.0 * kappa).abs() < 1e-8);
}
