//! Shared domain types: Gaussian moments, truncated Fock space, the
//! thermal-loss Lindblad model and measurement outcome distributions.

mod fock;
mod gaussian_state;
mod lindblad;
mod operator;
mod outcome;

pub use fock::{
    cutoff_heuristic, gaussian_amplitudes, gaussian_cutoff, FockSpace, DEFAULT_TAIL_TOL,
};
pub use gaussian_state::{make_gaussian, photon_number, GaussianState};
pub use lindblad::{HamiltonianKind, LindbladModel, ParameterTag};
pub use operator::{
    expectation, fidelity, hermitian_eigen, hermitian_part, hermiticity_defect, hs_inner, kron,
    projector, trace, trace_distance, validate_density, DenseOperator, StateVector,
};
pub use outcome::OutcomeDistribution;

/// `(⟨x̂⟩, ⟨p̂⟩, Var x̂, Var p̂, Cov(x̂, p̂))` of a truncated density matrix, the
/// covariance symmetrised.
pub fn quadrature_moments(rho: &DenseOperator, space: &FockSpace) -> GaussianState {
    let (x, p) = space.quadratures();
    let mx = expectation(rho, &x).re;
    let mp = expectation(rho, &p).re;
    let vxx = expectation(rho, &(&x * &x)).re - mx * mx;
    let vpp = expectation(rho, &(&p * &p)).re - mp * mp;
    let vxp = 0.5 * expectation(rho, &(&x * &p + &p * &x)).re - mx * mp;
    GaussianState {
        mean: [mx, mp],
        cov: [[vxx, vxp], [vxp, vpp]],
    }
}
