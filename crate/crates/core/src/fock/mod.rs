//! Truncated Fock-space simulation of the thermal-loss model: master
//! equation, beamsplitter channel, classical and quantum Fisher information.

pub mod channel;
pub mod evolve;
pub mod fisher;
pub mod generator;
pub mod qfi;

pub use channel::{
    beamsplitter_distribution, beamsplitter_transition, beamsplitter_transition_sum,
    thermal_mix_distribution, thermal_weight_derivatives, thermal_weights, ChannelSpec,
    MAX_INPUT_PHOTONS,
};
pub use evolve::{
    evolve, integrate_master_equation, integrate_with_sensitivity, trajectory, EvolvedState,
    IntegratorOptions,
};
pub use fisher::{
    classical_fisher, evolve_and_count, fock_counting_fisher, parity_distribution,
    parity_fisher_squeezed_vacuum, photon_counting, ParityFisher,
};
pub use generator::{lindblad_rhs, Generator};
pub use qfi::{max_snr_check, sld_qfi, SLD_TOL};
