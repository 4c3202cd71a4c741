//! Small numerical kernels: scalar optimisation, quadrature, ODE
//! integration and equality-constrained least squares.

pub mod lsq;
pub mod ode;
pub mod optimize;
pub mod quadrature;

pub use lsq::{equality_constrained_quadratic, ConstrainedSolution};
pub use ode::{integrate, OdeState, OdeStats, StepControl};
pub use optimize::{
    golden_section_max, linear_grid, log_grid, maximize_log_grid, maximize_log_unimodal,
};
pub use quadrature::adaptive_simpson;
