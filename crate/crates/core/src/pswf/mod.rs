//! Prolate spheroidal wave functions, their Legendre expansions, and the
//! Remez–Turán constants for the three signal models.

mod basis;
mod remez;
pub mod special;

pub use basis::{beta_coeff_bound, compute_basis, lambda_sum_bound, ProlateBasis};
pub use remez::{empirical_remez_ratio, remez_constant, remez_k, remez_log_constant, remez_trials, RemezTrial, RemezConstant, RemezModel};
pub use special::{
    finite_fourier_legendre, legendre, legendre_normalized, spherical_bessel,
    FiniteFourierLegendre,
};
