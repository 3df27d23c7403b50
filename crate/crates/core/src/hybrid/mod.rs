//! The zero-product side of the hybrid Euler–Hadamard model: the smoothing
//! kernel u, U(z), the phase function F_X and its Fourier coefficients,
//! the matrix analogue Z_{N,X} and Fisher–Hartwig asymptotics.

mod kernel;
mod model;
mod phase;

pub use kernel::{bump_density, SmoothingKernel};
pub use model::{
    ehrhardt_silbermann_asymptotic, hybrid_moment_mc, hybrid_moment_mc_with, log_z_nx_prime,
    log_z_nx_prime_all, assembled_prediction, theorem13_prediction, z_nx_prime_at_eigenvalue,
    EsAsymptotic, FisherHartwigExponents, HybridMcOptions, PhaseFunction,
};
pub use phase::{
    reduce_symmetric, s_m_closed_form, s_m_numeric, FourierSeries, FxTable, HybridParams,
    TrigPolynomial,
};
