//! The zeta side: ingest zero ordinates, evaluate ζ^{(n)} on the critical
//! line, and form the discrete sums over zeros that the random-matrix side
//! predicts.

mod cache;
mod dataset;
mod eval;
mod fixture;
mod sums;

pub use crate::euler::n_of_t_formula;
pub use cache::ResultCache;
pub use dataset::{load_zeros, ZeroDataset, FIRST_ORDINATE};
pub use eval::{
    hardy_z, riemann_siegel_z, theta, zeta_derivative, zeta_derivatives_direct, zeta_eval, ZetaEvalConfig,
    MAX_DERIVATIVE_ORDER, RIEMANN_SIEGEL_SWITCH,
};
pub use fixture::{generate_zeros, gram_point, write_zeros};
pub use sums::{
    complex_power_prediction, conjecture_prediction, conjecture_prediction_with_log, discrete_moment,
    landau_empirical, p_x_power_sum_over_zeros, p_x_sum_over_zeros, DiscreteMomentReport, LandauReport,
    ZetaDerivativeTable,
};
