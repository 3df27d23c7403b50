//! Numerical laboratory for moments of derivatives of characteristic
//! polynomials of CUE matrices and of the Riemann zeta function at its zeros.
//!
//! The crate is split along the two sides of the comparison:
//!
//! * [`rmt`] samples Haar unitary matrices and evaluates characteristic
//!   polynomials and their derivatives.
//! * [`exact`] computes finite-N shifted expectations by three independent
//!   routes and extracts mixed derivative moments from them.
//! * [`hybrid`] implements the zero-product side of the hybrid Euler-Hadamard
//!   model and its Fisher-Hartwig asymptotics.
//! * [`euler`] holds Dirichlet-series algebra for the prime product P_X.
//! * [`zeta`] evaluates ζ and its derivatives and runs sums over zeros.
//!
//! Shared numerics live in [`numeric`] and Monte Carlo plumbing in [`stats`].

pub mod error;
pub mod euler;
pub mod exact;
pub mod hybrid;
pub mod numeric;
pub mod rmt;
pub mod stats;
pub mod zeta;

pub use error::{Error, Result};
pub use euler::{DerivativeSpec, DirichletPolynomial, ErrorClass, PrimeTable};
pub use exact::{ExactMoment, LaurentSymbol, MixedMomentSpec, ShiftVector};
pub use hybrid::{FisherHartwigExponents, FourierSeries, HybridParams, SmoothingKernel};
pub use num_complex::Complex64;
pub use rmt::{CharPolyCoefficients, CueSample, RngSeed, Sampler};
pub use stats::Estimate;
pub use zeta::{DiscreteMomentReport, ZeroDataset, ZetaEvalConfig};
