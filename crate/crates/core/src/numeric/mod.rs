//! Shared numerical building blocks.

pub mod linalg;
pub mod quad;
pub mod special;
pub mod summation;

pub use summation::{ComplexSum, NeumaierSum};
