//! Numerical verification of mirror symmetry for discretized Spencer complexes
//! on a closed curve, with exact characteristic-class arithmetic alongside.

pub mod char_class;
pub mod error;
pub mod geometry;
pub mod lie_core;
pub mod spectral_verify;
pub mod spencer_assembly;

pub use error::{Error, Result};
