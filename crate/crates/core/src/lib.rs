//! Dilation operators on polynomial sequences: formal differential operator
//! representations, matrix representations in coefficient Hilbert spaces, and
//! closability, adjoint and spectral probes.

pub mod error;
pub mod exactcore;
pub mod eigensynth;
pub mod families;
pub mod formaldiff;
pub mod matrixrep;
pub mod shiftchar;
pub mod spectralops;
pub mod thinmat;

pub use error::{Error, Result};

/// Default index horizon for finite verification.
pub const DEFAULT_HORIZON: usize = 64;
