//! Exact scalar and polynomial arithmetic.

pub mod poly;
pub mod rat;
pub mod scalar;
pub mod surd;

pub use poly::{change_basis, expand_in, Degree, Poly};
pub use rat::Rat;
pub use scalar::{parse_ratio, rational, ExactScalar};
pub use surd::{PrimePowers, Surd};
