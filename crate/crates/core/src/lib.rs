//! Finite-dimensional formal models of arc spaces on hypersurface germs,
//! computed exactly over finite-dimensional local test-rings.

pub mod arc;
pub mod curve;
pub mod error;
pub mod expr;
pub mod kernel;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
