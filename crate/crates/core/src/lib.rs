//! Higher order Hochschild homology over spheres.

pub mod algebra;
pub mod error;
pub mod field;
pub mod formal;
pub mod format;
pub mod homology;
pub mod homotopy;
pub mod lincomb;
pub mod loday;
pub mod sphere;
pub mod structures;
pub mod verify;

pub use error::{Error, Result};
