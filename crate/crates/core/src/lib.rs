pub mod cli;
pub mod diffusion;
pub mod error;
pub mod fractional;
pub mod hfunction;
pub mod kinetic;
pub mod quadrature;
pub mod special;
pub mod table;
pub mod transforms;
pub mod verify;

pub use error::{FrackError, Result};
