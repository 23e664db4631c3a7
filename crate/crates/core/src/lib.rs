//! Exact computer algebra for modules over vector fields on affine varieties.

pub mod error;
pub mod exactpoly;
pub mod groebner;
pub mod variety;
pub mod vfields;
pub mod jets;
pub mod repn;
pub mod gauge;
pub mod rudakov;
pub mod pairing;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
