//! Exact chain-level toolkit for complexes of twisted free sheaves on `P^r`
//! with duality: Koszul complexes, their wedge self-duality, symmetric forms
//! on half-Koszul complexes, Witt-theoretic splittings over the base field,
//! and independent acyclicity oracles.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod complex;
pub mod duality;
pub mod error;
pub mod field;
pub mod koszul;
pub mod matrix;
pub mod modp;
pub mod poly;
pub mod random;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar, Sign};
pub use matrix::{GradedMatrix, Mat};
pub use poly::{HomogPoly, Monomial, PolyRing};
