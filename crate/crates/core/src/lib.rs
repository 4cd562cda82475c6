//! Exact construction of classical Goppa codes, algebraic-geometry codes,
//! subfield subcodes and Cartier codes on smooth plane curves over small
//! finite fields.

pub mod error;
pub mod ff;
pub mod polymat;

pub use error::{Error, Result};
pub mod codes;
pub mod goppa;
pub mod curve;
pub mod klein;
pub mod text;
pub mod cartier;
pub mod agc;
