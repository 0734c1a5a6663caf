//! Code-based full-domain-hash signatures and the tooling around them.
//!
//! The crate is split along the lines of the build:
//!
//! * [`f2`] dense bit-packed linear algebra over GF(2);
//! * [`codes`] parity-check constructions, syndromes and exact small
//!   distributions;
//! * [`oracle`] hash-to-syndrome oracles;
//! * [`scheme`] key generation, salted signing and verification;
//! * [`isd`] Prange, generalized ISD, multi-target decoding and the 4-sum
//!   reduction;
//! * [`exponents`] asymptotic cost exponents;
//! * [`reduction`] a classical simulation of the game sequence and the
//!   bound calculator.

pub mod codes;
pub mod combinatorics;
mod error;
pub mod exponents;
pub mod f2;
pub mod isd;
pub mod oracle;
pub mod reduction;
pub mod scheme;
pub mod trials;

pub use error::{Error, Result};
