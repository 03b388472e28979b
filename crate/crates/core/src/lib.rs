//! Exact constructions on partially ordered reduced rings that live inside
//! finite products of real number fields: minimal primes and total quotient
//! rings, idempotents and Baer hulls, finite real spectra, maximal partial
//! orderings, and symbolic real closure descriptors.

pub mod cli;
pub mod closures;
pub mod cones;
pub mod corpus;
pub mod error;
pub mod etale;
pub mod exact;
pub mod lp;
pub mod spectra;

pub use error::{Error, Result};
