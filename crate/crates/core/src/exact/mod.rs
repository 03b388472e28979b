//! Exact rational and real-algebraic arithmetic.
//!
//! All field arithmetic elsewhere in the crate happens in quotient rings
//! `Q[t]/(f)`; a [`RealAlgebraic`] is only ever used as an evaluation point.

pub mod complex;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod real;

pub use poly::Poly;
pub use rational::Rational;
pub use real::{real_roots, sign_at, RealAlgebraic, Sign, SturmSequence};
