//! Exact computer algebra for linearly compact Lie superalgebras.
//!
//! Everything is computed over the rationals with no floating point:
//! truncated polynomial rings in commuting and anticommuting
//! indeterminates, super vector fields and their bracket, a super
//! differential-form calculus, the classical series (W, S, CS, H, CH,
//! K) and their super relatives (HO, SHO, KO, tilde twists), the
//! exceptional algebras E(5|10), E(3|6) and E(4|4) as finite graded
//! structure tables, lambda-bracket conformal algebras, and the
//! hypercharge/isospin multiplet arithmetic behind the fundamental
//! particle table.
//!
//! Truncation is tracked honestly: values carry an exactness flag, and
//! every verification routine reports "inconclusive" instead of a
//! false verdict whenever the jet window was too small.

// modules under construction
pub mod context;
pub mod error;


pub mod linalg;
pub mod monomial;

pub mod poly;
pub mod scalar;

pub mod vf;

pub use context::Context;
pub use error::AlgError;
pub use monomial::SuperMonomial;
pub use poly::{SuperPolynomial, TermParity};
pub use scalar::{q, qi, Scalar};
pub use vf::SuperVectorField;
