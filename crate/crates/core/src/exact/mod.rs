//! Exact arithmetic substrate: rationals, Laurent polynomials, dense matrices.

pub mod laurent;
pub mod matrix;
pub mod rational;

pub use laurent::{Exponent, LaurentPoly};
pub use matrix::{solve_exact, ExactMatrix};
pub use rational::{int, parse_rational, qpoch, rat, Rational};
