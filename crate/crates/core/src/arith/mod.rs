//! Exact scalar arithmetic: rationals, dense polynomials over Q, and reduced
//! rational functions Q(t).

mod poly;
mod ratfunc;
mod rational;

pub use poly::{Poly, RootSplit};
pub use ratfunc::RatFunc;
pub use rational::{parse_rational, rat, rat_int, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArithError {
    #[error("invalid rational literal `{0}` (expected `p` or `p/q` with integer p, q and q != 0)")]
    InvalidRational(String),
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("pole at t = {0}")]
    PoleAtPoint(Rational),
}
