//! Exact linear algebra over Q[t] for chains of free modules linked by
//! forward/backward maps whose composites are multiplication by a fixed
//! polynomial `s`.
//!
//! The library answers three questions about such a chain:
//!
//! * do the defining identities and the fiberwise kernel/image and
//!   complementarity conditions hold (`chain`),
//! * what is the module of linked homomorphisms between two chains, fiber by
//!   fiber and globally (`solver`),
//! * can the module be certified as a vector bundle of rank `r*m`, or refuted
//!   by a dimension jump (`solver`)?
//!
//! All computation is exact: arbitrary-precision rationals, dense polynomials
//! over Q, and reduced rational functions. No floating point is used anywhere.

pub mod arith;
pub mod chain;
pub mod generator;
pub mod linalg;
pub mod solver;

pub use arith::{Poly, RatFunc, Rational};
pub use chain::{Condition, FiberPoint, LinkedChain};
pub use linalg::Matrix;
