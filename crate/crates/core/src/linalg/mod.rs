//! Dense exact linear algebra, generic over the scalar ring.
//!
//! Field scalars (Q and Q(t)) get reduced row echelon form, kernels,
//! inverses and exact solves; the polynomial ring Q[t] gets Smith normal
//! form and saturated kernels.

mod elim;
mod matrix;
mod snf;

pub use elim::{image_pivot_columns, inverse, kernel_basis, rank, rref, solve_unique};
pub use matrix::Matrix;
pub use snf::{determinant, kernel_basis_pid, smith_normal_form, Snf};

use std::fmt::{Debug, Display};
use std::ops::{Neg, Sub};

use num::{One, Zero};
use thiserror::Error;

use crate::arith::{Poly, RatFunc, Rational};

/// Commutative ring scalar usable as a matrix entry.
pub trait RingScalar:
    Clone + PartialEq + Debug + Display + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

impl RingScalar for Rational {}
impl RingScalar for Poly {}
impl RingScalar for RatFunc {}

/// Field scalar: ring scalar with inversion of nonzero elements.
pub trait FieldScalar: RingScalar {
    fn inv(&self) -> Option<Self>;
}

impl FieldScalar for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl FieldScalar for RatFunc {
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("rows have unequal lengths")]
    RaggedRows,
}
