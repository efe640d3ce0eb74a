//! Chains of free modules over Q[t] linked by forward and backward maps.
//!
//! A chain holds `n` modules of rank `r` (the `F` side) and `n` of rank `m`
//! (the `G` side). Adjacent modules are linked by forward maps `f_i`, `g_i`
//! and backward maps `f^i`, `g^i`; composing a forward map with its partner
//! in either order must be multiplication by the fixed polynomial `s`.
//! Matrices act on column vectors, so `g_i` is the matrix of the map from
//! the fiber of module `i` to that of module `i + 1`.

mod conditions;
pub mod io;

pub use conditions::{
    Condition, ConditionFailure, ConditionReport, FailureKind, ReportPoint,
};

use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use crate::arith::{Poly, Rational};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("{0}")]
    ShapeMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("t = {0} is not a special point: s does not vanish there")]
    NotASpecialPoint(FiberPoint),
}

/// A point of the base line Spec Q[t]: either a rational point `t = a` or
/// the generic point, where computation happens over Q(t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberPoint {
    At(Rational),
    Generic,
}

impl fmt::Display for FiberPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberPoint::At(a) => write!(f, "t={a}"),
            FiberPoint::Generic => write!(f, "generic"),
        }
    }
}

/// The four map families of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    FFwd,
    FBwd,
    GFwd,
    GBwd,
}

impl Family {
    fn label(self) -> &'static str {
        match self {
            Family::FFwd => "f_fwd",
            Family::FBwd => "f_bwd",
            Family::GFwd => "g_fwd",
            Family::GBwd => "g_bwd",
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct LinkedChain {
    r: usize,
    m: usize,
    n: usize,
    s: Poly,
    f_fwd: Vec<Matrix<Poly>>,
    f_bwd: Vec<Matrix<Poly>>,
    g_fwd: Vec<Matrix<Poly>>,
    g_bwd: Vec<Matrix<Poly>>,
}

impl LinkedChain {
    /// Validates the shape contract: `n >= 1`, each family has `n - 1`
    /// matrices, `f` maps are `r x r` and `g` maps are `m x m`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        r: usize,
        m: usize,
        n: usize,
        s: Poly,
        f_fwd: Vec<Matrix<Poly>>,
        f_bwd: Vec<Matrix<Poly>>,
        g_fwd: Vec<Matrix<Poly>>,
        g_bwd: Vec<Matrix<Poly>>,
    ) -> Result<Self, ChainError> {
        if r == 0 || m == 0 || n == 0 {
            return Err(ChainError::ShapeMismatch(format!(
                "ranks and length must be positive, got r={r}, m={m}, n={n}"
            )));
        }
        for (family, list, dim) in [
            (Family::FFwd, &f_fwd, r),
            (Family::FBwd, &f_bwd, r),
            (Family::GFwd, &g_fwd, m),
            (Family::GBwd, &g_bwd, m),
        ] {
            if list.len() != n - 1 {
                return Err(ChainError::ShapeMismatch(format!(
                    "{}: expected {} matrices for a chain of length {n}, got {}",
                    family.label(),
                    n - 1,
                    list.len()
                )));
            }
            for (k, mat) in list.iter().enumerate() {
                if mat.rows() != dim || mat.cols() != dim {
                    return Err(ChainError::ShapeMismatch(format!(
                        "{}[{}]: expected a {dim}x{dim} matrix, got {}x{}",
                        family.label(),
                        k,
                        mat.rows(),
                        mat.cols()
                    )));
                }
            }
        }
        Ok(LinkedChain {
            r,
            m,
            n,
            s,
            f_fwd,
            f_bwd,
            g_fwd,
            g_bwd,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> &Poly {
        &self.s
    }

    pub fn family(&self, family: Family) -> &[Matrix<Poly>] {
        match family {
            Family::FFwd => &self.f_fwd,
            Family::FBwd => &self.f_bwd,
            Family::GFwd => &self.g_fwd,
            Family::GBwd => &self.g_bwd,
        }
    }

    fn family_dim(&self, family: Family) -> usize {
        match family {
            Family::FFwd | Family::FBwd => self.r,
            Family::GFwd | Family::GBwd => self.m,
        }
    }

    /// Composite map between modules `i` and `j` (1-based, `i <= j`).
    ///
    /// Forward families compose upward: the matrix of module `i -> j`,
    /// meaning `map[j-1] * ... * map[i]` applied last-first. Backward
    /// families compose downward: module `j -> i`. `i == j` yields the
    /// identity of the family's rank.
    pub fn composite(&self, family: Family, i: usize, j: usize) -> Result<Matrix<Poly>, ChainError> {
        if i < 1 || j < i || j > self.n {
            return Err(ChainError::IndexOutOfRange(format!(
                "composite needs 1 <= i <= j <= n, got i={i}, j={j}, n={}",
                self.n
            )));
        }
        let dim = self.family_dim(family);
        let mut acc = Matrix::<Poly>::identity(dim);
        let maps = self.family(family);
        match family {
            Family::FFwd | Family::GFwd => {
                for k in i..j {
                    acc = &maps[k - 1] * &acc;
                }
            }
            Family::FBwd | Family::GBwd => {
                for k in i..j {
                    acc = &acc * &maps[k - 1];
                }
            }
        }
        Ok(acc)
    }

    /// Rational points where `s` vanishes, plus bookkeeping about the search.
    pub fn special_points(&self) -> SpecialPoints {
        let mut warnings = Vec::new();
        if self.s.is_zero() {
            return SpecialPoints {
                roots: Vec::new(),
                s_is_zero: true,
                warnings,
            };
        }
        let split = self.s.rational_roots();
        if !split.exhaustive {
            warnings.push(
                "coefficients of s are too large for exhaustive rational root search; \
                 some special points may be missed"
                    .to_string(),
            );
        } else if !split.remainder.is_constant() {
            warnings.push(format!(
                "s has the factor {} with no rational root; its vanishing locus is not checked",
                split.remainder.make_monic()
            ));
        }
        SpecialPoints {
            roots: split.roots.into_iter().map(|(a, _)| a).collect(),
            s_is_zero: false,
            warnings,
        }
    }

    /// The fiber points at which the kernel/image and complementarity
    /// conditions are decided: every rational root of `s`; when `s` is
    /// identically zero, the generic point plus a fixed sample of rational
    /// points (t = 0, 1, -1), since then every point is special.
    pub fn check_points(&self) -> (Vec<FiberPoint>, Vec<String>) {
        let sp = self.special_points();
        if sp.s_is_zero {
            let pts = vec![
                FiberPoint::Generic,
                FiberPoint::At(Rational::zero()),
                FiberPoint::At(crate::arith::rat_int(1)),
                FiberPoint::At(crate::arith::rat_int(-1)),
            ];
            (pts, sp.warnings)
        } else {
            (
                sp.roots.into_iter().map(FiberPoint::At).collect(),
                sp.warnings,
            )
        }
    }

    /// True when `s` vanishes at the point, i.e. the point is special.
    pub fn is_special(&self, point: &FiberPoint) -> bool {
        match point {
            FiberPoint::At(a) => self.s.eval(a).is_zero(),
            FiberPoint::Generic => self.s.is_zero(),
        }
    }

    /// The chain over s = t^2 demonstrating that the complementarity
    /// condition cannot be dropped: both composite and kernel/image
    /// conditions hold, yet the fiber dimension of the linked Hom module
    /// jumps from 3 to 4 at t = 0.
    pub fn counterexample() -> LinkedChain {
        let s = Poly::var().pow(2);
        let one = Poly::one();
        let ft = || Matrix::from_rows(vec![vec![Poly::var()]]).unwrap();
        let diag = |a: &Poly, b: &Poly, c: &Poly| {
            Matrix::from_diagonal(vec![a.clone(), b.clone(), c.clone()])
        };
        LinkedChain::new(
            1,
            3,
            3,
            s.clone(),
            vec![ft(), ft()],
            vec![ft(), ft()],
            vec![diag(&one, &s, &s), diag(&one, &one, &s)],
            vec![diag(&s, &one, &one), diag(&s, &s, &one)],
        )
        .expect("shapes are consistent")
    }
}

#[derive(Debug, Clone)]
pub struct SpecialPoints {
    pub roots: Vec<Rational>,
    pub s_is_zero: bool,
    pub warnings: Vec<String>,
}

impl fmt::Debug for LinkedChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LinkedChain {{ r: {}, m: {}, n: {}, s: {} }}",
            self.r, self.m, self.n, self.s
        )
    }
}
