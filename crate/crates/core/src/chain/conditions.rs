//! The three conditions a linked chain is checked against.
//!
//! * I: every forward/backward pair composes to `s` times the identity, as
//!   an exact identity of polynomial matrices.
//! * II: at each special fiber, kernel of the forward map equals image of
//!   the backward map and vice versa.
//! * III: at each special fiber, the image of `g_i` is complementary to the
//!   kernel of `g_{i+1}`, and the image of `g^{i+1}` is complementary to the
//!   kernel of `g^i`.

use std::fmt;

use crate::arith::Rational;
use crate::linalg::{image_pivot_columns, kernel_basis, rank, FieldScalar, Matrix};

use super::{ChainError, Family, FiberPoint, LinkedChain};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    I,
    II,
    III,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::I => write!(f, "I"),
            Condition::II => write!(f, "II"),
            Condition::III => write!(f, "III"),
        }
    }
}

/// Condition I is an identity of polynomial matrices, so it is checked once
/// globally; II and III are fiberwise.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportPoint {
    Global,
    Fiber(FiberPoint),
}

impl fmt::Display for ReportPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportPoint::Global => write!(f, "global"),
            ReportPoint::Fiber(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    CompositeNotScalar,
    ImageNotInKernel,
    KernelImageDimMismatch,
    NotComplementary,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FailureKind::CompositeNotScalar => "composite is not s times the identity",
            FailureKind::ImageNotInKernel => "image is not contained in the partner kernel",
            FailureKind::KernelImageDimMismatch => "kernel and image dimensions do not match",
            FailureKind::NotComplementary => "image and kernel are not complementary",
        };
        write!(f, "{s}")
    }
}

/// One violated identity, with the 1-based map index it occurred at and a
/// rendered witness (residual matrix or offending vector).
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionFailure {
    pub index: usize,
    pub kind: FailureKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub condition: Condition,
    pub point: ReportPoint,
    pub failures: Vec<ConditionFailure>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl LinkedChain {
    /// Checks `f_i f^i = f^i f_i = s id` and `g_i g^i = g^i g_i = s id` for
    /// every adjacent pair, exactly over Q[t].
    pub fn check_condition_i(&self) -> ConditionReport {
        let mut failures = Vec::new();
        let pairs = [
            (Family::FFwd, Family::FBwd, "f", self.r()),
            (Family::GFwd, Family::GBwd, "g", self.m()),
        ];
        for (fwd, bwd, name, dim) in pairs {
            let scalar = Matrix::<crate::arith::Poly>::identity(dim).scale(self.s());
            for i in 0..self.n().saturating_sub(1) {
                let a = &self.family(fwd)[i];
                let b = &self.family(bwd)[i];
                for (label, prod) in [
                    (format!("{name}_{} * {name}^{}", i + 1, i + 1), a * b),
                    (format!("{name}^{} * {name}_{}", i + 1, i + 1), b * a),
                ] {
                    if prod != scalar {
                        let residual = prod.sub(&scalar);
                        failures.push(ConditionFailure {
                            index: i + 1,
                            kind: FailureKind::CompositeNotScalar,
                            detail: format!("{label} - s*id is nonzero; residual:\n{residual}"),
                        });
                    }
                }
            }
        }
        ConditionReport {
            condition: Condition::I,
            point: ReportPoint::Global,
            failures,
        }
    }

    /// Checks `ker(g_i) = im(g^i)` and `ker(g^i) = im(g_i)` on the fiber at
    /// `point`, which must be special. Containment is tested by composing
    /// (`B*A = 0` iff `im(A)` lies in `ker(B)`), equality by rank count.
    pub fn check_condition_ii(&self, point: &FiberPoint) -> Result<ConditionReport, ChainError> {
        if !self.is_special(point) {
            return Err(ChainError::NotASpecialPoint(point.clone()));
        }
        let failures = match point {
            FiberPoint::At(a) => condition_ii_failures(
                self.m(),
                &eval_family(self.family(Family::GFwd), a),
                &eval_family(self.family(Family::GBwd), a),
            ),
            FiberPoint::Generic => condition_ii_failures(
                self.m(),
                &embed_family(self.family(Family::GFwd)),
                &embed_family(self.family(Family::GBwd)),
            ),
        };
        Ok(ConditionReport {
            condition: Condition::II,
            point: ReportPoint::Fiber(point.clone()),
            failures,
        })
    }

    /// Checks that `im(g_i)` is complementary to `ker(g_{i+1})` and
    /// `im(g^{i+1})` complementary to `ker(g^i)` on the special fiber at
    /// `point`, for every interior index. Vacuous for chains of length < 3.
    pub fn check_condition_iii(&self, point: &FiberPoint) -> Result<ConditionReport, ChainError> {
        if !self.is_special(point) {
            return Err(ChainError::NotASpecialPoint(point.clone()));
        }
        let failures = match point {
            FiberPoint::At(a) => condition_iii_failures(
                self.m(),
                &eval_family(self.family(Family::GFwd), a),
                &eval_family(self.family(Family::GBwd), a),
            ),
            FiberPoint::Generic => condition_iii_failures(
                self.m(),
                &embed_family(self.family(Family::GFwd)),
                &embed_family(self.family(Family::GBwd)),
            ),
        };
        Ok(ConditionReport {
            condition: Condition::III,
            point: ReportPoint::Fiber(point.clone()),
            failures,
        })
    }

    /// All conditions at all standard check points, in a fixed order:
    /// condition I, then II and III per point.
    pub fn check_all(&self) -> (Vec<ConditionReport>, Vec<String>) {
        let (points, warnings) = self.check_points();
        let mut reports = vec![self.check_condition_i()];
        for p in &points {
            reports.push(self.check_condition_ii(p).expect("point is special"));
            reports.push(self.check_condition_iii(p).expect("point is special"));
        }
        (reports, warnings)
    }
}

fn eval_family(maps: &[Matrix<crate::arith::Poly>], a: &Rational) -> Vec<Matrix<Rational>> {
    maps.iter().map(|m| m.eval_at(a)).collect()
}

fn embed_family(maps: &[Matrix<crate::arith::Poly>]) -> Vec<Matrix<crate::arith::RatFunc>> {
    maps.iter().map(|m| m.to_ratfunc()).collect()
}

fn condition_ii_failures<K: FieldScalar>(
    m: usize,
    fwd: &[Matrix<K>],
    bwd: &[Matrix<K>],
) -> Vec<ConditionFailure> {
    let mut failures = Vec::new();
    for i in 0..fwd.len() {
        let a = &fwd[i];
        let b = &bwd[i];
        let ab = a * b;
        if !ab.is_zero_matrix() {
            failures.push(ConditionFailure {
                index: i + 1,
                kind: FailureKind::ImageNotInKernel,
                detail: format!(
                    "im(g^{}) is not contained in ker(g_{}): the product g_{} * g^{} is nonzero on the fiber;\n{ab}",
                    i + 1, i + 1, i + 1, i + 1
                ),
            });
        }
        let ba = b * a;
        if !ba.is_zero_matrix() {
            failures.push(ConditionFailure {
                index: i + 1,
                kind: FailureKind::ImageNotInKernel,
                detail: format!(
                    "im(g_{}) is not contained in ker(g^{}): the product g^{} * g_{} is nonzero on the fiber;\n{ba}",
                    i + 1, i + 1, i + 1, i + 1
                ),
            });
        }
        let ra = rank(a);
        let rb = rank(b);
        if ra + rb != m {
            let witness = witness_kernel_not_in_image(a, b)
                .or_else(|| witness_kernel_not_in_image(b, a));
            let rendered = witness
                .map(|v| {
                    let v = Matrix::column_vector(&v);
                    format!("; witness kernel vector outside the partner image:\n{v}")
                })
                .unwrap_or_default();
            failures.push(ConditionFailure {
                index: i + 1,
                kind: FailureKind::KernelImageDimMismatch,
                detail: format!(
                    "rank(g_{}) + rank(g^{}) = {ra} + {rb} != {m}, so kernels and images cannot coincide{rendered}",
                    i + 1, i + 1
                ),
            });
        }
    }
    failures
}

/// A kernel vector of `a` that is not in the column space of `b`, if any.
fn witness_kernel_not_in_image<K: FieldScalar>(a: &Matrix<K>, b: &Matrix<K>) -> Option<Vec<K>> {
    let rb = rank(b);
    kernel_basis(a).into_iter().find(|v| {
        let col = Matrix::column_vector(v);
        rank(&b.hstack(&col)) > rb
    })
}

fn condition_iii_failures<K: FieldScalar>(
    m: usize,
    fwd: &[Matrix<K>],
    bwd: &[Matrix<K>],
) -> Vec<ConditionFailure> {
    let mut failures = Vec::new();
    let n_minus_1 = fwd.len();
    for i in 0..n_minus_1.saturating_sub(1) {
        // Forward family: im(g_i) against ker(g_{i+1}), inside fiber i+1.
        check_complement(
            m,
            &fwd[i],
            &fwd[i + 1],
            i + 1,
            &format!("im(g_{})", i + 1),
            &format!("ker(g_{})", i + 2),
            &mut failures,
        );
        // Backward family: im(g^{i+1}) against ker(g^i), same fiber.
        check_complement(
            m,
            &bwd[i + 1],
            &bwd[i],
            i + 1,
            &format!("im(g^{})", i + 2),
            &format!("ker(g^{})", i + 1),
            &mut failures,
        );
    }
    failures
}

fn check_complement<K: FieldScalar>(
    m: usize,
    image_of: &Matrix<K>,
    kernel_of: &Matrix<K>,
    index: usize,
    im_label: &str,
    ker_label: &str,
    failures: &mut Vec<ConditionFailure>,
) {
    let im_cols = image_pivot_columns(image_of);
    let im_basis = image_of.take_columns(&im_cols);
    let ker_vecs = kernel_basis(kernel_of);
    let dim_im = im_basis.cols();
    let dim_ker = ker_vecs.len();
    let mut joint = im_basis;
    for v in &ker_vecs {
        joint = joint.hstack(&Matrix::column_vector(v));
    }
    let joint_rank = rank(&joint);
    if dim_im + dim_ker != m || joint_rank != m {
        failures.push(ConditionFailure {
            index,
            kind: FailureKind::NotComplementary,
            detail: format!(
                "{im_label} (rank {dim_im}) and {ker_label} (dimension {dim_ker}) are not \
                 complementary in the rank-{m} fiber: together they span rank {joint_rank}"
            ),
        });
    }
}
