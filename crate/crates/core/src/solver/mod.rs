//! The module of linked homomorphisms of a chain, computed two ways.
//!
//! A linked homomorphism is a tuple of `m x r` matrices `phi_1 .. phi_n`
//! satisfying `phi_{i+1} f_i = g_i phi_i` and `phi_i f^i = g^i phi_{i+1}`.
//! Stacking the columns of every `phi_i` into one vector turns these
//! identities into a linear system over Q[t] ([`constraint_matrix`]), whose
//! kernel is computed exactly via Smith normal form. Fibers at rational
//! points come from the same matrix evaluated over Q. The [`structure`]
//! submodule provides the second, independent computation via a basis
//! adapted to the chain maps.

pub mod structure;

pub use structure::{structure_decomposition, BlockSide, StructureDecomposition, StructureError};


use crate::arith::{Poly, RatFunc, Rational};
use crate::chain::{ChainError, Family, FiberPoint, LinkedChain};
use crate::linalg::{kernel_basis, kernel_basis_pid, rank, Matrix, RingScalar};

/// A candidate linked homomorphism: one `m x r` matrix per module.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkedHomTuple<K: RingScalar> {
    parts: Vec<Matrix<K>>,
}

impl<K: RingScalar> LinkedHomTuple<K> {
    /// All parts must share the same shape; there must be at least one.
    pub fn new(parts: Vec<Matrix<K>>) -> Result<Self, ChainError> {
        let Some(first) = parts.first() else {
            return Err(ChainError::ShapeMismatch(
                "a hom tuple needs at least one matrix".into(),
            ));
        };
        let (m, r) = (first.rows(), first.cols());
        for (k, p) in parts.iter().enumerate() {
            if p.rows() != m || p.cols() != r {
                return Err(ChainError::ShapeMismatch(format!(
                    "hom tuple part {}: expected {m}x{r}, got {}x{}",
                    k + 1,
                    p.rows(),
                    p.cols()
                )));
            }
        }
        Ok(LinkedHomTuple { parts })
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn m(&self) -> usize {
        self.parts[0].rows()
    }

    pub fn r(&self) -> usize {
        self.parts[0].cols()
    }

    pub fn parts(&self) -> &[Matrix<K>] {
        &self.parts
    }

    /// The matrix at module `i` (1-based, matching chain indexing).
    pub fn part(&self, i: usize) -> &Matrix<K> {
        &self.parts[i - 1]
    }

    /// Rebuilds a tuple from a stacked coordinate vector: the columns of
    /// `phi_1` top to bottom, then those of `phi_2`, and so on.
    pub fn from_stacked(x: &[K], n: usize, m: usize, r: usize) -> Self {
        assert_eq!(x.len(), n * m * r, "stacked vector has the wrong length");
        let parts = (0..n)
            .map(|i| Matrix::from_fn(m, r, |row, col| x[i * m * r + col * m + row].clone()))
            .collect();
        LinkedHomTuple { parts }
    }

    /// Inverse of [`from_stacked`](Self::from_stacked).
    pub fn to_stacked(&self) -> Vec<K> {
        let (m, r) = (self.m(), self.r());
        let mut x = Vec::with_capacity(self.n() * m * r);
        for p in &self.parts {
            for col in 0..r {
                for row in 0..m {
                    x.push(p[(row, col)].clone());
                }
            }
        }
        x
    }

    pub fn map<T: RingScalar>(&self, f: impl Fn(&Matrix<K>) -> Matrix<T>) -> LinkedHomTuple<T> {
        LinkedHomTuple {
            parts: self.parts.iter().map(f).collect(),
        }
    }
}

impl LinkedHomTuple<Poly> {
    pub fn eval_at(&self, a: &Rational) -> LinkedHomTuple<Rational> {
        self.map(|p| p.eval_at(a))
    }

    pub fn to_ratfunc(&self) -> LinkedHomTuple<RatFunc> {
        self.map(|p| p.to_ratfunc())
    }
}

impl LinkedHomTuple<RatFunc> {
    /// Evaluation on the fiber at `t = a`; fails if any entry has a pole.
    pub fn eval_at(&self, a: &Rational) -> Result<LinkedHomTuple<Rational>, crate::arith::ArithError> {
        let parts = self
            .parts
            .iter()
            .map(|p| p.eval_at(a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinkedHomTuple { parts })
    }
}

/// The linkage identities as one matrix over Q[t] acting on stacked tuples.
///
/// Column block `i` (of width `rm`) carries the coordinates of `phi_i`. For
/// each `i` there are two row blocks, in order: the forward identity
/// `phi_{i+1} f_i - g_i phi_i = 0`, written `(f_i^T (x) id_m) vec(phi_{i+1})
/// - (id_r (x) g_i) vec(phi_i)`, and the backward identity `phi_i f^i -
/// g^i phi_{i+1} = 0`. The matrix is `2(n-1)rm x nrm`; its kernel over any
/// coefficient ring is the linked Hom module over that ring.
pub fn constraint_matrix(chain: &LinkedChain) -> Matrix<Poly> {
    let (r, m, n) = (chain.r(), chain.m(), chain.n());
    let block = r * m;
    let mut cm = Matrix::<Poly>::zeros(2 * n.saturating_sub(1) * block, n * block);
    let id_r = Matrix::<Poly>::identity(r);
    let id_m = Matrix::<Poly>::identity(m);
    for i in 0..n.saturating_sub(1) {
        let f_fwd = &chain.family(Family::FFwd)[i];
        let f_bwd = &chain.family(Family::FBwd)[i];
        let g_fwd = &chain.family(Family::GFwd)[i];
        let g_bwd = &chain.family(Family::GBwd)[i];
        // forward identity at row block 2i
        write_block(&mut cm, 2 * i * block, (i + 1) * block, &f_fwd.transpose().kronecker(&id_m));
        write_block(&mut cm, 2 * i * block, i * block, &id_r.kronecker(g_fwd).neg());
        // backward identity at row block 2i + 1
        write_block(&mut cm, (2 * i + 1) * block, i * block, &f_bwd.transpose().kronecker(&id_m));
        write_block(&mut cm, (2 * i + 1) * block, (i + 1) * block, &id_r.kronecker(g_bwd).neg());
    }
    cm
}

fn write_block<K: RingScalar>(target: &mut Matrix<K>, row0: usize, col0: usize, block: &Matrix<K>) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target.set(row0 + i, col0 + j, block[(i, j)].clone());
        }
    }
}

/// Dimension of the space of linked homomorphisms on one fiber, from the
/// constraint matrix by elimination over Q (rational point) or Q(t)
/// (generic point).
pub fn fiber_dimension(chain: &LinkedChain, point: &FiberPoint) -> usize {
    let cm = constraint_matrix(chain);
    match point {
        FiberPoint::At(a) => {
            let ev = cm.eval_at(a);
            ev.cols() - rank(&ev)
        }
        FiberPoint::Generic => {
            let rf = cm.to_ratfunc();
            rf.cols() - rank(&rf)
        }
    }
}

/// Basis of the linked homomorphisms of the fiber at `t = a`.
pub fn fiber_hom_basis(chain: &LinkedChain, a: &Rational) -> Vec<LinkedHomTuple<Rational>> {
    kernel_basis(&constraint_matrix(chain).eval_at(a))
        .into_iter()
        .map(|v| LinkedHomTuple::from_stacked(&v, chain.n(), chain.m(), chain.r()))
        .collect()
}

/// Basis of the linked homomorphisms over Q(t), by elimination. Slower than
/// the Smith normal form route in [`vector_bundle_check`] but independent
/// of it.
pub fn generic_hom_basis(chain: &LinkedChain) -> Vec<LinkedHomTuple<RatFunc>> {
    kernel_basis(&constraint_matrix(chain).to_ratfunc())
        .into_iter()
        .map(|v| LinkedHomTuple::from_stacked(&v, chain.n(), chain.m(), chain.r()))
        .collect()
}

/// A violated linkage identity: at 1-based map index `index`, either the
/// forward identity `phi_{i+1} f_i = g_i phi_i` or the backward one, with
/// the nonzero difference of the two sides.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkageResidual<K: RingScalar> {
    pub index: usize,
    pub forward: bool,
    pub residual: Matrix<K>,
}

/// Checks both linkage identity families for a tuple of polynomial
/// matrices, exactly over Q[t]; empty output means the tuple is a linked
/// homomorphism.
pub fn verify_linkage(chain: &LinkedChain, tuple: &LinkedHomTuple<Poly>) -> Vec<LinkageResidual<Poly>> {
    check_tuple_shape(chain, tuple.n(), tuple.m(), tuple.r());
    linkage_residuals(
        chain.family(Family::FFwd),
        chain.family(Family::FBwd),
        chain.family(Family::GFwd),
        chain.family(Family::GBwd),
        tuple.parts(),
    )
}

/// [`verify_linkage`] over Q(t).
pub fn verify_linkage_generic(
    chain: &LinkedChain,
    tuple: &LinkedHomTuple<RatFunc>,
) -> Vec<LinkageResidual<RatFunc>> {
    check_tuple_shape(chain, tuple.n(), tuple.m(), tuple.r());
    let lift = |maps: &[Matrix<Poly>]| -> Vec<Matrix<RatFunc>> {
        maps.iter().map(|m| m.to_ratfunc()).collect()
    };
    linkage_residuals(
        &lift(chain.family(Family::FFwd)),
        &lift(chain.family(Family::FBwd)),
        &lift(chain.family(Family::GFwd)),
        &lift(chain.family(Family::GBwd)),
        tuple.parts(),
    )
}

/// [`verify_linkage`] on the fiber at `t = a`.
pub fn verify_linkage_at(
    chain: &LinkedChain,
    tuple: &LinkedHomTuple<Rational>,
    a: &Rational,
) -> Vec<LinkageResidual<Rational>> {
    check_tuple_shape(chain, tuple.n(), tuple.m(), tuple.r());
    let eval = |maps: &[Matrix<Poly>]| -> Vec<Matrix<Rational>> {
        maps.iter().map(|m| m.eval_at(a)).collect()
    };
    linkage_residuals(
        &eval(chain.family(Family::FFwd)),
        &eval(chain.family(Family::FBwd)),
        &eval(chain.family(Family::GFwd)),
        &eval(chain.family(Family::GBwd)),
        tuple.parts(),
    )
}

/// Whether a tuple of polynomial matrices satisfies the linkage identities
/// exactly over Q[t].
pub fn is_linked_hom(chain: &LinkedChain, tuple: &LinkedHomTuple<Poly>) -> bool {
    verify_linkage(chain, tuple).is_empty()
}

/// Linkage identities over Q(t).
pub fn is_linked_hom_generic(chain: &LinkedChain, tuple: &LinkedHomTuple<RatFunc>) -> bool {
    verify_linkage_generic(chain, tuple).is_empty()
}

/// Linkage identities on the fiber at `t = a`.
pub fn is_linked_hom_at(chain: &LinkedChain, tuple: &LinkedHomTuple<Rational>, a: &Rational) -> bool {
    verify_linkage_at(chain, tuple, a).is_empty()
}

fn check_tuple_shape(chain: &LinkedChain, n: usize, m: usize, r: usize) {
    assert_eq!(
        (n, m, r),
        (chain.n(), chain.m(), chain.r()),
        "hom tuple shape does not match the chain"
    );
}

fn linkage_residuals<K: RingScalar>(
    f_fwd: &[Matrix<K>],
    f_bwd: &[Matrix<K>],
    g_fwd: &[Matrix<K>],
    g_bwd: &[Matrix<K>],
    parts: &[Matrix<K>],
) -> Vec<LinkageResidual<K>> {
    let mut out = Vec::new();
    for i in 0..parts.len() - 1 {
        let fwd = parts[i + 1].matmul(&f_fwd[i]).sub(&g_fwd[i].matmul(&parts[i]));
        if !fwd.is_zero_matrix() {
            out.push(LinkageResidual {
                index: i + 1,
                forward: true,
                residual: fwd,
            });
        }
        let bwd = parts[i].matmul(&f_bwd[i]).sub(&g_bwd[i].matmul(&parts[i + 1]));
        if !bwd.is_zero_matrix() {
            out.push(LinkageResidual {
                index: i + 1,
                forward: false,
                residual: bwd,
            });
        }
    }
    out
}

/// Outcome of the rank-`rm` vector bundle test.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// The expected fiber dimension `r * m`.
    pub rm: usize,
    /// Dimension of the linked Hom space over Q(t), from the Smith normal
    /// form of the constraint matrix.
    pub generic_dim: usize,
    /// Fiber dimensions at every checked point, in report order.
    pub fiber_dims: Vec<(FiberPoint, usize)>,
    /// True when the generic dimension and every checked fiber equal `rm`.
    pub is_vector_bundle: bool,
    /// The first point whose dimension deviates from `rm`, with that
    /// dimension.
    pub flatness_failure: Option<(FiberPoint, usize)>,
    /// Global basis of the linked Hom module over Q[t]. The basis extends
    /// to a basis of the ambient free module, so its specialization at any
    /// point stays linearly independent.
    pub kernel_basis: Vec<LinkedHomTuple<Poly>>,
    /// Caveats from the special point search (irrational or out-of-range
    /// roots of `s`).
    pub warnings: Vec<String>,
}

/// Decides whether the linked Hom spaces of the fibers form a vector bundle
/// of rank `rm` across the special points of `s` (plus the generic point),
/// reporting dimensions and a global kernel basis.
pub fn vector_bundle_check(chain: &LinkedChain) -> SolveReport {
    vector_bundle_check_with(chain, &[])
}

/// [`vector_bundle_check`] with extra rational points added to the report.
pub fn vector_bundle_check_with(chain: &LinkedChain, extra_points: &[Rational]) -> SolveReport {
    let rm = chain.r() * chain.m();
    let cm = constraint_matrix(chain);
    let kernel_vectors = kernel_basis_pid(&cm);
    let generic_dim = kernel_vectors.len();
    let kernel_basis = kernel_vectors
        .into_iter()
        .map(|v| LinkedHomTuple::from_stacked(&v, chain.n(), chain.m(), chain.r()))
        .collect();

    let (mut points, warnings) = chain.check_points();
    for a in extra_points {
        let p = FiberPoint::At(a.clone());
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let fiber_dims: Vec<(FiberPoint, usize)> = points
        .into_iter()
        .map(|p| {
            let dim = match &p {
                FiberPoint::At(a) => {
                    let ev = cm.eval_at(a);
                    ev.cols() - rank(&ev)
                }
                // same quantity the Smith normal form already determined
                FiberPoint::Generic => generic_dim,
            };
            (p, dim)
        })
        .collect();

    let flatness_failure = if generic_dim != rm {
        Some((FiberPoint::Generic, generic_dim))
    } else {
        fiber_dims.iter().find(|(_, d)| *d != rm).cloned()
    };
    SolveReport {
        rm,
        generic_dim,
        is_vector_bundle: flatness_failure.is_none(),
        flatness_failure,
        fiber_dims,
        kernel_basis,
        warnings,
    }
}
