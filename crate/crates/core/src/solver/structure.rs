//! Structure of the `G` chain near a point, and the linked homs it induces.
//!
//! At a special point `x` (where `s` vanishes) a chain satisfying the
//! composite, kernel/image and complementarity conditions splits each fiber
//! into two transported bases: a "prime" block of rank `ell = rank(g_1(x))`
//! on which the forward maps are isomorphisms, spanned by pushing a
//! complement of `ker(g_1(x))` forward through `g_{1,i}`, and a "double
//! prime" block on which the backward maps are isomorphisms, spanned by
//! pulling a complement of `ker(g^{n-1}(x))` back through `g^{i,n}`. A
//! linked homomorphism is then freely determined by its double prime
//! coordinates at the first module and its prime coordinates at the last,
//! which is what makes the linked Hom spaces a bundle of rank `rm`.
//!
//! When the conditions fail the construction detects it: a transported
//! basis drops rank, or the two blocks fail to span the fiber. At points
//! where `s` does not vanish every `g_i` is invertible on the fiber and the
//! prime block is everything.

use std::fmt;

use thiserror::Error;

use crate::arith::{Poly, RatFunc};
use crate::chain::{Family, FiberPoint, LinkedChain};
use crate::linalg::{image_pivot_columns, inverse, rank, solve_unique, Matrix};

use super::LinkedHomTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockSide {
    Prime,
    DblPrime,
}

impl fmt::Display for BlockSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockSide::Prime => write!(f, "prime"),
            BlockSide::DblPrime => write!(f, "double prime"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    /// A transported basis block or a block map is not full rank on the
    /// fiber at module `index`; the forward (prime) or backward (double
    /// prime) maps fail to be isomorphisms there.
    #[error("the {side} basis drops rank at module {index} on the fiber at {point}")]
    FullRankFailure {
        side: BlockSide,
        index: usize,
        point: FiberPoint,
    },
    /// The prime and double prime blocks do not span the fiber at module
    /// `index`: the image of the forward composite is not complementary to
    /// the kernel of the backward one.
    #[error("prime and double prime blocks are not complementary at module {index} on the fiber at {point}")]
    ComplementarityFailure { index: usize, point: FiberPoint },
    /// A rational function that must be evaluated on the fiber has a pole
    /// there.
    #[error("{what} has a pole at {point}")]
    PoleAtPoint { what: String, point: FiberPoint },
    /// A linear solve against a basis failed; cannot happen once the rank
    /// checks pass, so this signals corrupted input.
    #[error("{what} is singular")]
    Singular { what: String },
}

/// Bases adapted to the chain maps at one point, with the block maps the
/// chain induces on them.
#[derive(Debug, Clone)]
pub struct StructureDecomposition {
    pub point: FiberPoint,
    /// Rank of `g_1` on the fiber; the prime blocks have `ell` columns and
    /// the double prime blocks `m - ell`.
    pub ell: usize,
    /// Per module `i`: the forward-transported basis `g_{1,i} V`, an
    /// `m x ell` polynomial matrix of full fiber rank.
    pub basis_prime: Vec<Matrix<Poly>>,
    /// Per module `i`: the backward-transported basis `g^{i,n} W`.
    pub basis_dblprime: Vec<Matrix<Poly>>,
    /// The map `g_i` in prime coordinates: `g_i bp_i = bp_{i+1} gp_fwd[i]`,
    /// invertible on the fiber.
    pub gp_fwd: Vec<Matrix<RatFunc>>,
    /// The map `g^i` in double prime coordinates: `g^i bdp_{i+1} = bdp_i
    /// gdp_bwd[i]`, invertible on the fiber.
    pub gdp_bwd: Vec<Matrix<RatFunc>>,
}

/// Splits the fibers of the `G` chain at `point` into the two transported
/// blocks, verifying full rank and complementarity along the way.
pub fn structure_decomposition(
    chain: &LinkedChain,
    point: &FiberPoint,
) -> Result<StructureDecomposition, StructureError> {
    let (m, n) = (chain.m(), chain.n());
    let identity = Matrix::<Poly>::identity(m);

    // Pick the seed blocks: on a special fiber, a complement of ker(g_1)
    // and a complement of ker(g^{n-1}), both spanned by coordinate vectors
    // at the pivot columns of the fiber's reduced form. Elsewhere (and for
    // single-module chains) every g_i is invertible on the fiber, so the
    // prime block is the whole fiber.
    let (v, w) = if chain.is_special(point) && n > 1 {
        let v_cols = pivot_columns_at(&chain.family(Family::GFwd)[0], point);
        let w_cols = pivot_columns_at(&chain.family(Family::GBwd)[n - 2], point);
        (identity.take_columns(&v_cols), identity.take_columns(&w_cols))
    } else {
        (identity.clone(), identity.take_columns(&[]))
    };
    let ell = v.cols();

    let mut basis_prime = Vec::with_capacity(n);
    let mut basis_dblprime = Vec::with_capacity(n);
    for i in 1..=n {
        let bp = chain
            .composite(Family::GFwd, 1, i)
            .expect("index in range")
            .matmul(&v);
        let bdp = chain
            .composite(Family::GBwd, i, n)
            .expect("index in range")
            .matmul(&w);
        if rank_at(&bp, point) != ell {
            return Err(StructureError::FullRankFailure {
                side: BlockSide::Prime,
                index: i,
                point: point.clone(),
            });
        }
        if rank_at(&bdp, point) != w.cols() {
            return Err(StructureError::FullRankFailure {
                side: BlockSide::DblPrime,
                index: i,
                point: point.clone(),
            });
        }
        if ell + w.cols() != m || rank_at(&bp.hstack(&bdp), point) != m {
            return Err(StructureError::ComplementarityFailure {
                index: i,
                point: point.clone(),
            });
        }
        basis_prime.push(bp);
        basis_dblprime.push(bdp);
    }

    // Express each chain map in the transported bases by solving over Q(t);
    // full fiber rank makes the generic rank full, so solutions are unique.
    // Each solved block map must be regular and invertible on the fiber.
    let mut gp_fwd = Vec::with_capacity(n.saturating_sub(1));
    let mut gdp_bwd = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let lhs = chain.family(Family::GFwd)[i]
            .matmul(&basis_prime[i])
            .to_ratfunc();
        let blk = solve_unique(&basis_prime[i + 1].to_ratfunc(), &lhs).ok_or_else(|| {
            StructureError::Singular {
                what: format!("the block solve for g_{} on the prime blocks", i + 1),
            }
        })?;
        check_block_map(&blk, point, BlockSide::Prime, i + 1, "g", "'")?;
        gp_fwd.push(blk);
        let lhs = chain.family(Family::GBwd)[i]
            .matmul(&basis_dblprime[i + 1])
            .to_ratfunc();
        let blk = solve_unique(&basis_dblprime[i].to_ratfunc(), &lhs).ok_or_else(|| {
            StructureError::Singular {
                what: format!("the block solve for g^{} on the double prime blocks", i + 1),
            }
        })?;
        check_block_map(&blk, point, BlockSide::DblPrime, i + 1, "g^", "''")?;
        gdp_bwd.push(blk);
    }

    Ok(StructureDecomposition {
        point: point.clone(),
        ell,
        basis_prime,
        basis_dblprime,
        gp_fwd,
        gdp_bwd,
    })
}

/// Regularity and fiber invertibility of a solved block map.
fn check_block_map(
    blk: &Matrix<RatFunc>,
    point: &FiberPoint,
    side: BlockSide,
    index: usize,
    name: &str,
    mark: &str,
) -> Result<(), StructureError> {
    let full = match point {
        FiberPoint::At(a) => {
            if !blk.is_regular_at(a) {
                return Err(StructureError::PoleAtPoint {
                    what: format!("block map ({name}{index}){mark}"),
                    point: point.clone(),
                });
            }
            rank(&blk.eval_at(a).expect("regular")) == blk.cols()
        }
        FiberPoint::Generic => rank(blk) == blk.cols(),
    };
    if full {
        Ok(())
    } else {
        Err(StructureError::FullRankFailure {
            side,
            index,
            point: point.clone(),
        })
    }
}

impl StructureDecomposition {
    fn n(&self) -> usize {
        self.basis_prime.len()
    }

    fn m(&self) -> usize {
        self.basis_prime[0].rows()
    }

    /// Product of prime block maps for modules `i` to `n` (1-based): the
    /// matrix of `g_{i,n}` in prime coordinates.
    fn prime_composite_to_last(&self, i: usize) -> Matrix<RatFunc> {
        let mut acc = Matrix::<RatFunc>::identity(self.ell);
        for k in (i - 1)..self.gp_fwd.len() {
            acc = self.gp_fwd[k].matmul(&acc);
        }
        acc
    }

    /// Product of double prime block maps for modules `i` down to `1`: the
    /// matrix of `g^{i,1}` in double prime coordinates.
    fn dblprime_composite_to_first(&self, i: usize) -> Matrix<RatFunc> {
        let mut acc = Matrix::<RatFunc>::identity(self.m() - self.ell);
        for k in 0..(i - 1) {
            acc = acc.matmul(&self.gdp_bwd[k]);
        }
        acc
    }

    /// Builds the linked homomorphism with double prime coordinates
    /// `phi1_dblprime` (an `(m - ell) x r` matrix, read at the first
    /// module) and prime coordinates `phin_prime` (`ell x r`, at the last):
    ///
    /// `phi_i = bp_i (g_{i,n}')^{-1} phin_prime f_{i,n}
    ///        + bdp_i (g^{i,1}'')^{-1} phi1_dblprime f^{i,1}`
    ///
    /// The result satisfies the linkage identities over Q(t) whenever the
    /// chain satisfies the composite condition, and is regular at the
    /// decomposition's point when the inputs are (checked; poles error).
    pub fn reconstruct(
        &self,
        chain: &LinkedChain,
        phi1_dblprime: &Matrix<RatFunc>,
        phin_prime: &Matrix<RatFunc>,
    ) -> Result<LinkedHomTuple<RatFunc>, StructureError> {
        let r = chain.r();
        assert_eq!(
            (self.n(), self.m()),
            (chain.n(), chain.m()),
            "decomposition does not belong to this chain"
        );
        assert_eq!(
            (phi1_dblprime.rows(), phi1_dblprime.cols()),
            (self.m() - self.ell, r),
            "double prime coordinates must be (m - ell) x r"
        );
        assert_eq!(
            (phin_prime.rows(), phin_prime.cols()),
            (self.ell, r),
            "prime coordinates must be ell x r"
        );
        self.check_regular(phi1_dblprime, "the double prime input")?;
        self.check_regular(phin_prime, "the prime input")?;
        let n = self.n();
        let parts = (1..=n)
            .map(|i| {
                let prime_tr = inverse(&self.prime_composite_to_last(i)).map_err(|_| {
                    StructureError::Singular {
                        what: format!("the prime composite from module {i}"),
                    }
                })?;
                let f_up = chain.composite(Family::FFwd, i, n).expect("in range");
                let prime = self.basis_prime[i - 1]
                    .to_ratfunc()
                    .matmul(&prime_tr)
                    .matmul(phin_prime)
                    .matmul(&f_up.to_ratfunc());
                let dbl_tr = inverse(&self.dblprime_composite_to_first(i)).map_err(|_| {
                    StructureError::Singular {
                        what: format!("the double prime composite from module {i}"),
                    }
                })?;
                let f_down = chain.composite(Family::FBwd, 1, i).expect("in range");
                let dbl = self.basis_dblprime[i - 1]
                    .to_ratfunc()
                    .matmul(&dbl_tr)
                    .matmul(phi1_dblprime)
                    .matmul(&f_down.to_ratfunc());
                let part = prime.add(&dbl);
                self.check_regular(&part, &format!("the reconstructed phi_{i}"))?;
                Ok(part)
            })
            .collect::<Result<Vec<_>, StructureError>>()?;
        Ok(LinkedHomTuple::new(parts).expect("parts share the chain's shape"))
    }

    fn check_regular(&self, mat: &Matrix<RatFunc>, what: &str) -> Result<(), StructureError> {
        if let FiberPoint::At(a) = &self.point {
            if !mat.is_regular_at(a) {
                return Err(StructureError::PoleAtPoint {
                    what: what.to_string(),
                    point: self.point.clone(),
                });
            }
        }
        Ok(())
    }

    /// Reads the free coordinates back off a tuple: the double prime
    /// coordinates of `phi_1` and the prime coordinates of `phi_n`, via the
    /// inverse of the combined basis. Left inverse of
    /// [`reconstruct`](Self::reconstruct) for arbitrary coordinates, and a
    /// two-sided inverse on tuples satisfying the linkage identities when
    /// the chain satisfies all three conditions.
    pub fn forget(
        &self,
        tuple: &LinkedHomTuple<RatFunc>,
    ) -> Result<(Matrix<RatFunc>, Matrix<RatFunc>), StructureError> {
        let n = self.n();
        let coords_at = |i: usize| -> Result<Matrix<RatFunc>, StructureError> {
            let basis = self.basis_prime[i - 1]
                .hstack(&self.basis_dblprime[i - 1])
                .to_ratfunc();
            let inv = inverse(&basis).map_err(|_| StructureError::Singular {
                what: format!("the combined basis at module {i}"),
            })?;
            Ok(inv.matmul(tuple.part(i)))
        };
        let first = coords_at(1)?;
        let last = coords_at(n)?;
        let dblprime = Matrix::from_fn(self.m() - self.ell, first.cols(), |i, j| {
            first[(self.ell + i, j)].clone()
        });
        let prime = Matrix::from_fn(self.ell, last.cols(), |i, j| last[(i, j)].clone());
        Ok((dblprime, prime))
    }

    /// Re-derives every identity the decomposition promises and returns the
    /// violations. Empty output certifies: block shapes, fiber ranks,
    /// complementarity, the intertwining identities for the solved block
    /// maps, their invertibility, and the composite-scaled identities on
    /// the opposite maps (`g^i bp_{i+1} = s bp_i (g_i')^{-1}` and
    /// `g_i bdp_i = s bdp_{i+1} (g^i'')^{-1}`).
    pub fn invariant_violations(&self, chain: &LinkedChain) -> Vec<String> {
        let mut out = Vec::new();
        let (m, n) = (chain.m(), chain.n());
        if self.n() != n || self.m() != m {
            out.push("decomposition shape does not match the chain".to_string());
            return out;
        }
        let s = RatFunc::from_poly(chain.s().clone());
        for i in 1..=n {
            let bp = &self.basis_prime[i - 1];
            let bdp = &self.basis_dblprime[i - 1];
            if bp.cols() != self.ell || bdp.cols() != m - self.ell {
                out.push(format!("block widths at module {i} do not match ell"));
            }
            if rank_at(bp, &self.point) != self.ell {
                out.push(format!("prime basis at module {i} is not full rank"));
            }
            if rank_at(bdp, &self.point) != m - self.ell {
                out.push(format!("double prime basis at module {i} is not full rank"));
            }
            if rank_at(&bp.hstack(bdp), &self.point) != m {
                out.push(format!("blocks at module {i} do not span the fiber"));
            }
        }
        for i in 0..n.saturating_sub(1) {
            let g_fwd = chain.family(Family::GFwd)[i].to_ratfunc();
            let g_bwd = chain.family(Family::GBwd)[i].to_ratfunc();
            let bp_i = self.basis_prime[i].to_ratfunc();
            let bp_next = self.basis_prime[i + 1].to_ratfunc();
            let bdp_i = self.basis_dblprime[i].to_ratfunc();
            let bdp_next = self.basis_dblprime[i + 1].to_ratfunc();
            let gp = &self.gp_fwd[i];
            let gdp = &self.gdp_bwd[i];
            if !g_fwd.matmul(&bp_i).sub(&bp_next.matmul(gp)).is_zero_matrix() {
                out.push(format!("g_{} does not intertwine the prime bases", i + 1));
            }
            if !g_bwd.matmul(&bdp_next).sub(&bdp_i.matmul(gdp)).is_zero_matrix() {
                out.push(format!("g^{} does not intertwine the double prime bases", i + 1));
            }
            match inverse(gp) {
                Err(_) => out.push(format!("prime block map {} is singular over Q(t)", i + 1)),
                Ok(gp_inv) => {
                    let lhs = g_bwd.matmul(&bp_next);
                    let rhs = bp_i.matmul(&gp_inv).scale(&s);
                    if !lhs.sub(&rhs).is_zero_matrix() {
                        out.push(format!(
                            "g^{} is not s times the inverse prime block map",
                            i + 1
                        ));
                    }
                }
            }
            match inverse(gdp) {
                Err(_) => out.push(format!(
                    "double prime block map {} is singular over Q(t)",
                    i + 1
                )),
                Ok(gdp_inv) => {
                    let lhs = g_fwd.matmul(&bdp_i);
                    let rhs = bdp_next.matmul(&gdp_inv).scale(&s);
                    if !lhs.sub(&rhs).is_zero_matrix() {
                        out.push(format!(
                            "g_{} is not s times the inverse double prime block map",
                            i + 1
                        ));
                    }
                }
            }
        }
        out
    }
}

fn pivot_columns_at(map: &Matrix<Poly>, point: &FiberPoint) -> Vec<usize> {
    match point {
        FiberPoint::At(a) => image_pivot_columns(&map.eval_at(a)),
        FiberPoint::Generic => image_pivot_columns(&map.to_ratfunc()),
    }
}

fn rank_at(mat: &Matrix<Poly>, point: &FiberPoint) -> usize {
    match point {
        FiberPoint::At(a) => rank(&mat.eval_at(a)),
        FiberPoint::Generic => rank(&mat.to_ratfunc()),
    }
}
