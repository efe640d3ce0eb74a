//! Deterministic, seeded generators of chains.
//!
//! Valid chains come from the block-diagonal model: pick invertible
//! constant blocks `A_i`, `B_i` and set `g_i = diag(A_i, s B_i)`,
//! `g^i = diag(s A_i^{-1}, B_i^{-1})`, so the composites are `s id` by
//! construction, the special-fiber kernels and images line up block by
//! block, and the image/kernel split is the same at every index. The `f`
//! maps are built the same way with their own split. Optionally the whole
//! chain is conjugated by random changes of basis with constant nonzero
//! determinant, which preserves every condition on every fiber while hiding
//! the block structure.
//!
//! Broken chains perturb the model so that exactly the targeted condition
//! fails: a unit factor (or, for `s = 0`, a structural edit) on one `f`
//! map for the composite condition; a deliberately singular factor inside
//! one `g` map for the kernel/image condition; and for complementarity,
//! diagonal chains whose rank profiles drop at different coordinates, the
//! smallest instance of which is the built-in counterexample.
//!
//! Everything is a pure function of the parameters. Randomness is ChaCha8
//! seeded from `params.seed` with a fixed byte expansion, and all sampling
//! uses explicit rejection, so outputs are identical across platforms.

use num::{One, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{Poly, Rational};
use crate::chain::{Condition, Family, LinkedChain};
use crate::linalg::{determinant, inverse, Matrix};

#[derive(Debug, Clone)]
pub struct GenParams {
    pub r: usize,
    pub m: usize,
    pub n: usize,
    /// Width of the block on which the forward `g` maps stay invertible at
    /// special points; the complementary block carries the factor `s`.
    pub m1: usize,
    pub s: Poly,
    /// Numerators and denominators of random entries are drawn from
    /// `[-entry_bound, entry_bound]` (denominators positive).
    pub entry_bound: i64,
    pub seed: u64,
    /// When false, emit the bare block-diagonal model; when true, conjugate
    /// by random changes of basis.
    pub conjugate: bool,
}

impl GenParams {
    fn validate(&self) -> Result<(), GenError> {
        if self.r == 0 || self.m == 0 || self.n == 0 {
            return Err(GenError::BadParams(format!(
                "ranks and length must be positive, got r={}, m={}, n={}",
                self.r, self.m, self.n
            )));
        }
        if self.m1 > self.m {
            return Err(GenError::BadParams(format!(
                "m1 must lie in [0, m], got m1={} with m={}",
                self.m1, self.m
            )));
        }
        if self.entry_bound < 1 {
            return Err(GenError::BadParams(format!(
                "entry_bound must be positive, got {}",
                self.entry_bound
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("cannot build a chain violating condition {0}: {1}")]
    Infeasible(Condition, String),
    #[error("{0}")]
    BadParams(String),
}

/// Deterministic random stream: ChaCha8 keyed by the seed, with rejection
/// sampling on top so values do not depend on platform word size or on any
/// library's distribution code.
struct DetRng(ChaCha8Rng);

impl DetRng {
    fn new(seed: u64) -> DetRng {
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&seed.to_le_bytes());
        }
        DetRng(ChaCha8Rng::from_seed(key))
    }

    /// Uniform in `[0, bound)`.
    fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.0.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Uniform integer in `[lo, hi]`.
    fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    fn rational(&mut self, bound: i64) -> Rational {
        let num = self.int_in(-bound, bound);
        let den = self.int_in(1, bound);
        Rational::new(num.into(), den.into())
    }

    fn nonzero_rational(&mut self, bound: i64) -> Rational {
        loop {
            let x = self.rational(bound);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Random polynomial of degree at most `max_deg`.
    fn poly(&mut self, max_deg: usize, bound: i64) -> Poly {
        let deg = self.below(max_deg as u64 + 1) as usize;
        Poly::new((0..=deg).map(|_| self.rational(bound)).collect())
    }

    /// Random invertible constant matrix, by rejection on the determinant.
    fn invertible_constant(&mut self, dim: usize, bound: i64) -> Matrix<Poly> {
        loop {
            let mat = Matrix::from_fn(dim, dim, |_, _| Poly::constant(self.rational(bound)));
            if dim == 0 || !determinant(&mat).is_zero() {
                return mat;
            }
        }
    }

    fn permutation(&mut self, len: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..len).collect();
        // Fisher-Yates driven by the deterministic stream
        for i in (1..len).rev() {
            let j = self.below(i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        perm
    }
}

/// Inverse of a constant polynomial matrix, exactly over Q.
fn invert_constant(mat: &Matrix<Poly>) -> Matrix<Poly> {
    inverse(&mat.eval_at(&Rational::zero()))
        .expect("constructed invertible")
        .to_poly()
}

/// One linked pair of the block model: `diag(A, s B)` with partner
/// `diag(s A^{-1}, B^{-1})`.
fn linked_pair(a: &Matrix<Poly>, b: &Matrix<Poly>, s: &Poly) -> (Matrix<Poly>, Matrix<Poly>) {
    let fwd = Matrix::block_diag(a, &b.scale(s));
    let bwd = Matrix::block_diag(&invert_constant(a).scale(s), &invert_constant(b));
    (fwd, bwd)
}

/// `n - 1` model map pairs of size `dim`, split at `split`.
fn model_family(
    rng: &mut DetRng,
    dim: usize,
    split: usize,
    n: usize,
    s: &Poly,
    bound: i64,
) -> (Vec<Matrix<Poly>>, Vec<Matrix<Poly>>) {
    let mut fwd = Vec::with_capacity(n - 1);
    let mut bwd = Vec::with_capacity(n - 1);
    for _ in 0..n - 1 {
        let a = rng.invertible_constant(split, bound);
        let b = rng.invertible_constant(dim - split, bound);
        let (f, g) = linked_pair(&a, &b, s);
        fwd.push(f);
        bwd.push(g);
    }
    (fwd, bwd)
}

/// A change of basis with constant nonzero determinant: a product of
/// elementary operations (row add with a polynomial coefficient of degree
/// at most 2, row swap, row scale), returned with its exact inverse.
fn conjugator(rng: &mut DetRng, dim: usize, bound: i64) -> (Matrix<Poly>, Matrix<Poly>) {
    let mut p = Matrix::<Poly>::identity(dim);
    let mut p_inv = Matrix::<Poly>::identity(dim);
    let apply = |e: Matrix<Poly>, e_inv: Matrix<Poly>, p: &mut Matrix<Poly>, p_inv: &mut Matrix<Poly>| {
        *p = e.matmul(p);
        *p_inv = p_inv.matmul(&e_inv);
    };
    for _ in 0..dim + 2 {
        match rng.below(3) {
            0 if dim >= 2 => {
                let i = rng.below(dim as u64) as usize;
                let j = (i + 1 + rng.below(dim as u64 - 1) as usize) % dim;
                let lambda = rng.poly(2, bound);
                let e = elementary_add(dim, i, j, &lambda);
                let e_inv = elementary_add(dim, i, j, &-&lambda);
                apply(e, e_inv, &mut p, &mut p_inv);
            }
            1 if dim >= 2 => {
                let i = rng.below(dim as u64) as usize;
                let j = (i + 1 + rng.below(dim as u64 - 1) as usize) % dim;
                let mut e = Matrix::<Poly>::identity(dim);
                e.row_swap(i, j);
                apply(e.clone(), e, &mut p, &mut p_inv);
            }
            _ => {
                let i = rng.below(dim as u64) as usize;
                let c = rng.nonzero_rational(bound);
                let mut e = Matrix::<Poly>::identity(dim);
                let mut e_inv = Matrix::<Poly>::identity(dim);
                e.set(i, i, Poly::constant(c.clone()));
                e_inv.set(i, i, Poly::constant(Rational::one() / c));
                apply(e, e_inv, &mut p, &mut p_inv);
            }
        }
    }
    (p, p_inv)
}

/// Identity plus `lambda` at row `i`, column `j`.
fn elementary_add(dim: usize, i: usize, j: usize, lambda: &Poly) -> Matrix<Poly> {
    let mut e = Matrix::<Poly>::identity(dim);
    e.set(i, j, lambda.clone());
    e
}

/// Replaces each map pair by its conjugated version: `fwd_i` becomes
/// `P_{i+1} fwd_i P_i^{-1}` and `bwd_i` becomes `P_i bwd_i P_{i+1}^{-1}`,
/// with one basis change per module. Composites transform by conjugation,
/// so every condition is preserved fiber by fiber.
fn conjugate_family(
    rng: &mut DetRng,
    fwd: &mut [Matrix<Poly>],
    bwd: &mut [Matrix<Poly>],
    dim: usize,
    n: usize,
    bound: i64,
) {
    let basis: Vec<(Matrix<Poly>, Matrix<Poly>)> =
        (0..n).map(|_| conjugator(rng, dim, bound)).collect();
    for i in 0..n - 1 {
        fwd[i] = basis[i + 1].0.matmul(&fwd[i]).matmul(&basis[i].1);
        bwd[i] = basis[i].0.matmul(&bwd[i]).matmul(&basis[i + 1].1);
    }
}

/// A chain satisfying all three conditions, from the conjugated block
/// model. Deterministic in `params`.
pub fn gen_valid_chain(params: &GenParams) -> Result<LinkedChain, GenError> {
    params.validate()?;
    let mut rng = DetRng::new(params.seed);
    let r1 = rng.below(params.r as u64 + 1) as usize;
    let (mut f_fwd, mut f_bwd) =
        model_family(&mut rng, params.r, r1, params.n, &params.s, params.entry_bound);
    let (mut g_fwd, mut g_bwd) =
        model_family(&mut rng, params.m, params.m1, params.n, &params.s, params.entry_bound);
    if params.conjugate {
        conjugate_family(&mut rng, &mut f_fwd, &mut f_bwd, params.r, params.n, params.entry_bound);
        conjugate_family(&mut rng, &mut g_fwd, &mut g_bwd, params.m, params.n, params.entry_bound);
    }
    build(params, f_fwd, f_bwd, g_fwd, g_bwd)
}

/// A chain violating exactly the targeted condition. The other conditions
/// keep holding except where noted in the construction comments.
pub fn gen_broken_chain(params: &GenParams, target: Condition) -> Result<LinkedChain, GenError> {
    params.validate()?;
    match target {
        Condition::I => broken_composite(params),
        Condition::II => broken_kernel_image(params),
        Condition::III => broken_complementarity(params),
    }
}

fn broken_composite(params: &GenParams) -> Result<LinkedChain, GenError> {
    if params.n < 2 {
        return Err(GenError::Infeasible(
            Condition::I,
            "a single-module chain has no composites".into(),
        ));
    }
    if !params.s.is_zero() {
        // scale one backward map by a unit: f_1 f^1 = 2s != s
        let chain = gen_valid_chain(params)?;
        let mut f_bwd = chain.family(Family::FBwd).to_vec();
        f_bwd[0] = f_bwd[0].scale(&Poly::from_int(2));
        return rebuild(&chain, chain.family(Family::FFwd).to_vec(), f_bwd);
    }
    // s = 0: unit factors cannot break the composite, so rebuild with a
    // forced invertible block in f_1 and overwrite f^1 with the identity:
    // f_1 f^1 = diag(C_1, 0) != 0
    let mut rng = DetRng::new(params.seed);
    let r1 = 1 + rng.below(params.r as u64) as usize;
    let (mut f_fwd, mut f_bwd) =
        model_family(&mut rng, params.r, r1, params.n, &params.s, params.entry_bound);
    f_bwd[0] = Matrix::identity(params.r);
    let (mut g_fwd, mut g_bwd) =
        model_family(&mut rng, params.m, params.m1, params.n, &params.s, params.entry_bound);
    if params.conjugate {
        conjugate_family(&mut rng, &mut f_fwd, &mut f_bwd, params.r, params.n, params.entry_bound);
        conjugate_family(&mut rng, &mut g_fwd, &mut g_bwd, params.m, params.n, params.entry_bound);
    }
    build(params, f_fwd, f_bwd, g_fwd, g_bwd)
}

fn broken_kernel_image(params: &GenParams) -> Result<LinkedChain, GenError> {
    if params.n < 2 {
        return Err(GenError::Infeasible(
            Condition::II,
            "a single-module chain has no maps to break".into(),
        ));
    }
    require_special_point(&params.s, Condition::II)?;
    // Kill one column of the invertible block of g_1: its special-fiber
    // kernel grows by one while the partner's image stays put, so the rank
    // sum drops below m at every special point. The composite condition
    // breaks alongside; the target here is the kernel/image check.
    let m1 = params.m1.max(1);
    let mut rng = DetRng::new(params.seed);
    let r1 = rng.below(params.r as u64 + 1) as usize;
    let (mut f_fwd, mut f_bwd) =
        model_family(&mut rng, params.r, r1, params.n, &params.s, params.entry_bound);
    let (mut g_fwd, mut g_bwd) =
        model_family(&mut rng, params.m, m1, params.n, &params.s, params.entry_bound);
    for row in 0..m1 {
        g_fwd[0].set(row, 0, Poly::zero());
    }
    if params.conjugate {
        conjugate_family(&mut rng, &mut f_fwd, &mut f_bwd, params.r, params.n, params.entry_bound);
        conjugate_family(&mut rng, &mut g_fwd, &mut g_bwd, params.m, params.n, params.entry_bound);
    }
    build(params, f_fwd, f_bwd, g_fwd, g_bwd)
}

fn broken_complementarity(params: &GenParams) -> Result<LinkedChain, GenError> {
    if params.n < 3 || params.m < 3 {
        return Err(GenError::Infeasible(
            Condition::III,
            format!(
                "needs n >= 3 and m >= 3 for an interior index with a strict rank-profile jump, got n={}, m={}",
                params.n, params.m
            ),
        ));
    }
    require_special_point(&params.s, Condition::III)?;
    let (r, m, n, s) = (params.r, params.m, params.n, &params.s);
    let mut rng = DetRng::new(params.seed);
    // Diagonal g chains with entries 1 or s. The coordinates holding 1 grow
    // with the map index (one more per step, capped at m - 1), so the
    // image of g_i at a special point misses part of ker(g_{i+1}) while
    // the composite and kernel/image conditions hold entrywise. With
    // profile sizes 1 and 2 at the first two maps this embeds the built-in
    // counterexample; conjugation scatters the coordinates.
    let perm = if params.conjugate {
        rng.permutation(m)
    } else {
        (0..m).collect()
    };
    let mut g_fwd = Vec::with_capacity(n - 1);
    let mut g_bwd = Vec::with_capacity(n - 1);
    for i in 1..n {
        let ones = i.min(m - 1);
        let fwd_diag: Vec<Poly> = (0..m)
            .map(|k| if perm[k] < ones { Poly::one() } else { s.clone() })
            .collect();
        let bwd_diag: Vec<Poly> = (0..m)
            .map(|k| if perm[k] < ones { s.clone() } else { Poly::one() })
            .collect();
        g_fwd.push(Matrix::from_diagonal(fwd_diag));
        g_bwd.push(Matrix::from_diagonal(bwd_diag));
    }
    // f side: a square root of s scales the identity when one exists
    // (matching the counterexample); otherwise the block model.
    let (mut f_fwd, mut f_bwd) = match s.exact_sqrt() {
        Some(h) => {
            let mat = Matrix::<Poly>::identity(r).scale(&h);
            (vec![mat.clone(); n - 1], vec![mat; n - 1])
        }
        None => {
            let r1 = rng.below(r as u64 + 1) as usize;
            model_family(&mut rng, r, r1, n, s, params.entry_bound)
        }
    };
    if params.conjugate {
        conjugate_family(&mut rng, &mut f_fwd, &mut f_bwd, r, n, params.entry_bound);
        conjugate_family(&mut rng, &mut g_fwd, &mut g_bwd, m, n, params.entry_bound);
    }
    build(params, f_fwd, f_bwd, g_fwd, g_bwd)
}

/// The targeted fiberwise conditions are vacuous unless some rational
/// point annihilates `s`.
fn require_special_point(s: &Poly, target: Condition) -> Result<(), GenError> {
    if s.is_zero() || !s.rational_roots().roots.is_empty() {
        Ok(())
    } else {
        Err(GenError::Infeasible(
            target,
            format!("s = {s} has no rational special point, so the condition is never checked"),
        ))
    }
}

/// Random coordinate pair for reconstruction roundtrips: a double prime
/// block of shape `m2 x r` and a prime block of shape `m1 x r`, entries
/// bounded rationals, deterministic in the seed.
pub fn gen_hom_pair(
    (m1, m2, r): (usize, usize, usize),
    entry_bound: i64,
    seed: u64,
) -> (Matrix<Rational>, Matrix<Rational>) {
    let mut rng = DetRng::new(seed);
    let dblprime = Matrix::from_fn(m2, r, |_, _| rng.rational(entry_bound));
    let prime = Matrix::from_fn(m1, r, |_, _| rng.rational(entry_bound));
    (dblprime, prime)
}

fn build(
    params: &GenParams,
    f_fwd: Vec<Matrix<Poly>>,
    f_bwd: Vec<Matrix<Poly>>,
    g_fwd: Vec<Matrix<Poly>>,
    g_bwd: Vec<Matrix<Poly>>,
) -> Result<LinkedChain, GenError> {
    LinkedChain::new(
        params.r,
        params.m,
        params.n,
        params.s.clone(),
        f_fwd,
        f_bwd,
        g_fwd,
        g_bwd,
    )
    .map_err(|e| GenError::BadParams(e.to_string()))
}

fn rebuild(
    chain: &LinkedChain,
    f_fwd: Vec<Matrix<Poly>>,
    f_bwd: Vec<Matrix<Poly>>,
) -> Result<LinkedChain, GenError> {
    LinkedChain::new(
        chain.r(),
        chain.m(),
        chain.n(),
        chain.s().clone(),
        f_fwd,
        f_bwd,
        chain.family(Family::GFwd).to_vec(),
        chain.family(Family::GBwd).to_vec(),
    )
    .map_err(|e| GenError::BadParams(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;
    use crate::chain::FiberPoint;

    fn t() -> Poly {
        Poly::var()
    }

    fn params(seed: u64) -> GenParams {
        GenParams {
            r: 2,
            m: 3,
            n: 3,
            m1: 1,
            s: t(),
            entry_bound: 3,
            seed,
            conjugate: true,
        }
    }

    fn assert_all_conditions(chain: &LinkedChain) {
        assert!(chain.check_condition_i().passed());
        let (points, _) = chain.check_points();
        for p in &points {
            assert!(
                chain.check_condition_ii(p).unwrap().passed(),
                "condition II at {p}"
            );
            assert!(
                chain.check_condition_iii(p).unwrap().passed(),
                "condition III at {p}"
            );
        }
    }

    #[test]
    fn valid_chains_pass_all_conditions() {
        for seed in 0..8 {
            let chain = gen_valid_chain(&params(seed)).unwrap();
            assert_all_conditions(&chain);
        }
    }

    #[test]
    fn valid_chain_edge_splits() {
        for (m1, s) in [(0, t()), (3, t()), (1, Poly::zero()), (0, Poly::zero())] {
            let mut p = params(5);
            p.m1 = m1;
            p.s = s;
            let chain = gen_valid_chain(&p).unwrap();
            assert_all_conditions(&chain);
        }
    }

    #[test]
    fn raw_model_is_block_diagonal() {
        let mut p = params(1);
        p.conjugate = false;
        p.s = t().pow(2);
        let chain = gen_valid_chain(&p).unwrap();
        assert_all_conditions(&chain);
        // off-block entries of g maps vanish
        let g = &chain.family(Family::GFwd)[0];
        for i in 0..3 {
            for j in 0..3 {
                if (i < 1) != (j < 1) {
                    assert!(g[(i, j)].is_zero());
                }
            }
        }
        // the s-block really carries s: lower block at t=0 is zero
        let at0 = g.eval_at(&rat_int(0));
        assert!(at0[(1, 1)].is_zero() && at0[(2, 2)].is_zero());
    }

    #[test]
    fn determinism_same_seed_same_chain() {
        let a = gen_valid_chain(&params(123)).unwrap();
        let b = gen_valid_chain(&params(123)).unwrap();
        assert_eq!(a, b);
        let c = gen_valid_chain(&params(124)).unwrap();
        assert_ne!(a, c);
    }

    /// Frozen snapshot of seed 42: guards the byte-level stability of the
    /// sampling order across platforms and dependency upgrades.
    #[test]
    fn golden_snapshot_seed_42() {
        let chain = gen_valid_chain(&params(42)).unwrap();
        let entry = |fam, i: usize, j: usize| chain.family(fam)[0][(i, j)].to_string();
        assert_eq!(entry(Family::FFwd, 0, 0), "1/4");
        assert_eq!(entry(Family::FFwd, 1, 1), "9/2*t");
        assert_eq!(entry(Family::FBwd, 0, 0), "4*t");
        assert_eq!(entry(Family::FBwd, 1, 1), "2/9");
        assert_eq!(entry(Family::GFwd, 0, 0), "-2*t^2 - 4*t");
        assert_eq!(entry(Family::GBwd, 0, 0), "-1/8");
        let (dbl, pr) = gen_hom_pair((1, 2, 2), 3, 7);
        let row = |m: &Matrix<Rational>, i: usize| {
            (0..m.cols()).map(|j| m[(i, j)].to_string()).collect::<Vec<_>>()
        };
        assert_eq!(row(&dbl, 0), ["-1", "1"]);
        assert_eq!(row(&dbl, 1), ["-1/3", "-1"]);
        assert_eq!(row(&pr, 0), ["3", "-1/3"]);
    }

    #[test]
    fn broken_composite_fails_only_condition_i() {
        for s in [t(), Poly::zero()] {
            let mut p = params(9);
            p.s = s;
            let chain = gen_broken_chain(&p, Condition::I).unwrap();
            let report = chain.check_condition_i();
            assert!(!report.passed());
            let (points, _) = chain.check_points();
            for pt in &points {
                assert!(chain.check_condition_ii(pt).unwrap().passed());
                assert!(chain.check_condition_iii(pt).unwrap().passed());
            }
        }
        let mut p = params(9);
        p.n = 1;
        assert!(matches!(
            gen_broken_chain(&p, Condition::I),
            Err(GenError::Infeasible(Condition::I, _))
        ));
    }

    #[test]
    fn broken_kernel_image_fails_condition_ii() {
        for s in [t(), t().pow(2), Poly::zero()] {
            for seed in [0, 7] {
                let mut p = params(seed);
                p.s = s.clone();
                let chain = gen_broken_chain(&p, Condition::II).unwrap();
                let (points, _) = chain.check_points();
                assert!(!points.is_empty());
                for pt in &points {
                    assert!(
                        !chain.check_condition_ii(pt).unwrap().passed(),
                        "II should fail at {pt}"
                    );
                }
            }
        }
        let mut p = params(0);
        p.s = Poly::one();
        assert!(matches!(
            gen_broken_chain(&p, Condition::II),
            Err(GenError::Infeasible(Condition::II, _))
        ));
    }

    #[test]
    fn broken_complementarity_fails_condition_iii_only() {
        for s in [t(), t().pow(2), Poly::zero()] {
            for seed in [0, 3] {
                let mut p = params(seed);
                p.s = s.clone();
                let chain = gen_broken_chain(&p, Condition::III).unwrap();
                assert!(chain.check_condition_i().passed());
                let (points, _) = chain.check_points();
                for pt in &points {
                    assert!(chain.check_condition_ii(pt).unwrap().passed());
                    assert!(
                        !chain.check_condition_iii(pt).unwrap().passed(),
                        "III should fail at {pt}"
                    );
                }
            }
        }
        // infeasible shapes
        let mut p = params(0);
        p.n = 2;
        assert!(gen_broken_chain(&p, Condition::III).is_err());
        let mut p = params(0);
        p.m = 2;
        p.m1 = 1;
        assert!(gen_broken_chain(&p, Condition::III).is_err());
    }

    #[test]
    fn raw_broken_complementarity_is_the_counterexample() {
        for seed in [0, 1, 99] {
            let p = GenParams {
                r: 1,
                m: 3,
                n: 3,
                m1: 1,
                s: t().pow(2),
                entry_bound: 3,
                seed,
                conjugate: false,
            };
            let chain = gen_broken_chain(&p, Condition::III).unwrap();
            assert_eq!(chain, LinkedChain::counterexample());
        }
    }

    #[test]
    fn hom_pair_shapes_and_determinism() {
        let (dbl, pr) = gen_hom_pair((2, 3, 4), 5, 11);
        assert_eq!((dbl.rows(), dbl.cols()), (3, 4));
        assert_eq!((pr.rows(), pr.cols()), (2, 4));
        let again = gen_hom_pair((2, 3, 4), 5, 11);
        assert_eq!((dbl, pr), again);
        // zero-row edge
        let (dbl, pr) = gen_hom_pair((0, 2, 1), 1, 0);
        assert_eq!(pr.rows(), 0);
        assert_eq!(dbl.rows(), 2);
        // bound 1: every entry is an integer in {-1, 0, 1}
        let (dbl, _) = gen_hom_pair((0, 4, 4), 1, 3);
        for i in 0..4 {
            for j in 0..4 {
                let v = &dbl[(i, j)];
                assert!(v.denom() == &num::BigInt::one());
                assert!(v.numer().magnitude() <= &num::BigUint::one());
            }
        }
    }

    #[test]
    fn generated_chains_are_vector_bundles() {
        use crate::solver::vector_bundle_check;
        for seed in [2, 4] {
            let chain = gen_valid_chain(&params(seed)).unwrap();
            let report = vector_bundle_check(&chain);
            assert!(report.is_vector_bundle);
            assert_eq!(report.generic_dim, 6);
        }
    }

    #[test]
    fn broken_chain_is_not_special_cased_by_solver() {
        // the III-broken raw chain is the counterexample; its conjugated
        // sibling must show the same dimension jump
        let mut p = params(17);
        p.r = 1;
        p.m = 3;
        p.s = t().pow(2);
        let chain = gen_broken_chain(&p, Condition::III).unwrap();
        let report = crate::solver::vector_bundle_check(&chain);
        assert!(!report.is_vector_bundle);
        assert_eq!(report.generic_dim, 3);
        assert_eq!(report.fiber_dims[0], (FiberPoint::At(rat_int(0)), 4));
    }
}
