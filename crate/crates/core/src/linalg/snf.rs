use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use super::Matrix;
use crate::arith::{Poly, Rational};

/// Smith normal form `U * M * V = D` over Q[t].
///
/// `U` and `V` are products of elementary operations, so their determinants
/// are nonzero constants (tracked in `det_u`, `det_v`). The diagonal of `D`
/// is monic with each entry dividing the next, zeros trailing.
pub struct Snf {
    pub u: Matrix<Poly>,
    pub d: Matrix<Poly>,
    pub v: Matrix<Poly>,
    pub det_u: Rational,
    pub det_v: Rational,
}

impl Snf {
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).take_while(|&i| !self.d.get(i, i).is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<Poly> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }
}

pub fn smith_normal_form(m: &Matrix<Poly>) -> Snf {
    let work = diagonalize(m, true);
    Snf {
        u: work.u.expect("tracked"),
        d: work.d,
        v: work.v,
        det_u: work.det_u,
        det_v: work.det_v,
    }
}

/// Basis of the kernel of `M` as a submodule of Q[t]^cols: the columns of
/// `V` whose diagonal entry is zero. Because `V` is invertible over Q[t]
/// the basis extends to a basis of the ambient free module, so the kernel
/// is a direct summand and stays independent under every specialization.
pub fn kernel_basis_pid(m: &Matrix<Poly>) -> Vec<Vec<Poly>> {
    let work = diagonalize(m, false);
    let n = work.d.rows().min(work.d.cols());
    let rank = (0..n).take_while(|&i| !work.d.get(i, i).is_zero()).count();
    (rank..m.cols()).map(|j| work.v.column(j)).collect()
}

/// Fraction-free determinant (Bareiss). Intermediate divisions are exact in
/// Q[t], so no rational functions appear.
pub fn determinant(m: &Matrix<Poly>) -> Poly {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Poly::one();
    }
    let mut b = m.clone();
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if b.get(k, k).is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !b.get(i, k).is_zero()) else {
                return Poly::zero();
            };
            b.row_swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(b.get(i, j) * b.get(k, k)) - &(b.get(i, k) * b.get(k, j));
                b.set(i, j, num.exact_div(&prev));
            }
        }
        prev = b.get(k, k).clone();
    }
    let det = b.get(n - 1, n - 1).clone();
    if negate {
        -det
    } else {
        det
    }
}

struct Diagonalized {
    d: Matrix<Poly>,
    u: Option<Matrix<Poly>>,
    v: Matrix<Poly>,
    det_u: Rational,
    det_v: Rational,
}

/// Pivot rule: nonzero entry of minimal degree in the remaining submatrix,
/// ties broken by smallest row then smallest column.
fn find_pivot(d: &Matrix<Poly>, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in k..d.rows() {
        for j in k..d.cols() {
            let e = d.get(i, j);
            if e.is_zero() {
                continue;
            }
            let deg = e.degree().expect("nonzero");
            if best.map_or(true, |(bd, _, _)| deg < bd) {
                best = Some((deg, i, j));
                if deg == 0 {
                    return Some((i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn row_submul(m: &mut Matrix<Poly>, dst: usize, src: usize, q: &Poly) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let s = m.get(src, j);
        if s.is_zero() {
            continue;
        }
        let v = m.get(dst, j) - &(q * s);
        m.set(dst, j, v);
    }
}

fn col_submul(m: &mut Matrix<Poly>, dst: usize, src: usize, q: &Poly) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let s = m.get(i, src);
        if s.is_zero() {
            continue;
        }
        let v = m.get(i, dst) - &(q * s);
        m.set(i, dst, v);
    }
}

/// Rows `r0`, `r1` become `(a00*r0 + a01*r1, a10*r0 + a11*r1)`. The callers
/// pick coefficients with `a00*a11 - a01*a10 = 1`, so this is unimodular and
/// leaves the tracked determinant unchanged.
fn row_mix2(
    m: &mut Matrix<Poly>,
    r0: usize,
    r1: usize,
    a00: &Poly,
    a01: &Poly,
    a10: &Poly,
    a11: &Poly,
) {
    for j in 0..m.cols() {
        let p = m.get(r0, j);
        let q = m.get(r1, j);
        let n0 = &(a00 * p) + &(a01 * q);
        let n1 = &(a10 * p) + &(a11 * q);
        m.set(r0, j, n0);
        m.set(r1, j, n1);
    }
}

/// Columns `c0`, `c1` become `(a00*c0 + a01*c1, a10*c0 + a11*c1)`; the same
/// unimodularity convention as `row_mix2`.
fn col_mix2(
    m: &mut Matrix<Poly>,
    c0: usize,
    c1: usize,
    a00: &Poly,
    a01: &Poly,
    a10: &Poly,
    a11: &Poly,
) {
    for i in 0..m.rows() {
        let p = m.get(i, c0);
        let q = m.get(i, c1);
        let n0 = &(a00 * p) + &(a01 * q);
        let n1 = &(a10 * p) + &(a11 * q);
        m.set(i, c0, n0);
        m.set(i, c1, n1);
    }
}

/// Unit that rescales the polynomials to integer coefficients of content
/// one, with a positive sign. `None` when everything is zero. Every nonzero
/// rational is a unit of Q[t], so applying this to a row or column is an
/// elementary operation; doing it after each update keeps coefficients from
/// swelling during the Euclidean cascades.
fn primitive_unit<'a>(polys: impl Iterator<Item = &'a Poly>) -> Option<Rational> {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for p in polys {
        for c in p.coeffs() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
    }
    if num_gcd.is_zero() {
        None
    } else {
        Some(Rational::new(den_lcm, num_gcd.abs()))
    }
}

/// Rescales row `i` of `d` (and of `u`) to primitive integer form.
fn normalize_row(d: &mut Matrix<Poly>, u: &mut Option<Matrix<Poly>>, det_u: &mut Rational, i: usize) {
    let Some(c) = primitive_unit((0..d.cols()).map(|j| d.get(i, j))) else {
        return;
    };
    if c.is_one() {
        return;
    }
    for j in 0..d.cols() {
        let s = d.get(i, j).scale(&c);
        d.set(i, j, s);
    }
    if let Some(u) = u.as_mut() {
        for j in 0..u.cols() {
            let s = u.get(i, j).scale(&c);
            u.set(i, j, s);
        }
    }
    *det_u *= c;
}

/// Rescales column `j` of `d` (and of `v`) to primitive integer form.
fn normalize_col(d: &mut Matrix<Poly>, v: &mut Matrix<Poly>, det_v: &mut Rational, j: usize) {
    let Some(c) = primitive_unit((0..d.rows()).map(|i| d.get(i, j))) else {
        return;
    };
    if c.is_one() {
        return;
    }
    for i in 0..d.rows() {
        let s = d.get(i, j).scale(&c);
        d.set(i, j, s);
    }
    for i in 0..v.rows() {
        let s = v.get(i, j).scale(&c);
        v.set(i, j, s);
    }
    *det_v *= c;
}

fn diagonalize(m: &Matrix<Poly>, track_u: bool) -> Diagonalized {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = track_u.then(|| Matrix::<Poly>::identity(rows));
    let mut v = Matrix::<Poly>::identity(cols);
    let mut det_u = Rational::one();
    let mut det_v = Rational::one();
    let mut rank = 0;

    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&d, k) else {
            break;
        };
        if pi != k {
            d.row_swap(k, pi);
            if let Some(u) = u.as_mut() {
                u.row_swap(k, pi);
            }
            det_u = -det_u;
        }
        if pj != k {
            d.col_swap(k, pj);
            v.col_swap(k, pj);
            det_v = -det_v;
        }
        // Alternate row and column clearing until both stay clean. An entry
        // the pivot does not divide is removed with a single unimodular 2x2
        // mix built from the extended gcd, which replaces the pivot by the
        // gcd and zeroes the entry in one step; the pivot degree strictly
        // drops whenever a mix fires, so the rounds terminate.
        loop {
            for i in k + 1..rows {
                if d.get(i, k).is_zero() {
                    continue;
                }
                let pivot = d.get(k, k).clone();
                let (q, r) = d.get(i, k).div_rem(&pivot);
                if r.is_zero() {
                    row_submul(&mut d, i, k, &q);
                    if let Some(u) = u.as_mut() {
                        row_submul(u, i, k, &q);
                    }
                    normalize_row(&mut d, &mut u, &mut det_u, i);
                } else {
                    let b = d.get(i, k).clone();
                    let (g, x, y) = pivot.xgcd(&b);
                    let qa = pivot.exact_div(&g);
                    let qb = -b.exact_div(&g);
                    row_mix2(&mut d, k, i, &x, &y, &qb, &qa);
                    if let Some(u) = u.as_mut() {
                        row_mix2(u, k, i, &x, &y, &qb, &qa);
                    }
                    normalize_row(&mut d, &mut u, &mut det_u, k);
                    normalize_row(&mut d, &mut u, &mut det_u, i);
                }
            }
            for j in k + 1..cols {
                if d.get(k, j).is_zero() {
                    continue;
                }
                let pivot = d.get(k, k).clone();
                let (q, r) = d.get(k, j).div_rem(&pivot);
                if r.is_zero() {
                    col_submul(&mut d, j, k, &q);
                    col_submul(&mut v, j, k, &q);
                    normalize_col(&mut d, &mut v, &mut det_v, j);
                } else {
                    let b = d.get(k, j).clone();
                    let (g, x, y) = pivot.xgcd(&b);
                    let qa = pivot.exact_div(&g);
                    let qb = -b.exact_div(&g);
                    col_mix2(&mut d, k, j, &x, &y, &qb, &qa);
                    col_mix2(&mut v, k, j, &x, &y, &qb, &qa);
                    normalize_col(&mut d, &mut v, &mut det_v, k);
                    normalize_col(&mut d, &mut v, &mut det_v, j);
                }
            }
            // Column mixes above may reintroduce entries below the pivot.
            let col_clean = (k + 1..rows).all(|i| d.get(i, k).is_zero());
            let row_clean = (k + 1..cols).all(|j| d.get(k, j).is_zero());
            if col_clean && row_clean {
                break;
            }
        }
        rank = k + 1;
    }

    // Repair the diagonal into a divisibility chain: a violating adjacent
    // pair (a, b) becomes (gcd, lcm) through one row addition, one 2x2
    // column mix, and one exact row clearing, all confined to those two
    // rows and columns. Sweeping until stable forces the full chain.
    let one = Poly::one();
    let zero = Poly::zero();
    loop {
        let mut changed = false;
        for i in 0..rank.saturating_sub(1) {
            let a = d.get(i, i).clone();
            let b = d.get(i + 1, i + 1).clone();
            if b.div_rem(&a).1.is_zero() {
                continue;
            }
            changed = true;
            row_mix2(&mut d, i, i + 1, &one, &one, &zero, &one);
            if let Some(u) = u.as_mut() {
                row_mix2(u, i, i + 1, &one, &one, &zero, &one);
            }
            let (g, x, y) = a.xgcd(&b);
            let qa = a.exact_div(&g);
            let qb = -b.exact_div(&g);
            col_mix2(&mut d, i, i + 1, &x, &y, &qb, &qa);
            col_mix2(&mut v, i, i + 1, &x, &y, &qb, &qa);
            // The block is now [[g, 0], [y*b, a*b/g]]; clear the corner.
            let q = d.get(i + 1, i).exact_div(&g);
            row_submul(&mut d, i + 1, i, &q);
            if let Some(u) = u.as_mut() {
                row_submul(u, i + 1, i, &q);
            }
            normalize_row(&mut d, &mut u, &mut det_u, i);
            normalize_row(&mut d, &mut u, &mut det_u, i + 1);
        }
        if !changed {
            break;
        }
    }

    // Monic normalization of the diagonal, folded into U.
    for k in 0..rank {
        let lc = d.get(k, k).leading_coeff().expect("pivot nonzero").clone();
        if !lc.is_one() {
            let inv = lc.recip();
            let scaled = d.get(k, k).scale(&inv);
            d.set(k, k, scaled);
            if let Some(u) = u.as_mut() {
                for j in 0..rows {
                    let s = u.get(k, j).scale(&inv);
                    u.set(k, j, s);
                }
            }
            det_u *= inv;
        }
    }
    Diagonalized { d, u, v, det_u, det_v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;
    use crate::linalg::{kernel_basis, rank as field_rank};

    fn t() -> Poly {
        Poly::var()
    }

    fn check_invariants(m: &Matrix<Poly>) -> Snf {
        let snf = smith_normal_form(m);
        assert_eq!(&(&snf.u * m) * &snf.v, snf.d, "U*M*V != D");
        assert!(!snf.det_u.is_zero());
        assert!(!snf.det_v.is_zero());
        // Transforms really are unimodular: constant nonzero determinant,
        // verified independently of the tracked value.
        assert_eq!(determinant(&snf.u).as_constant(), Some(snf.det_u.clone()));
        assert_eq!(determinant(&snf.v).as_constant(), Some(snf.det_v.clone()));
        let diag = snf.diagonal();
        for (i, e) in diag.iter().enumerate() {
            if e.is_zero() {
                assert!(diag[i..].iter().all(Poly::is_zero), "zeros must trail");
            } else {
                assert!(e.is_monic());
                if i + 1 < diag.len() && !diag[i + 1].is_zero() {
                    assert!(diag[i + 1].div_rem(e).1.is_zero(), "divisibility chain");
                }
            }
        }
        // Off-diagonal must vanish.
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d.get(i, j).is_zero());
                }
            }
        }
        snf
    }

    #[test]
    fn diagonal_input_is_fixed() {
        let m = Matrix::from_diagonal(vec![t(), t().pow(2)]);
        let snf = check_invariants(&m);
        assert_eq!(snf.diagonal(), vec![t(), t().pow(2)]);
        assert_eq!(snf.rank(), 2);
    }

    #[test]
    fn unit_entry_becomes_leading_one() {
        let m = Matrix::from_rows(vec![vec![Poly::one(), t()], vec![Poly::zero(), t()]]).unwrap();
        let snf = check_invariants(&m);
        assert_eq!(snf.diagonal(), vec![Poly::one(), t()]);
    }

    #[test]
    fn rank_deficient_row() {
        let m = Matrix::from_rows(vec![
            vec![t(), Poly::one()],
            vec![Poly::zero(), Poly::zero()],
        ])
        .unwrap();
        let snf = check_invariants(&m);
        assert_eq!(snf.diagonal(), vec![Poly::one(), Poly::zero()]);
        assert_eq!(snf.rank(), 1);
    }

    #[test]
    fn zero_and_empty_matrices() {
        let z: Matrix<Poly> = Matrix::zeros(2, 2);
        let snf = check_invariants(&z);
        assert_eq!(snf.rank(), 0);
        assert_eq!(snf.v, Matrix::identity(2));
        let e: Matrix<Poly> = Matrix::zeros(0, 3);
        let snf = check_invariants(&e);
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn divisibility_forced_across_diagonal() {
        // diag(t, t + 1): entries are coprime, so the form is diag(1, t^2 + t)
        let m = Matrix::from_diagonal(vec![t(), &t() + &Poly::one()]);
        let snf = check_invariants(&m);
        assert_eq!(
            snf.diagonal(),
            vec![Poly::one(), &t() * &(&t() + &Poly::one())]
        );
    }

    #[test]
    fn minor_gcd_oracle_2x2() {
        // d_1 = monic gcd of entries, d_1*d_2 = monic gcd of 2x2 minors (= det)
        let m = Matrix::from_rows(vec![
            vec![t(), t().pow(2)],
            vec![t().pow(3), t()],
        ])
        .unwrap();
        let snf = check_invariants(&m);
        let d1 = Poly::gcd(&t(), &t().pow(2)).unwrap();
        let det = determinant(&m).make_monic();
        assert_eq!(snf.diagonal()[0], d1);
        assert_eq!((&snf.diagonal()[0] * &snf.diagonal()[1]).make_monic(), det);
    }

    #[test]
    fn rank_agrees_with_generic_rank() {
        let m = Matrix::from_rows(vec![
            vec![t(), Poly::one(), Poly::zero()],
            vec![t().pow(2), t(), Poly::zero()],
            vec![&t() + &Poly::one(), Poly::one(), Poly::zero()],
        ])
        .unwrap();
        let snf = check_invariants(&m);
        assert_eq!(snf.rank(), field_rank(&m.to_ratfunc()));
    }

    #[test]
    fn pid_kernel_examples() {
        // [[t]]: injective, empty kernel
        let m = Matrix::from_rows(vec![vec![t()]]).unwrap();
        assert!(kernel_basis_pid(&m).is_empty());
        // zero 2x2: standard basis
        let z: Matrix<Poly> = Matrix::zeros(2, 2);
        assert_eq!(
            kernel_basis_pid(&z),
            vec![
                vec![Poly::one(), Poly::zero()],
                vec![Poly::zero(), Poly::one()],
            ]
        );
        // [[t, -1]]: the saturated kernel is generated by (1, t)
        let m = Matrix::from_rows(vec![vec![t(), -Poly::one()]]).unwrap();
        assert_eq!(kernel_basis_pid(&m), vec![vec![Poly::one(), t()]]);
    }

    #[test]
    fn pid_kernel_annihilates_and_saturates() {
        let m = Matrix::from_rows(vec![
            vec![t(), -Poly::one(), Poly::zero()],
            vec![Poly::zero(), t(), -Poly::one()],
        ])
        .unwrap();
        let basis = kernel_basis_pid(&m);
        assert_eq!(basis.len(), 1);
        for vkt in &basis {
            let col = Matrix::column_vector(vkt);
            assert!(m.matmul(&col).is_zero_matrix());
        }
        // Saturation: reductions at sample points stay independent.
        for a in [rat_int(0), rat_int(1), rat_int(-2)] {
            let cols: Vec<Vec<Rational>> = basis
                .iter()
                .map(|v| v.iter().map(|p| p.eval(&a)).collect())
                .collect();
            let mat = Matrix::from_rows(cols).unwrap();
            assert_eq!(field_rank(&mat.transpose()), basis.len());
        }
        // Contrast with the field kernel, which matches in dimension.
        assert_eq!(kernel_basis(&m.to_ratfunc()).len(), basis.len());
    }

    #[test]
    fn determinant_examples() {
        let m = Matrix::from_rows(vec![
            vec![t(), Poly::one()],
            vec![-Poly::one(), t()],
        ])
        .unwrap();
        assert_eq!(determinant(&m), &t().pow(2) + &Poly::one());
        let singular = Matrix::from_rows(vec![
            vec![t(), t()],
            vec![t(), t()],
        ])
        .unwrap();
        assert!(determinant(&singular).is_zero());
        // row swap path
        let m = Matrix::from_rows(vec![
            vec![Poly::zero(), Poly::one()],
            vec![Poly::one(), Poly::zero()],
        ])
        .unwrap();
        assert_eq!(determinant(&m), -Poly::one());
        let empty: Matrix<Poly> = Matrix::zeros(0, 0);
        assert_eq!(determinant(&empty), Poly::one());
    }
}
