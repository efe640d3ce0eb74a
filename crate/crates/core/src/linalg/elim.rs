use super::{FieldScalar, LinalgError, Matrix};

/// Reduced row echelon form with the list of pivot columns.
///
/// Pivot selection is deterministic: columns left to right, first row with a
/// nonzero entry. Pivots are normalized to 1 and cleared above and below.
pub fn rref<K: FieldScalar>(m: &Matrix<K>) -> (Matrix<K>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut pr = 0;
    for pc in 0..cols {
        if pr == rows {
            break;
        }
        let Some(hit) = (pr..rows).find(|&i| !a.get(i, pc).is_zero()) else {
            continue;
        };
        a.row_swap(pr, hit);
        let inv = a.get(pr, pc).inv().expect("pivot is nonzero");
        for j in pc..cols {
            let v = a.get(pr, j).clone() * inv.clone();
            a.set(pr, j, v);
        }
        for i in 0..rows {
            if i == pr || a.get(i, pc).is_zero() {
                continue;
            }
            let factor = a.get(i, pc).clone();
            for j in pc..cols {
                let v = a.get(i, j).clone() - factor.clone() * a.get(pr, j).clone();
                a.set(i, j, v);
            }
        }
        pivots.push(pc);
        pr += 1;
    }
    (a, pivots)
}

pub fn rank<K: FieldScalar>(m: &Matrix<K>) -> usize {
    rref(m).1.len()
}

/// Pivot columns of the echelon form; the corresponding columns of the
/// original matrix are a basis of its column space.
pub fn image_pivot_columns<K: FieldScalar>(m: &Matrix<K>) -> Vec<usize> {
    rref(m).1
}

/// Right null space basis by the standard free-variable construction: one
/// vector per free column `f`, with 1 in position `f` and the negated
/// echelon entries in the pivot positions. Free columns ascend.
pub fn kernel_basis<K: FieldScalar>(m: &Matrix<K>) -> Vec<Vec<K>> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let mut basis = Vec::with_capacity(cols - pivots.len());
    for f in 0..cols {
        if pivots.binary_search(&f).is_ok() {
            continue;
        }
        let mut v = vec![K::zero(); cols];
        v[f] = K::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.get(row, f).clone();
        }
        basis.push(v);
    }
    basis
}

pub fn inverse<K: FieldScalar>(m: &Matrix<K>) -> Result<Matrix<K>, LinalgError> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows();
    let aug = m.hstack(&Matrix::identity(n));
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return Err(LinalgError::Singular);
    }
    Ok(Matrix::from_fn(n, n, |i, j| red.get(i, n + j).clone()))
}

/// Solves `A * X = B` when `A` has full column rank; `None` if the system is
/// inconsistent or the solution is not unique.
///
/// With full column rank the pivots of `rref([A | B])` are exactly the `A`
/// columns, and every pivot escaping into the `B` block marks an
/// inconsistent row; both show up as a pivot list different from `0..n`.
pub fn solve_unique<K: FieldScalar>(a: &Matrix<K>, b: &Matrix<K>) -> Option<Matrix<K>> {
    assert_eq!(a.rows(), b.rows(), "row mismatch in solve");
    let n = a.cols();
    let (red, pivots) = rref(&a.hstack(b));
    if pivots.len() != n || pivots.iter().enumerate().any(|(k, &p)| p != k) {
        return None;
    }
    Some(Matrix::from_fn(n, b.cols(), |i, j| red.get(i, n + j).clone()))
}
