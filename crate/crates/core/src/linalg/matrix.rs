use std::fmt;
use std::ops::{Index, Mul};

use num::Zero;

use super::{LinalgError, RingScalar};
use crate::arith::{ArithError, Poly, RatFunc, Rational};

/// Dense row-major matrix. Zero-dimensional shapes are allowed and behave
/// like the corresponding empty products and sums.
#[derive(Clone, PartialEq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: RingScalar> Matrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, K::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::RaggedRows);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_diagonal(diag: Vec<K>) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Column vector from a slice.
    pub fn column_vector(entries: &[K]) -> Self {
        Matrix::from_fn(entries.len(), 1, |i, _| entries[i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<K> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix<K> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<T: RingScalar>(&self, mut f: impl FnMut(&K) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| f(x)).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix<K>) -> Matrix<K> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + rhs.get(i, j).clone()
        })
    }

    pub fn sub(&self, rhs: &Matrix<K>) -> Matrix<K> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - rhs.get(i, j).clone()
        })
    }

    pub fn neg(&self) -> Matrix<K> {
        self.map(|x| -x.clone())
    }

    pub fn scale(&self, c: &K) -> Matrix<K> {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn matmul(&self, rhs: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = K::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
            acc
        })
    }

    /// Kronecker product: block (i, j) is `self[i][j] * rhs`.
    pub fn kronecker(&self, rhs: &Matrix<K>) -> Matrix<K> {
        Matrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            let a = self.get(i / rhs.rows, j / rhs.cols);
            let b = rhs.get(i % rhs.rows, j % rhs.cols);
            if a.is_zero() || b.is_zero() {
                K::zero()
            } else {
                a.clone() * b.clone()
            }
        })
    }

    pub fn hstack(&self, rhs: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        Matrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, rhs.cols, "column mismatch in vstack");
        Matrix::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                rhs.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn block_diag(a: &Matrix<K>, b: &Matrix<K>) -> Matrix<K> {
        Matrix::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
            if i < a.rows && j < a.cols {
                a.get(i, j).clone()
            } else if i >= a.rows && j >= a.cols {
                b.get(i - a.rows, j - a.cols).clone()
            } else {
                K::zero()
            }
        })
    }

    pub fn take_columns(&self, indices: &[usize]) -> Matrix<K> {
        Matrix::from_fn(self.rows, indices.len(), |i, j| self.get(i, indices[j]).clone())
    }

    pub fn row_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn col_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<K> Index<(usize, usize)> for Matrix<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        &self.data[i * self.cols + j]
    }
}

impl<'a, K: RingScalar> Mul for &'a Matrix<K> {
    type Output = Matrix<K>;
    fn mul(self, rhs: &'a Matrix<K>) -> Matrix<K> {
        self.matmul(rhs)
    }
}

impl Matrix<Poly> {
    pub fn eval_at(&self, a: &Rational) -> Matrix<Rational> {
        self.map(|p| p.eval(a))
    }

    /// Embeds Q[t] entries into Q(t).
    pub fn to_ratfunc(&self) -> Matrix<RatFunc> {
        self.map(|p| RatFunc::from_poly(p.clone()))
    }
}

impl Matrix<Rational> {
    /// Constant-coefficient embedding into Q[t].
    pub fn to_poly(&self) -> Matrix<Poly> {
        self.map(|c| Poly::constant(c.clone()))
    }

    pub fn to_ratfunc(&self) -> Matrix<RatFunc> {
        self.map(|c| RatFunc::from_rational(c.clone()))
    }
}

impl Matrix<RatFunc> {
    pub fn is_regular_at(&self, a: &Rational) -> bool {
        self.data.iter().all(|f| f.is_regular_at(a))
    }

    pub fn eval_at(&self, a: &Rational) -> Result<Matrix<Rational>, ArithError> {
        let mut data = Vec::with_capacity(self.data.len());
        for f in &self.data {
            data.push(f.eval_at(a)?);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl<K: RingScalar> fmt::Display for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[{}x{}]", self.rows, self.cols);
        }
        let rendered: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        let widths: Vec<usize> = (0..self.cols)
            .map(|j| rendered.iter().map(|r| r[j].len()).max().unwrap_or(0))
            .collect();
        for (i, row) in rendered.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{cell:>width$}", width = widths[j])?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl<K: RingScalar> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use num::One;

    use super::*;
    use crate::arith::{rat_int, Poly};

    fn m(rows: Vec<Vec<i64>>) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_int).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn shapes_and_ragged_rows() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!((a.rows(), a.cols()), (2, 2));
        let ragged: Vec<Vec<Rational>> = vec![vec![rat_int(1)], vec![rat_int(1), rat_int(2)]];
        assert_eq!(Matrix::from_rows(ragged), Err(LinalgError::RaggedRows));
    }

    #[test]
    fn product_and_identity() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        let id = Matrix::<Rational>::identity(2);
        assert_eq!(a.matmul(&id), a);
        let b = m(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(a.matmul(&b), m(vec![vec![2, 1], vec![4, 3]]));
    }

    #[test]
    fn empty_dimensions_behave() {
        let a: Matrix<Rational> = Matrix::zeros(2, 0);
        let b: Matrix<Rational> = Matrix::zeros(0, 3);
        let prod = a.matmul(&b);
        assert_eq!((prod.rows(), prod.cols()), (2, 3));
        assert!(prod.is_zero_matrix());
        assert_eq!(Matrix::<Rational>::identity(0).rows(), 0);
    }

    #[test]
    fn kronecker_matches_hand_example() {
        let a = m(vec![vec![1, 2]]);
        let b = m(vec![vec![0, 1], vec![1, 0]]);
        let k = a.kronecker(&b);
        assert_eq!(
            k,
            m(vec![vec![0, 1, 0, 2], vec![1, 0, 2, 0]])
        );
        let id3 = Matrix::<Rational>::identity(3);
        let id2 = Matrix::<Rational>::identity(2);
        assert_eq!(id3.kronecker(&id2), Matrix::<Rational>::identity(6));
    }

    #[test]
    fn eval_specializes_entries() {
        let t = Poly::var();
        let g = Matrix::from_diagonal(vec![Poly::one(), t.pow(2), t.pow(2)]);
        let at0 = g.eval_at(&rat_int(0));
        assert_eq!(at0, m(vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 0]]));
        let p = Matrix::from_diagonal(vec![&t + &Poly::one()]);
        assert_eq!(p.eval_at(&rat_int(1)), m(vec![vec![2]]));
    }

    #[test]
    fn stacking_and_blocks() {
        let a = m(vec![vec![1]]);
        let b = m(vec![vec![2]]);
        assert_eq!(a.hstack(&b), m(vec![vec![1, 2]]));
        assert_eq!(a.vstack(&b), m(vec![vec![1], vec![2]]));
        assert_eq!(
            Matrix::block_diag(&a, &b),
            m(vec![vec![1, 0], vec![0, 2]])
        );
        let empty: Matrix<Rational> = Matrix::zeros(0, 0);
        assert_eq!(Matrix::block_diag(&a, &empty), a);
    }
}
