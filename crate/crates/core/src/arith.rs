//! Scalars and small dense/sparse linear algebra shared by the exact
//! (rational) and numeric (complex float) code paths.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Q = BigRational;
/// Double precision complex scalar.
pub type C64 = Complex64;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn q_to_c64(x: &Q) -> C64 {
    C64::new(q_to_f64(x), 0.0)
}

/// Returns the value as an `i64` if it is an integer that fits.
pub fn q_as_int(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn factorial(n: u64) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Q::from_integer(acc)
}

/// A field scalar usable by the generic linear algebra routines.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_q(x: &Q) -> Self;
    /// Size used for pivot choice and for float residuals.
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> C64;
    /// Exact scalars pivot on the first nonzero entry; inexact ones on the largest.
    const EXACT: bool;
}

impl Scalar for Q {
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn magnitude(&self) -> f64 {
        q_to_f64(&self.abs())
    }
    fn to_c64(&self) -> C64 {
        q_to_c64(self)
    }
    const EXACT: bool = true;
}

impl Scalar for C64 {
    fn from_q(x: &Q) -> Self {
        q_to_c64(x)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    const EXACT: bool = false;
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Result of reducing a matrix to row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rank: usize,
    /// Column indices carrying a pivot, increasing.
    pub pivot_cols: Vec<usize>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Principal submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])].clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Row-reduces a copy and reports rank and pivot columns.
    pub fn echelon(&self) -> Echelon {
        let mut a = self.clone();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = a.choose_pivot(row, col) else { continue };
            a.swap_rows(row, p);
            let pv = a[(row, col)].clone();
            for r in row + 1..a.rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone() / pv.clone();
                for c in col..a.cols {
                    let delta = factor.clone() * a[(row, c)].clone();
                    let cur = a[(r, c)].clone();
                    a[(r, c)] = cur - delta;
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        Echelon { rank: pivot_cols.len(), pivot_cols }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank
    }

    fn choose_pivot(&self, from_row: usize, col: usize) -> Option<usize> {
        if T::EXACT {
            (from_row..self.rows).find(|&r| !self[(r, col)].is_zero())
        } else {
            let mut best = None;
            let mut best_mag = 0.0;
            for r in from_row..self.rows {
                let m = self[(r, col)].magnitude();
                if m > best_mag {
                    best_mag = m;
                    best = Some(r);
                }
            }
            best
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Determinant by pivoted elimination.
    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(p) = a.choose_pivot(col, col) else { return T::zero() };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pv = a[(col, col)].clone();
            det = det * pv.clone();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone() / pv.clone();
                for c in col..n {
                    let delta = factor.clone() * a[(col, c)].clone();
                    let cur = a[(r, c)].clone();
                    a[(r, c)] = cur - delta;
                }
            }
        }
        det
    }

    /// Solves `self * X = rhs` for square nonsingular `self`.
    pub fn solve_matrix(&self, rhs: &Matrix<T>) -> Option<Matrix<T>> {
        assert!(self.is_square());
        assert_eq!(rhs.rows, self.rows);
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let p = a.choose_pivot(col, col)?;
            a.swap_rows(p, col);
            b.swap_rows(p, col);
            let pv = a[(col, col)].clone();
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone() / pv.clone();
                for c in col..n {
                    let delta = factor.clone() * a[(col, c)].clone();
                    let cur = a[(r, c)].clone();
                    a[(r, c)] = cur - delta;
                }
                for c in 0..m {
                    let delta = factor.clone() * b[(col, c)].clone();
                    let cur = b[(r, c)].clone();
                    b[(r, c)] = cur - delta;
                }
            }
        }
        for r in 0..n {
            let pv = a[(r, r)].clone();
            for c in 0..m {
                let cur = b[(r, c)].clone();
                b[(r, c)] = cur / pv.clone();
            }
        }
        Some(b)
    }

    pub fn solve(&self, rhs: &[T]) -> Option<Vec<T>> {
        let b = Matrix { rows: rhs.len(), cols: 1, data: rhs.to_vec() };
        self.solve_matrix(&b).map(|x| x.data)
    }

    pub fn inverse(&self) -> Option<Matrix<T>> {
        self.solve_matrix(&Self::identity(self.rows))
    }

    /// Basis of the right null space (exact scalars only make sense here).
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        // reduced row echelon form
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = a.choose_pivot(row, col) else { continue };
            a.swap_rows(row, p);
            let pv = a[(row, col)].clone();
            for c in col..a.cols {
                let cur = a[(row, c)].clone();
                a[(row, c)] = cur / pv.clone();
            }
            for r in 0..a.rows {
                if r == row || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for c in col..a.cols {
                    let delta = factor.clone() * a[(row, c)].clone();
                    let cur = a[(r, c)].clone();
                    a[(r, c)] = cur - delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![T::zero(); a.cols];
                v[fc] = T::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a[(r, fc)].clone();
                }
                v
            })
            .collect()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }
}

impl Matrix<Q> {
    pub fn to_c64(&self) -> Matrix<C64> {
        self.map(q_to_c64)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows);
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out[(i, j)].clone();
                    out[(i, j)] = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

/// Sparse matrix stored by rows; used for operators on full modules.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<BTreeMap<usize, T>>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn diagonal(diag: Vec<T>) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i].get(&j).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        if v.is_zero() {
            self.entries[i].remove(&j);
        } else {
            self.entries[i].insert(j, v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: T) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, &T)> {
        self.entries[i].iter().map(|(j, v)| (*j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.is_empty())
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        self.entries
            .iter()
            .map(|row| {
                let mut acc = T::zero();
                for (j, a) in row {
                    if !v[*j].is_zero() {
                        acc = acc + a.clone() * v[*j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// `self * rhs`
    pub fn compose(&self, rhs: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!(self.cols, rhs.rows);
        let mut out = SparseMatrix::zeros(self.rows, rhs.cols);
        for (i, row) in self.entries.iter().enumerate() {
            let mut acc: BTreeMap<usize, T> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &rhs.entries[*k] {
                    let e = acc.entry(*j).or_insert_with(T::zero);
                    *e = e.clone() + a.clone() * b.clone();
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.entries[i] = acc;
        }
        out
    }

    pub fn plus(&self, rhs: &SparseMatrix<T>) -> SparseMatrix<T> {
        self.axpy(&T::one(), rhs)
    }

    pub fn minus(&self, rhs: &SparseMatrix<T>) -> SparseMatrix<T> {
        self.axpy(&-T::one(), rhs)
    }

    /// `self + s * rhs`
    pub fn axpy(&self, s: &T, rhs: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (i, row) in rhs.entries.iter().enumerate() {
            for (j, v) in row {
                out.add_to(i, *j, s.clone() * v.clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> SparseMatrix<T> {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row {
                out.set(i, *j, v.clone() * s.clone());
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row {
                out.set(i, *j, f(v));
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &SparseMatrix<T>) -> SparseMatrix<T> {
        self.compose(rhs).minus(&rhs.compose(self))
    }

    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.restrict(&rows, &cols)
    }

    pub fn from_dense(m: &Matrix<T>) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, m[(i, j)].clone());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ rhs` with row-major tuple indexing.
    pub fn kron(&self, rhs: &SparseMatrix<T>) -> SparseMatrix<T> {
        let mut out = SparseMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for (i1, row1) in self.entries.iter().enumerate() {
            for (j1, a) in row1 {
                for (i2, row2) in rhs.entries.iter().enumerate() {
                    for (j2, b) in row2 {
                        out.set(i1 * rhs.rows + i2, j1 * rhs.cols + j2, a.clone() * b.clone());
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix<T> {
        let mut out = SparseMatrix::zeros(self.cols, self.rows);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row {
                out.set(*j, i, v.clone());
            }
        }
        out
    }
}

impl SparseMatrix<Q> {
    pub fn to_c64(&self) -> SparseMatrix<C64> {
        self.map(q_to_c64)
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn norm2<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
}

pub fn vec_sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_scale<T: Scalar>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn vec_to_c64(v: &[Q]) -> Vec<C64> {
    v.iter().map(q_to_c64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_inverse_and_det() {
        let m = Matrix::from_rows(vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]]);
        assert_eq!(m.det(), qi(5));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
    }

    #[test]
    fn rank_and_pivots_of_singular_symmetric() {
        // columns 0 and 2 independent, column 1 = column 0
        let m = Matrix::from_rows(vec![
            vec![qi(1), qi(1), qi(0)],
            vec![qi(1), qi(1), qi(0)],
            vec![qi(0), qi(0), qi(4)],
        ]);
        let e = m.echelon();
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivot_cols, vec![0, 2]);
        assert!(m.principal(&e.pivot_cols).inverse().is_some());
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn off_diagonal_rank_two_has_nonsingular_principal_block() {
        let m = Matrix::from_rows(vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]]);
        let e = m.echelon();
        assert_eq!(e.rank, 2);
        assert_eq!(m.principal(&e.pivot_cols).det(), qi(-1));
    }

    #[test]
    fn complex_solve_matches() {
        let a = Matrix::from_rows(vec![
            vec![C64::new(1.0, 1.0), C64::new(2.0, 0.0)],
            vec![C64::new(0.0, -1.0), C64::new(3.0, 0.5)],
        ]);
        let b = vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)];
        let x = a.solve(&b).unwrap();
        let r = vec_sub(&a.mul_vec(&x), &b);
        assert!(norm2(&r) < 1e-14);
    }

    #[test]
    fn sparse_kron_and_compose() {
        let a = SparseMatrix::from_dense(&Matrix::from_rows(vec![vec![qi(0), qi(1)], vec![qi(0), qi(0)]]));
        let i2 = SparseMatrix::<Q>::identity(2);
        let k = a.kron(&i2);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(0, 2), qi(1));
        assert_eq!(k.get(1, 3), qi(1));
        assert!(a.compose(&a).is_zero());
    }
}
