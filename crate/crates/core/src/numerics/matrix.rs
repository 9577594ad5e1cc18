use std::fmt;

use super::ratfunc::RationalFunction;
use super::scalar::{Field, DEFAULT_TOLERANCE};
use super::{NumericsError, Rational};

/// Row-major dense matrix over a scalar field.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> DenseMatrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Builds from nested rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged matrix rows");
        DenseMatrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// `A^{-1}` by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self, NumericsError> {
        self.inverse_within(DEFAULT_TOLERANCE)
    }

    pub fn inverse_within(&self, tol: f64) -> Result<Self, NumericsError> {
        let n = self.rows;
        let cols = eliminate(self, Self::identity(n), tol)?;
        Ok(cols)
    }
}

impl<T: Field + fmt::Display> fmt::Display for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Solves `A x = b` by Gaussian elimination.
///
/// Float fields pivot on the largest magnitude; exact fields take the first
/// nonzero entry.
pub fn solve_linear<T: Field>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>, NumericsError> {
    solve_linear_within(a, b, DEFAULT_TOLERANCE)
}

pub fn solve_linear_within<T: Field>(
    a: &DenseMatrix<T>,
    b: &[T],
    tol: f64,
) -> Result<Vec<T>, NumericsError> {
    if b.len() != a.rows {
        return Err(NumericsError::Shape(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows
        )));
    }
    let rhs = DenseMatrix {
        rows: b.len(),
        cols: 1,
        data: b.to_vec(),
    };
    Ok(eliminate(a, rhs, tol)?.data)
}

/// Reduces `[A | B]` to `[I | A^{-1} B]`.
fn eliminate<T: Field>(
    a: &DenseMatrix<T>,
    rhs: DenseMatrix<T>,
    tol: f64,
) -> Result<DenseMatrix<T>, NumericsError> {
    if !a.is_square() {
        return Err(NumericsError::Shape(format!(
            "{}x{} system is not square",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let m = rhs.cols;
    let mut lhs: Vec<Vec<T>> = a.to_rows();
    let mut right: Vec<Vec<T>> = rhs.to_rows();

    for col in 0..n {
        let pivot = if T::EXACT {
            (col..n).find(|&r| !lhs[r][col].is_zero_within(tol))
        } else {
            (col..n)
                .filter(|&r| !lhs[r][col].is_zero_within(tol))
                .max_by(|&r1, &r2| {
                    let w1 = lhs[r1][col].pivot_weight().unwrap_or(0.0);
                    let w2 = lhs[r2][col].pivot_weight().unwrap_or(0.0);
                    w1.total_cmp(&w2).then(r2.cmp(&r1))
                })
        };
        let Some(p) = pivot else {
            return Err(NumericsError::SingularMatrix { column: col });
        };
        lhs.swap(col, p);
        right.swap(col, p);

        let inv = T::one() / lhs[col][col].clone();
        for x in lhs[col].iter_mut().skip(col) {
            *x = x.clone() * inv.clone();
        }
        for x in right[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let (pivot_lhs, pivot_rhs) = (lhs[col].clone(), right[col].clone());
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = lhs[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                lhs[r][j] = lhs[r][j].clone() - factor.clone() * pivot_lhs[j].clone();
            }
            for j in 0..m {
                right[r][j] = right[r][j].clone() - factor.clone() * pivot_rhs[j].clone();
            }
        }
    }
    Ok(DenseMatrix::from_rows(right))
}

/// `(I - βP)^{-1}` as a matrix of rational functions in β.
pub fn resolvent_inverse(p: &DenseMatrix<Rational>) -> Result<DenseMatrix<RationalFunction>, NumericsError> {
    let beta = RationalFunction::var();
    let lifted = p.map(|x| RationalFunction::constant(x.clone()));
    let system = DenseMatrix::identity(p.rows()).sub(&lifted.scale(&beta));
    system.inverse()
}
