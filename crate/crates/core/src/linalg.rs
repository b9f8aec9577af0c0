//! Dense matrices over exact rationals and the Gaussian elimination kernel.
//!
//! One elimination routine backs every solve in the crate. Pivoting picks
//! the first row with a nonzero entry in the current column; over exact
//! rationals that is enough for correctness, and it keeps the elimination
//! order deterministic.

use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            data: vec![Rational::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::from_integer(1.into());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.ncols, other.nrows, "inner dimensions differ");
        let mut out = RatMatrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.ncols, v.len(), "vector length differs");
        (0..self.nrows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.ncols + j]
    }
}

/// Solves `A * X = rhs` exactly over the rationals.
///
/// Returns `SingularMatrix` when `A` has no inverse. `rhs` may carry any
/// number of columns; each is solved against the same elimination.
pub fn solve_linear_rational(a: &RatMatrix, rhs: &RatMatrix) -> Result<RatMatrix, LinalgError> {
    if a.nrows() != a.ncols() {
        return Err(LinalgError::DimensionMismatch(format!(
            "coefficient matrix is {}x{}, expected square",
            a.nrows(),
            a.ncols()
        )));
    }
    if rhs.nrows() != a.nrows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "rhs has {} rows, expected {}",
            rhs.nrows(),
            a.nrows()
        )));
    }

    let n = a.nrows();
    let mut u = a.clone();
    let mut x = rhs.clone();

    // Forward elimination.
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !u[(r, col)].is_zero())
            .ok_or(LinalgError::SingularMatrix)?;
        u.swap_rows(col, pivot_row);
        x.swap_rows(col, pivot_row);
        for r in col + 1..n {
            if u[(r, col)].is_zero() {
                continue;
            }
            let factor = &u[(r, col)] / &u[(col, col)];
            for j in col..n {
                if u[(col, j)].is_zero() {
                    continue;
                }
                let delta = &factor * &u[(col, j)];
                u[(r, j)] -= delta;
            }
            for j in 0..x.ncols() {
                if x[(col, j)].is_zero() {
                    continue;
                }
                let delta = &factor * &x[(col, j)];
                x[(r, j)] -= delta;
            }
        }
    }

    // Back substitution, one rhs column at a time.
    for j in 0..x.ncols() {
        for i in (0..n).rev() {
            let mut acc = x[(i, j)].clone();
            for k in i + 1..n {
                if u[(i, k)].is_zero() || x[(k, j)].is_zero() {
                    continue;
                }
                let delta = &u[(i, k)] * &x[(k, j)];
                acc -= delta;
            }
            x[(i, j)] = &acc / &u[(i, i)];
        }
    }
    Ok(x)
}
