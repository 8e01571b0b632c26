//! LU factorization with partial pivoting.
//!
//! One factorization serves many right-hand sides, including transposed
//! solves (needed when a row vector is propagated through a resolvent).
//! Breakdown is detected against an explicit threshold relative to the
//! largest column norm of the input, so that "the spectral parameter sits on
//! the spectrum" surfaces as a clean [`Error::Singular`] instead of a flood
//! of infinities.

use super::{CMatrix, Complex64};
use crate::error::{Error, Result};

/// Default relative pivot threshold: a pivot below
/// `DEFAULT_PIVOT_REL * max_col_norm` aborts the factorization.
pub const DEFAULT_PIVOT_REL: f64 = 1e-13;

/// LU factors `P a = L U` of a square matrix.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    /// Combined storage: strict lower triangle holds L (unit diagonal
    /// implicit), upper triangle holds U.
    lu: CMatrix,
    /// Row permutation: row `i` of `P a` is row `perm[i]` of `a`.
    perm: Vec<usize>,
}

impl LuFactors {
    /// Factor with the default pivot threshold.
    pub fn new(a: &CMatrix) -> Result<Self> {
        Self::with_threshold(a, DEFAULT_PIVOT_REL)
    }

    /// Factor with an explicit relative pivot threshold.
    pub fn with_threshold(a: &CMatrix, rel_threshold: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let threshold = rel_threshold * a.max_col_norm().max(f64::MIN_POSITIVE);
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            // Partial pivoting: largest magnitude in column k at or below row k.
            let mut best = k;
            let mut best_mag = lu.get(k, k).norm();
            for i in k + 1..n {
                let mag = lu.get(i, k).norm();
                if mag > best_mag {
                    best = i;
                    best_mag = mag;
                }
            }
            if best_mag <= threshold {
                return Err(Error::Singular {
                    pivot: best_mag,
                    threshold,
                });
            }
            if best != k {
                perm.swap(k, best);
                for j in 0..n {
                    let tmp = lu.get(k, j);
                    lu.set(k, j, lu.get(best, j));
                    lu.set(best, j, tmp);
                }
            }
            let pivot = lu.get(k, k);
            for i in k + 1..n {
                let factor = lu.get(i, k) / pivot;
                lu.set(i, k, factor);
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let v = lu.get(i, j) - factor * lu.get(k, j);
                    lu.set(i, j, v);
                }
            }
        }
        Ok(LuFactors { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solve `a x = rhs` for each column of `rhs`.
    pub fn solve(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if rhs.rows() != self.n {
            return Err(Error::DimensionMismatch {
                op: "lu_solve",
                detail: format!("rhs has {} rows, matrix is {}x{}", rhs.rows(), self.n, self.n),
            });
        }
        let n = self.n;
        let ncols = rhs.cols();
        let mut x = CMatrix::zeros(n, ncols);
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..ncols {
            // Apply the permutation.
            for i in 0..n {
                col[i] = rhs.get(self.perm[i], j);
            }
            // Forward substitution with unit-diagonal L.
            for i in 1..n {
                let mut acc = col[i];
                for k in 0..i {
                    acc -= self.lu.get(i, k) * col[k];
                }
                col[i] = acc;
            }
            // Back substitution with U.
            for i in (0..n).rev() {
                let mut acc = col[i];
                for k in i + 1..n {
                    acc -= self.lu.get(i, k) * col[k];
                }
                col[i] = acc / self.lu.get(i, i);
            }
            for i in 0..n {
                x.set(i, j, col[i]);
            }
        }
        Ok(x)
    }

    /// Solve the transposed system `a^T x = rhs` (plain transpose, no
    /// conjugation) for each column of `rhs`.
    ///
    /// With `P a = L U` one has `a^T = U^T L^T P`, so the triangular sweeps
    /// run in the opposite order and the permutation is applied last.
    pub fn solve_transposed(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if rhs.rows() != self.n {
            return Err(Error::DimensionMismatch {
                op: "lu_solve_transposed",
                detail: format!("rhs has {} rows, matrix is {}x{}", rhs.rows(), self.n, self.n),
            });
        }
        let n = self.n;
        let ncols = rhs.cols();
        let mut x = CMatrix::zeros(n, ncols);
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..ncols {
            for i in 0..n {
                col[i] = rhs.get(i, j);
            }
            // U^T is lower triangular (non-unit diagonal): forward sweep.
            for i in 0..n {
                let mut acc = col[i];
                for k in 0..i {
                    acc -= self.lu.get(k, i) * col[k];
                }
                col[i] = acc / self.lu.get(i, i);
            }
            // L^T is upper triangular with unit diagonal: backward sweep.
            for i in (0..n).rev() {
                let mut acc = col[i];
                for k in i + 1..n {
                    acc -= self.lu.get(k, i) * col[k];
                }
                col[i] = acc;
            }
            // Undo the permutation: x[perm[i]] = col[i].
            for i in 0..n {
                x.set(self.perm[i], j, col[i]);
            }
        }
        Ok(x)
    }
}

/// One-shot solve `a x = rhs` with the default pivot threshold.
///
/// # Example
/// ```
/// use weyltrace::linalg::{solve, CMatrix};
/// let a = CMatrix::from_real_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
/// let b = CMatrix::from_real_rows(&[vec![2.0], vec![8.0]]).unwrap();
/// let x = solve(&a, &b).unwrap();
/// assert!((x.get(0, 0).re - 1.0).abs() < 1e-14);
/// assert!((x.get(1, 0).re - 2.0).abs() < 1e-14);
/// ```
pub fn solve(a: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    LuFactors::new(a)?.solve(rhs)
}

/// Matrix inverse via LU.
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    let lu = LuFactors::new(a)?;
    lu.solve(&CMatrix::identity(a.rows()))
}
