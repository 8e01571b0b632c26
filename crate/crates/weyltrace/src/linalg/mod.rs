//! Dense complex linear algebra over weighted inner-product spaces.
//!
//! Everything in this crate runs at "desk scale" (matrix dimensions in the
//! hundreds to low thousands), so the kernels are deliberately simple dense
//! routines with deterministic, single-threaded execution:
//!
//! * [`CMatrix`] — row-major dense complex matrix with shape-checked algebra,
//! * [`WeightedSpace`] — a coordinate space with strictly positive quadrature
//!   weights; all adjoints in the crate are weighted adjoints,
//! * [`hermitian_eig`] — cyclic Jacobi eigensolver for Hermitian matrices,
//! * [`LuFactors`]/[`solve`] — LU with partial pivoting and an explicit
//!   pivot-breakdown threshold,
//! * [`svd_values`] — singular values via the Gram-matrix eigenproblem,
//! * [`trace`], [`weak_schatten_quasinorm`] — scalar reductions used by the
//!   trace-formula and decay analyses.

mod banded;
mod eig;
mod lu;
mod svd;

pub use banded::{TridiagLu, TRIDIAG_PIVOT_REL};
pub use eig::hermitian_eig;
pub use lu::{inverse, solve, LuFactors, DEFAULT_PIVOT_REL};
pub use svd::svd_values;

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shorthand constructor for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Matrix of zeros.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c64(1.0, 0.0));
        }
        m
    }

    /// Build from a callback `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from explicit complex rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                op: "from_rows",
                detail: "ragged row lengths".into(),
            });
        }
        let mut m = CMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Build from explicit real rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| c64(x, 0.0)).collect())
            .collect();
        CMatrix::from_rows(&complex)
    }

    /// Diagonal matrix from complex entries.
    pub fn diagonal(d: &[Complex64]) -> Self {
        let mut m = CMatrix::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    /// Borrow row `i` as a slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Mutable row access.
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy of column `j`.
    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Flat row-major data.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                detail: format!(
                    "{}x{} * {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        // i-k-j ordering: streams over contiguous rows of rhs and out.
        for i in 0..self.rows {
            let arow = self.row(i);
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &aik) in arow.iter().enumerate() {
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue; // trace maps and stencils are mostly zeros
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &bkj) in orow.iter_mut().zip(brow) {
                    *o += aik * bkj;
                }
            }
        }
        Ok(out)
    }

    /// Entry-wise sum.
    pub fn add(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    /// Entry-wise difference.
    pub fn sub(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &CMatrix,
        op: &'static str,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<CMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                op,
                detail: format!(
                    "{}x{} vs {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, z: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * z).collect(),
        }
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Conjugate transpose (plain, unweighted adjoint).
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest Euclidean column norm (the scale used for pivot thresholds).
    pub fn max_col_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| self.get(i, j).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `self * diag(s)` for a complex scaling vector (one entry per column).
    pub fn col_scaled_complex(&self, s: &[Complex64]) -> Result<CMatrix> {
        if s.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "col_scaled_complex",
                detail: format!("{} scales for {} cols", s.len(), self.cols),
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for (v, &w) in out.row_mut(i).iter_mut().zip(s) {
                *v *= w;
            }
        }
        Ok(out)
    }

    /// True if every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `diag(s) * self` for a real scaling vector (one entry per row).
    pub fn row_scaled(&self, s: &[f64]) -> Result<CMatrix> {
        if s.len() != self.rows {
            return Err(Error::DimensionMismatch {
                op: "row_scaled",
                detail: format!("{} scales for {} rows", s.len(), self.rows),
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let w = s[i];
            for v in out.row_mut(i) {
                *v *= w;
            }
        }
        Ok(out)
    }

    /// `self * diag(s)` for a real scaling vector (one entry per column).
    pub fn col_scaled(&self, s: &[f64]) -> Result<CMatrix> {
        if s.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "col_scaled",
                detail: format!("{} scales for {} cols", s.len(), self.cols),
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for (v, &w) in out.row_mut(i).iter_mut().zip(s) {
                *v *= w;
            }
        }
        Ok(out)
    }
}

/// Coordinate space `C^dim` carrying strictly positive quadrature weights.
///
/// The inner product is `(u, v) = sum_i w_i u_i conj(v_i)`.  Interior spaces
/// carry cell masses, boundary spaces carry trace-segment masses; both enter
/// every adjoint taken in this crate.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSpace {
    weights: Vec<f64>,
    sqrt_weights: Vec<f64>,
}

impl WeightedSpace {
    /// Build from explicit weights; each must be strictly positive and finite.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::DegenerateGrid {
                    detail: format!("weight {w:e} at index {i} is not strictly positive"),
                });
            }
        }
        let sqrt_weights = weights.iter().map(|w| w.sqrt()).collect();
        Ok(WeightedSpace {
            weights,
            sqrt_weights,
        })
    }

    /// Space with a uniform weight.
    pub fn uniform(dim: usize, w: f64) -> Result<Self> {
        WeightedSpace::new(vec![w; dim])
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sqrt_weights(&self) -> &[f64] {
        &self.sqrt_weights
    }

    /// Weighted inner product, linear in the first argument.
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        debug_assert_eq!(u.len(), self.dim());
        debug_assert_eq!(v.len(), self.dim());
        let mut acc = c64(0.0, 0.0);
        for ((&w, &a), &b) in self.weights.iter().zip(u).zip(v) {
            acc += w * a * b.conj();
        }
        acc
    }

    /// Weighted norm.
    pub fn norm(&self, u: &[Complex64]) -> f64 {
        self.inner(u, u).re.max(0.0).sqrt()
    }

    /// Inverse square-root weights (for similarity transforms).
    pub fn inv_sqrt_weights(&self) -> Vec<f64> {
        self.sqrt_weights.iter().map(|s| 1.0 / s).collect()
    }
}

/// Weighted adjoint of `a : dom -> cod`, i.e. `W_dom^-1 a^H W_cod`.
///
/// This is the unique map satisfying `(a u, v)_cod = (u, a* v)_dom` for the
/// weighted inner products of the two spaces.
pub fn weighted_adjoint(a: &CMatrix, dom: &WeightedSpace, cod: &WeightedSpace) -> Result<CMatrix> {
    if a.cols() != dom.dim() || a.rows() != cod.dim() {
        return Err(Error::DimensionMismatch {
            op: "weighted_adjoint",
            detail: format!(
                "map is {}x{}, dom dim {}, cod dim {}",
                a.rows(),
                a.cols(),
                dom.dim(),
                cod.dim()
            ),
        });
    }
    let wd = dom.weights();
    let wc = cod.weights();
    Ok(CMatrix::from_fn(a.cols(), a.rows(), |i, j| {
        a.get(j, i).conj() * (wc[j] / wd[i])
    }))
}

/// Similarity transform `W^{1/2} a W^{-1/2}` taking an operator on a weighted
/// space to its representation on the corresponding unweighted space.
///
/// An operator self-adjoint for the weighted inner product becomes plain
/// Hermitian under this transform, which is how the Jacobi eigensolver and the
/// singular-value routine are applied to weighted operators.
pub fn symmetrize_weighted(a: &CMatrix, space: &WeightedSpace) -> Result<CMatrix> {
    if !a.is_square() || a.rows() != space.dim() {
        return Err(Error::DimensionMismatch {
            op: "symmetrize_weighted",
            detail: format!("{}x{} on space of dim {}", a.rows(), a.cols(), space.dim()),
        });
    }
    a.row_scaled(space.sqrt_weights())?
        .col_scaled(&space.inv_sqrt_weights())
}

/// Trace of a square matrix.
pub fn trace(a: &CMatrix) -> Result<Complex64> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let mut acc = c64(0.0, 0.0);
    for i in 0..a.rows() {
        acc += a.get(i, i);
    }
    Ok(acc)
}

/// Weak-Schatten quasinorm `sup_k k^{1/p} s_k` of a non-increasing sequence of
/// singular values (`k` is 1-based).  Finiteness of this quasinorm as the
/// resolution grows is the numerical signature of membership in the weak
/// Schatten-von Neumann ideal with exponent `p`.
pub fn weak_schatten_quasinorm(s: &[f64], p: f64) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptySequence {
            op: "weak_schatten_quasinorm",
        });
    }
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::Config(format!(
            "weak_schatten_quasinorm requires p > 0, got {p}"
        )));
    }
    Ok(s.iter()
        .enumerate()
        .map(|(k, &sk)| ((k + 1) as f64).powf(1.0 / p) * sk)
        .fold(0.0, f64::max))
}
