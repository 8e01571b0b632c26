//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! The solver sweeps the strict upper triangle in row-cyclic order and
//! annihilates each off-diagonal entry with a complex plane rotation.  Cyclic
//! Jacobi converges quadratically once the off-diagonal mass is small, is
//! free of shift heuristics, and is bit-reproducible across runs, which is
//! why it is used here instead of a tridiagonalization pipeline: every
//! verification in this crate wants deterministic eigenpairs it can cross-check
//! against resolvents and singular values.

use super::{c64, CMatrix};
use crate::error::{Error, Result};

/// Sweep budget; typical matrices converge in 6-12 sweeps.
const MAX_SWEEPS: usize = 60;

/// Convergence: off-diagonal Frobenius mass relative to the matrix scale.
const CONV_REL: f64 = 1e-15;

/// Eigendecomposition `a = Q diag(vals) Q^H` of a Hermitian matrix.
///
/// * `tol` bounds the accepted Hermitian asymmetry, relative to the largest
///   entry magnitude; beyond it the call fails with [`Error::NotHermitian`].
///   Within it, the working copy is symmetrized to `(a + a^H)/2` so the
///   iteration operates on an exactly Hermitian matrix.
/// * Eigenvalues are returned in ascending order with matching columns of `Q`.
///
/// # Example
/// ```
/// use weyltrace::linalg::{hermitian_eig, CMatrix};
/// let a = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
/// let (vals, _q) = hermitian_eig(&a, 1e-12).unwrap();
/// assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
/// ```
pub fn hermitian_eig(a: &CMatrix, tol: f64) -> Result<(Vec<f64>, CMatrix)> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::identity(0)));
    }

    let scale_max = a.norm_max();
    let asymmetry = hermitian_defect(a);
    if asymmetry > tol * scale_max.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian {
            asymmetry,
            tol: tol * scale_max.max(f64::MIN_POSITIVE),
        });
    }

    // Exactly Hermitian working copy.
    let mut m = CMatrix::from_fn(n, n, |i, j| {
        let v = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
        if i == j {
            c64(v.re, 0.0)
        } else {
            v
        }
    });
    let mut q = CMatrix::identity(n);

    let scale = m.norm_fro();
    if scale == 0.0 {
        return Ok((vec![0.0; n], q));
    }

    let mut off = off_diagonal_norm(&m);
    for _sweep in 0..MAX_SWEEPS {
        if off <= CONV_REL * scale {
            return Ok(sorted_eigenpairs(&m, q));
        }
        // Entries far below the convergence target cannot affect the result;
        // skipping them avoids churning on rotations of angle ~ epsilon.
        let skip = CONV_REL * scale / (n as f64 * 10.0);
        for p in 0..n - 1 {
            for qq in p + 1..n {
                rotate(&mut m, &mut q, p, qq, skip);
            }
        }
        off = off_diagonal_norm(&m);
    }
    Err(Error::NoConvergence {
        sweeps: MAX_SWEEPS,
        off,
    })
}

/// Largest deviation from Hermitian symmetry, `max_ij |a_ij - conj(a_ji)|`.
fn hermitian_defect(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a.get(i, j) - a.get(j, i).conj()).norm());
        }
    }
    worst
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            acc += 2.0 * m.get(p, q).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Annihilate `m[p][q]` with the complex rotation
/// `U = [[c, s e^{i phi}], [-s e^{-i phi}, c]]` acting on the (p, q) plane,
/// where `m[p][q] = b e^{i phi}`; updates `m <- U^H m U` and `q_acc <- q_acc U`.
fn rotate(m: &mut CMatrix, q_acc: &mut CMatrix, p: usize, q: usize, skip: f64) {
    let apq = m.get(p, q);
    let b = apq.norm();
    if b <= skip {
        return;
    }
    let phase = apq / b; // e^{i phi}
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let tau = (aqq - app) / (2.0 * b);
    // Stable small root of t^2 + 2 tau t - 1 = 0.
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let w = phase * s; // U[p][q] = s e^{i phi}
    let n = m.rows();

    // Column update: m <- m U.
    for k in 0..n {
        let mkp = m.get(k, p);
        let mkq = m.get(k, q);
        m.set(k, p, mkp * c - mkq * w.conj());
        m.set(k, q, mkp * w + mkq * c);
    }
    // Row update: m <- U^H m.
    for k in 0..n {
        let mpk = m.get(p, k);
        let mqk = m.get(q, k);
        m.set(p, k, mpk * c - mqk * w);
        m.set(q, k, mpk * w.conj() + mqk * c);
    }
    // The rotation zeroes (p, q) and keeps the diagonal real by construction;
    // enforce both exactly to stop rounding dust from accumulating.
    m.set(p, q, c64(0.0, 0.0));
    m.set(q, p, c64(0.0, 0.0));
    m.set(p, p, c64(m.get(p, p).re, 0.0));
    m.set(q, q, c64(m.get(q, q).re, 0.0));

    // Accumulate eigenvectors: q_acc <- q_acc U.
    for k in 0..q_acc.rows() {
        let vkp = q_acc.get(k, p);
        let vkq = q_acc.get(k, q);
        q_acc.set(k, p, vkp * c - vkq * w.conj());
        q_acc.set(k, q, vkp * w + vkq * c);
    }
}

fn sorted_eigenpairs(m: &CMatrix, q: CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).re.total_cmp(&m.get(j, j).re));
    let vals: Vec<f64> = order.iter().map(|&i| m.get(i, i).re).collect();
    let vecs = CMatrix::from_fn(n, n, |i, j| q.get(i, order[j]));
    (vals, vecs)
}
