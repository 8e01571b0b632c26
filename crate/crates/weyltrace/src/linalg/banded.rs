//! Tridiagonal LU factorization with partial pivoting.
//!
//! The radial (per-angular-mode) boundary-value systems are tridiagonal once
//! the domain is ordered innermost-node-to-boundary-value, so factoring them
//! densely would waste O(n^3) work where O(n) suffices.  Partial pivoting
//! introduces one extra superdiagonal of fill, the standard trade.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative pivot threshold (against the largest band entry) below which the
/// system is reported singular.
pub const TRIDIAG_PIVOT_REL: f64 = 1e-13;

/// Factored tridiagonal system.
#[derive(Debug, Clone)]
pub struct TridiagLu {
    n: usize,
    /// Multipliers (length n-1).
    dl: Vec<Complex64>,
    /// U main diagonal (length n).
    d: Vec<Complex64>,
    /// U first superdiagonal (length n-1).
    du: Vec<Complex64>,
    /// U second superdiagonal, fill from pivoting (length n-2).
    du2: Vec<Complex64>,
    /// Whether rows i and i+1 were interchanged at step i.
    swapped: Vec<bool>,
}

impl TridiagLu {
    /// Factor the tridiagonal matrix with subdiagonal `sub` (length n-1),
    /// diagonal `diag` (length n), and superdiagonal `sup` (length n-1).
    pub fn new(sub: &[Complex64], diag: &[Complex64], sup: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() != n.saturating_sub(1) || sup.len() != n.saturating_sub(1) {
            return Err(Error::DimensionMismatch {
                op: "TridiagLu::new",
                detail: format!(
                    "bands of length {}/{}/{} do not describe a tridiagonal matrix",
                    sub.len(),
                    diag.len(),
                    sup.len()
                ),
            });
        }
        let scale = sub
            .iter()
            .chain(diag.iter())
            .chain(sup.iter())
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let threshold = TRIDIAG_PIVOT_REL * scale;

        let mut dl = sub.to_vec();
        let mut d = diag.to_vec();
        let mut du = sup.to_vec();
        let mut du2 = vec![Complex64::new(0.0, 0.0); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];

        for i in 0..n.saturating_sub(1) {
            if d[i].norm() >= dl[i].norm() {
                // No interchange.
                if d[i].norm() <= threshold {
                    return Err(Error::Singular {
                        pivot: d[i].norm(),
                        threshold,
                    });
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                // Interchange rows i and i+1.
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1].norm() <= threshold {
            return Err(Error::Singular {
                pivot: d[n - 1].norm(),
                threshold,
            });
        }
        Ok(TridiagLu {
            n,
            dl,
            d,
            du,
            du2,
            swapped,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solve in place for one right-hand side.
    pub fn solve_in_place(&self, x: &mut [Complex64]) -> Result<()> {
        let n = self.n;
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                op: "TridiagLu::solve_in_place",
                detail: format!("rhs of length {} for a system of dimension {n}", x.len()),
            });
        }
        // Forward pass, applying the interchanges recorded at factor time.
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = x[i];
                x[i] = x[i + 1];
                x[i + 1] = temp - self.dl[i] * x[i];
            } else {
                let t = self.dl[i] * x[i];
                x[i + 1] -= t;
            }
        }
        // Back substitution against U (two superdiagonals).
        x[n - 1] /= self.d[n - 1];
        if n > 1 {
            x[n - 2] = (x[n - 2] - self.du[n - 2] * x[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - self.du[i] * x[i + 1] - self.du2[i] * x[i + 2]) / self.d[i];
        }
        Ok(())
    }

    /// Solve for one right-hand side, returning a fresh vector.
    pub fn solve_vec(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }
}
