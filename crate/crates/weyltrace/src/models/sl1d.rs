//! Sturm-Liouville interval model: `-(a u')' + a0 u` on `[0, L]`.
//!
//! Uniform grid of `n` cells (nodes `x_i = i h`, `h = L/n`).  The domain
//! vector is all `n + 1` node values; the interior space is the `n - 1`
//! inner nodes with quadrature weight `h`; the boundary space is the two
//! endpoint values with weight 1.
//!
//! The expression rows use the conservative face form
//!
//! ```text
//! (T f)_i = -[ a_{i+1/2} (f_{i+1} - f_i) - a_{i-1/2} (f_i - f_{i-1}) ] / h^2
//!           + a0(x_i) f_i,
//! ```
//!
//! and the conormal trace is the one-sided outward flux `a_{1/2}(f_0 - f_1)/h`
//! (left) and `a_{n-1/2}(f_n - f_{n-1})/h` (right).  Summation by parts then
//! telescopes exactly: the Green identity holds to rounding for any positive
//! face coefficients, not just constants.

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, WeightedSpace};
use crate::models::Coeff;
use crate::triple::QuasiTriple;

/// Build the interval triple.  `a` is sampled at the `n` cell faces
/// (midpoints), `a0` at the `n - 1` interior nodes.
pub fn build(n: usize, length: f64, a: &Coeff, a0: &Coeff) -> Result<QuasiTriple> {
    if n < 2 {
        return Err(Error::DegenerateGrid {
            detail: format!("sl1d needs at least 2 cells, got {n}"),
        });
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::DegenerateGrid {
            detail: format!("sl1d length must be positive, got {length}"),
        });
    }
    let h = length / n as f64;

    let mut faces = Vec::with_capacity(n);
    for i in 0..n {
        let v = a.value(i, n, "sl1d stiffness coefficient a")?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::EllipticityViolated { index: i, value: v });
        }
        faces.push(v);
    }
    let mut pot = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let v = a0.value(i, n - 1, "sl1d potential a0")?;
        if !v.is_finite() {
            return Err(Error::Config(format!(
                "sl1d potential sample {i} is not finite"
            )));
        }
        pot.push(v);
    }

    let dom = n + 1;
    let nh = n - 1;
    let h2 = h * h;

    let mut t = CMatrix::zeros(nh, dom);
    let mut p = CMatrix::zeros(nh, dom);
    for r in 0..nh {
        let i = r + 1; // node index
        let (am, ap) = (faces[i - 1], faces[i]);
        t.set(r, i - 1, c64(-am / h2, 0.0));
        t.set(r, i, c64((am + ap) / h2 + pot[r], 0.0));
        t.set(r, i + 1, c64(-ap / h2, 0.0));
        p.set(r, i, c64(1.0, 0.0));
    }

    let mut gamma0 = CMatrix::zeros(2, dom);
    gamma0.set(0, 0, c64(faces[0] / h, 0.0));
    gamma0.set(0, 1, c64(-faces[0] / h, 0.0));
    gamma0.set(1, n, c64(faces[n - 1] / h, 0.0));
    gamma0.set(1, n - 1, c64(-faces[n - 1] / h, 0.0));

    let mut gamma1 = CMatrix::zeros(2, dom);
    gamma1.set(0, 0, c64(1.0, 0.0));
    gamma1.set(1, n, c64(1.0, 0.0));

    let h_space = WeightedSpace::new(vec![h; nh])?;
    let g_space = WeightedSpace::new(vec![1.0, 1.0])?;
    QuasiTriple::new(h_space, g_space, t, p, gamma0, gamma1)
}
