//! Disk model via separation of variables.
//!
//! On the disk of radius `R`, the Laplacian splits over angular modes
//! `l = 0, ±1, ..., ±mode_max` into radial problems
//!
//! ```text
//! (T_l u)(r) = -(1/r) (r u')' + (l^2 / r^2) u        on (0, R],
//! ```
//!
//! discretized on the staggered grid `r_j = (j - 1/2) h`, `h = R / n_r`,
//! with one extra domain value `u_b` at `r = R`.  Fluxes live on whole-index
//! circles: `F_{j+1/2} = r_{j+1/2} (u_{j+1} - u_j)/h`, the origin flux
//! `F_{1/2}` vanishes identically (its radius is zero — this encodes the
//! regularity closure for every mode), and the boundary flux uses the
//! one-sided difference `2 R (u_b - u_{n_r}) / h`.
//!
//! Weights carry the angular factor `c = 2 pi / (2 mode_max + 1)`: interior
//! `c r_j h`, boundary `c R` — i.e. the boundary coordinate (one Fourier
//! coefficient per mode) has weight `2 pi R / (2 mode_max + 1)`, and the
//! per-mode Green identity is exact to rounding.
//!
//! Two representations are provided.  [`ModeBlock`] holds a dense
//! [`QuasiTriple`] per mode (used by trace checks, which need interior
//! eigenvalues anyway).  [`RadialMode`] holds only the tridiagonal bands of
//! the stacked boundary-value system and solves through [`RadialFactor`] in
//! O(n_r) per application — the decay ladder runs thousands of modes at
//! n_r > 1000, where dense factorization would be prohibitive.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, TridiagLu, WeightedSpace};
use crate::triple::QuasiTriple;

/// Largest direct-sum domain dimension [`assemble_direct_sum`] will build;
/// beyond this the dense maps alone reach hundreds of megabytes.
pub const DIRECT_SUM_LIMIT: usize = 1500;

/// One angular mode carrying a dense boundary triple.
#[derive(Debug, Clone)]
pub struct ModeBlock {
    pub ell: i64,
    pub triple: QuasiTriple,
}

/// Lightweight bands-only handle for one radial problem.
#[derive(Debug, Clone)]
pub struct RadialMode {
    ell: i64,
    n_r: usize,
    h: f64,
    radius: f64,
    /// Interior quadrature weights `c r_j h`.
    interior_weights: Vec<f64>,
    /// Boundary weight `c R`.
    boundary_weight: f64,
}

/// Angular mode enumeration order: `0, 1, -1, 2, -2, ...`.
pub fn mode_order(mode_max: usize) -> Vec<i64> {
    let mut order = Vec::with_capacity(2 * mode_max + 1);
    order.push(0);
    for l in 1..=mode_max as i64 {
        order.push(l);
        order.push(-l);
    }
    order
}

fn check_grid(n_r: usize, radius: f64) -> Result<(f64, Vec<f64>)> {
    if n_r < 3 {
        return Err(Error::DegenerateGrid {
            detail: format!("disk needs at least 3 radial cells, got {n_r}"),
        });
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::DegenerateGrid {
            detail: format!("disk radius must be positive, got {radius}"),
        });
    }
    let h = radius / n_r as f64;
    let r: Vec<f64> = (1..=n_r).map(|j| (j as f64 - 0.5) * h).collect();
    Ok((h, r))
}

/// Bands-only radial problems for all modes, in [`mode_order`].
pub fn radial_modes(n_r: usize, mode_max: usize, radius: f64) -> Result<Vec<RadialMode>> {
    let (h, r) = check_grid(n_r, radius)?;
    let c = 2.0 * std::f64::consts::PI / (2.0 * mode_max as f64 + 1.0);
    let interior_weights: Vec<f64> = r.iter().map(|&rj| c * rj * h).collect();
    Ok(mode_order(mode_max)
        .into_iter()
        .map(|ell| RadialMode {
            ell,
            n_r,
            h,
            radius,
            interior_weights: interior_weights.clone(),
            boundary_weight: c * radius,
        })
        .collect())
}

impl RadialMode {
    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn interior_weights(&self) -> &[f64] {
        &self.interior_weights
    }

    pub fn boundary_weight(&self) -> f64 {
        self.boundary_weight
    }

    /// Row coefficients of the radial expression at interior row `j`
    /// (0-based; node `j+1`): `(sub, diag, sup)` multiplying
    /// `(f_j, f_{j+1}, f_{j+2 or b})`.
    fn expression_row(&self, j: usize) -> (f64, f64, f64) {
        let h = self.h;
        let jn = j + 1;
        let rj = (jn as f64 - 0.5) * h;
        let rm = (jn as f64 - 1.0) * h; // r_{j-1/2}; zero at the origin row
        let h2 = h * h;
        let angular = (self.ell as f64 / rj).powi(2);
        if jn < self.n_r {
            let rp = jn as f64 * h;
            (-rm / (rj * h2), (rm + rp) / (rj * h2) + angular, -rp / (rj * h2))
        } else {
            // Boundary flux 2 R (f_b - f_N) / h replaces the upper face flux.
            let bf = 2.0 * self.radius;
            (-rm / (rj * h2), (rm + bf) / (rj * h2) + angular, -bf / (rj * h2))
        }
    }

    /// Conormal-trace coefficients `(on f_N, on f_b)`.
    fn trace_row(&self) -> (f64, f64) {
        (-2.0 / self.h, 2.0 / self.h)
    }

    /// Factor the stacked system `[T - lambda P; Gamma0]` (tridiagonal in the
    /// ordering `f_1, ..., f_N, f_b`).
    pub fn factor(&self, lambda: Complex64) -> Result<RadialFactor<'_>> {
        let n = self.n_r + 1;
        let mut sub = vec![c64(0.0, 0.0); n - 1];
        let mut diag = vec![c64(0.0, 0.0); n];
        let mut sup = vec![c64(0.0, 0.0); n - 1];
        for j in 0..self.n_r {
            let (s, d, u) = self.expression_row(j);
            if j > 0 {
                sub[j - 1] = c64(s, 0.0);
            }
            diag[j] = c64(d, 0.0) - lambda;
            sup[j] = c64(u, 0.0);
        }
        let (ts, td) = self.trace_row();
        sub[n - 2] = c64(ts, 0.0);
        diag[n - 1] = c64(td, 0.0);
        let lu = TridiagLu::new(&sub, &diag, &sup).map_err(|e| match e {
            Error::Singular { .. } => Error::LambdaInSpectrum {
                lambda: crate::triple::format_lambda(lambda),
            },
            other => other,
        })?;
        Ok(RadialFactor { mode: self, lu })
    }

    /// Dense boundary triple for this mode.
    pub fn to_triple(&self) -> Result<QuasiTriple> {
        let n = self.n_r;
        let dom = n + 1;
        let mut t = CMatrix::zeros(n, dom);
        let mut p = CMatrix::zeros(n, dom);
        for j in 0..n {
            let (s, d, u) = self.expression_row(j);
            if j > 0 {
                t.set(j, j - 1, c64(s, 0.0));
            }
            t.set(j, j, c64(d, 0.0));
            t.set(j, j + 1, c64(u, 0.0));
            p.set(j, j, c64(1.0, 0.0));
        }
        let mut gamma0 = CMatrix::zeros(1, dom);
        let (ts, td) = self.trace_row();
        gamma0.set(0, n - 1, c64(ts, 0.0));
        gamma0.set(0, n, c64(td, 0.0));
        let mut gamma1 = CMatrix::zeros(1, dom);
        gamma1.set(0, n, c64(1.0, 0.0));
        let h_space = WeightedSpace::new(self.interior_weights.clone())?;
        let g_space = WeightedSpace::new(vec![self.boundary_weight])?;
        QuasiTriple::new(h_space, g_space, t, p, gamma0, gamma1)
    }
}

/// Tridiagonal factorization of one radial boundary-value system at a fixed
/// spectral parameter.
pub struct RadialFactor<'a> {
    mode: &'a RadialMode,
    lu: TridiagLu,
}

impl RadialFactor<'_> {
    /// The radial mode this factorization belongs to.
    pub fn mode(&self) -> &RadialMode {
        self.mode
    }

    /// Interior values of the solution with unit conormal datum — the gamma
    /// field column for this mode.
    pub fn gamma(&self) -> Result<Vec<Complex64>> {
        Ok(self.boundary_solution()?.0)
    }

    /// Scalar Weyl-function value for this mode.
    pub fn weyl(&self) -> Result<Complex64> {
        Ok(self.boundary_solution()?.1)
    }

    /// Full boundary-datum solve: (interior values, boundary value).
    pub fn boundary_solution(&self) -> Result<(Vec<Complex64>, Complex64)> {
        let n = self.lu.dim();
        let mut rhs = vec![c64(0.0, 0.0); n];
        rhs[n - 1] = c64(1.0, 0.0);
        self.lu.solve_in_place(&mut rhs)?;
        let boundary = rhs[n - 1];
        rhs.truncate(n - 1);
        Ok((rhs, boundary))
    }

    /// Apply the reference (Neumann) resolvent `(A_0 - lambda)^{-1}` to an
    /// interior vector: solve the stacked system with interior data `u` and
    /// zero conormal trace, then restrict to the interior.
    pub fn apply_resolvent(&self, u: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.lu.dim();
        if u.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                op: "RadialFactor::apply_resolvent",
                detail: format!("interior vector of length {}, expected {}", u.len(), n - 1),
            });
        }
        let mut rhs = Vec::with_capacity(n);
        rhs.extend_from_slice(u);
        rhs.push(c64(0.0, 0.0));
        self.lu.solve_in_place(&mut rhs)?;
        rhs.truncate(n - 1);
        Ok(rhs)
    }
}

/// Dense per-mode triples for all modes, in [`mode_order`].
pub fn mode_blocks(n_r: usize, mode_max: usize, radius: f64) -> Result<Vec<ModeBlock>> {
    radial_modes(n_r, mode_max, radius)?
        .into_iter()
        .map(|m| {
            Ok(ModeBlock {
                ell: m.ell,
                triple: m.to_triple()?.with_boundary_modes(vec![m.ell])?,
            })
        })
        .collect()
}

/// Assemble the blocks into one dense direct-sum triple with mode labels on
/// the boundary coordinates.  Refuses domains past [`DIRECT_SUM_LIMIT`].
pub fn assemble_direct_sum(blocks: &[ModeBlock]) -> Result<QuasiTriple> {
    if blocks.is_empty() {
        return Err(Error::EmptySequence {
            op: "assemble_direct_sum",
        });
    }
    let dom_total: usize = blocks.iter().map(|b| b.triple.domain_dim()).sum();
    if dom_total > DIRECT_SUM_LIMIT {
        return Err(Error::DimensionMismatch {
            op: "assemble_direct_sum",
            detail: format!(
                "direct-sum domain dimension {dom_total} exceeds the dense limit \
                 {DIRECT_SUM_LIMIT}; use the per-mode representation"
            ),
        });
    }
    let nh_total: usize = blocks.iter().map(|b| b.triple.interior_space().dim()).sum();
    let ng_total: usize = blocks.iter().map(|b| b.triple.boundary_space().dim()).sum();

    let mut t = CMatrix::zeros(nh_total, dom_total);
    let mut p = CMatrix::zeros(nh_total, dom_total);
    let mut gamma0 = CMatrix::zeros(ng_total, dom_total);
    let mut gamma1 = CMatrix::zeros(ng_total, dom_total);
    let mut h_weights = Vec::with_capacity(nh_total);
    let mut g_weights = Vec::with_capacity(ng_total);
    let mut labels = Vec::with_capacity(ng_total);

    let (mut dom_off, mut h_off, mut g_off) = (0usize, 0usize, 0usize);
    for block in blocks {
        let tr = &block.triple;
        let (nh, ng, dom) = (
            tr.interior_space().dim(),
            tr.boundary_space().dim(),
            tr.domain_dim(),
        );
        for i in 0..nh {
            for j in 0..dom {
                t.set(h_off + i, dom_off + j, tr.expression().get(i, j));
                p.set(h_off + i, dom_off + j, tr.interior_projection().get(i, j));
            }
        }
        for i in 0..ng {
            for j in 0..dom {
                gamma0.set(g_off + i, dom_off + j, tr.trace_conormal().get(i, j));
                gamma1.set(g_off + i, dom_off + j, tr.trace_dirichlet().get(i, j));
            }
        }
        h_weights.extend_from_slice(tr.interior_space().weights());
        g_weights.extend_from_slice(tr.boundary_space().weights());
        labels.extend(std::iter::repeat(block.ell).take(ng));
        dom_off += dom;
        h_off += nh;
        g_off += ng;
    }

    QuasiTriple::new(
        WeightedSpace::new(h_weights)?,
        WeightedSpace::new(g_weights)?,
        t,
        p,
        gamma0,
        gamma1,
    )?
    .with_boundary_modes(labels)
}
