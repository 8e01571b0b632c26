//! Rectangle model: `-(a11 u_x)_x - (a22 u_y)_y + a0 u` on `[0,lx] x [0,ly]`.
//!
//! Five-point conservative stencil on an `(nx+1) x (ny+1)` node grid.  The
//! four corner nodes belong to no trace and carry no degree of freedom; the
//! domain is every other node.  Interior nodes have quadrature weight
//! `hx * hy`; boundary nodes carry the length of their edge cell (`hx` on the
//! bottom/top edges, `hy` on the left/right edges).  The conormal trace is
//! the one-sided outward flux through the boundary node's face, which is
//! exactly what the interior summation by parts telescopes to, so the Green
//! identity holds to rounding.

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, WeightedSpace};
use crate::models::Coeff;
use crate::triple::QuasiTriple;

/// Build the rectangle triple (constant coefficients).
pub fn build(
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    a11: &Coeff,
    a22: &Coeff,
    a0: &Coeff,
) -> Result<QuasiTriple> {
    if nx < 3 || ny < 3 {
        return Err(Error::DegenerateGrid {
            detail: format!("rect2d needs nx, ny >= 3, got {nx} x {ny}"),
        });
    }
    if !(lx.is_finite() && lx > 0.0 && ly.is_finite() && ly > 0.0) {
        return Err(Error::DegenerateGrid {
            detail: format!("rect2d side lengths must be positive, got {lx} x {ly}"),
        });
    }
    let ax = a11.constant("rect2d coefficient a11")?;
    let ay = a22.constant("rect2d coefficient a22")?;
    let pot = a0.constant("rect2d potential a0")?;
    if !(ax.is_finite() && ax > 0.0) {
        return Err(Error::EllipticityViolated { index: 0, value: ax });
    }
    if !(ay.is_finite() && ay > 0.0) {
        return Err(Error::EllipticityViolated { index: 1, value: ay });
    }
    if !pot.is_finite() {
        return Err(Error::Config("rect2d potential must be finite".into()));
    }

    let hx = lx / nx as f64;
    let hy = ly / ny as f64;

    // Domain indexing: all nodes except the four corners, in (j, i) scan
    // order.  `node[j][i]` is the domain column of node (i, j), if any.
    let is_corner =
        |i: usize, j: usize| (i == 0 || i == nx) && (j == 0 || j == ny);
    let mut node = vec![vec![usize::MAX; nx + 1]; ny + 1];
    let mut dom = 0usize;
    for j in 0..=ny {
        for i in 0..=nx {
            if !is_corner(i, j) {
                node[j][i] = dom;
                dom += 1;
            }
        }
    }

    let n_interior = (nx - 1) * (ny - 1);
    let n_boundary = 2 * (nx - 1) + 2 * (ny - 1);

    let cx = ax / (hx * hx);
    let cy = ay / (hy * hy);

    let mut t = CMatrix::zeros(n_interior, dom);
    let mut p = CMatrix::zeros(n_interior, dom);
    for j in 1..ny {
        for i in 1..nx {
            let r = (j - 1) * (nx - 1) + (i - 1);
            t.set(r, node[j][i - 1], c64(-cx, 0.0));
            t.set(r, node[j][i + 1], c64(-cx, 0.0));
            t.set(r, node[j - 1][i], c64(-cy, 0.0));
            t.set(r, node[j + 1][i], c64(-cy, 0.0));
            t.set(r, node[j][i], c64(2.0 * cx + 2.0 * cy + pot, 0.0));
            p.set(r, node[j][i], c64(1.0, 0.0));
        }
    }

    // Boundary enumeration: bottom, top, left, right; non-corner nodes only.
    let mut gamma0 = CMatrix::zeros(n_boundary, dom);
    let mut gamma1 = CMatrix::zeros(n_boundary, dom);
    let mut weights = Vec::with_capacity(n_boundary);
    let mut row = 0usize;
    let add = |row: usize,
                   gamma0: &mut CMatrix,
                   gamma1: &mut CMatrix,
                   outer: usize,
                   inner: usize,
                   flux: f64| {
        gamma0.set(row, outer, c64(flux, 0.0));
        gamma0.set(row, inner, c64(-flux, 0.0));
        gamma1.set(row, outer, c64(1.0, 0.0));
    };
    for i in 1..nx {
        add(row, &mut gamma0, &mut gamma1, node[0][i], node[1][i], ay / hy);
        weights.push(hx);
        row += 1;
    }
    for i in 1..nx {
        add(
            row,
            &mut gamma0,
            &mut gamma1,
            node[ny][i],
            node[ny - 1][i],
            ay / hy,
        );
        weights.push(hx);
        row += 1;
    }
    for j in 1..ny {
        add(row, &mut gamma0, &mut gamma1, node[j][0], node[j][1], ax / hx);
        weights.push(hy);
        row += 1;
    }
    for j in 1..ny {
        add(
            row,
            &mut gamma0,
            &mut gamma1,
            node[j][nx],
            node[j][nx - 1],
            ax / hx,
        );
        weights.push(hy);
        row += 1;
    }
    debug_assert_eq!(row, n_boundary);

    let h_space = WeightedSpace::new(vec![hx * hy; n_interior])?;
    let g_space = WeightedSpace::new(weights)?;
    QuasiTriple::new(h_space, g_space, t, p, gamma0, gamma1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::{KernelChoice, Realization};

    fn unit_square(n: usize) -> QuasiTriple {
        build(
            n,
            n,
            1.0,
            1.0,
            &Coeff::Const(1.0),
            &Coeff::Const(1.0),
            &Coeff::Const(0.0),
        )
        .unwrap()
    }

    #[test]
    fn smallest_grid_green_residual_tiny() {
        let tr = unit_square(3);
        let report = tr.check_green_identity(25, 1e-14, 5);
        assert!(
            report.pass,
            "3x3 Green residual {:.3e}",
            report.max_residual
        );
    }

    #[test]
    fn anisotropic_rectangle_green_exact() {
        let tr = build(
            6,
            5,
            2.0,
            1.5,
            &Coeff::Const(1.7),
            &Coeff::Const(0.4),
            &Coeff::Const(0.3),
        )
        .unwrap();
        let report = tr.check_green_identity(25, 1e-13, 9);
        assert!(
            report.pass,
            "anisotropic Green residual {:.3e}",
            report.max_residual
        );
    }

    #[test]
    fn corner_nodes_carry_no_dof() {
        let (nx, ny) = (5usize, 4usize);
        let tr = build(
            nx,
            ny,
            1.0,
            1.0,
            &Coeff::Const(1.0),
            &Coeff::Const(1.0),
            &Coeff::Const(0.0),
        )
        .unwrap();
        assert_eq!(tr.domain_dim(), (nx + 1) * (ny + 1) - 4);
        assert_eq!(tr.boundary_space().dim(), 2 * (nx - 1) + 2 * (ny - 1));
        assert_eq!(tr.interior_space().dim(), (nx - 1) * (ny - 1));
    }

    #[test]
    fn conormal_trace_has_full_rank() {
        let tr = unit_square(4);
        // kernel_basis validates full row rank and the expected kernel
        // dimension as a side effect.
        let k = tr.kernel_basis(KernelChoice::Gamma0).unwrap();
        assert_eq!(k.cols(), tr.interior_space().dim());
    }

    #[test]
    fn dirichlet_ground_state_converges_to_two_pi_squared() {
        let target = 2.0 * std::f64::consts::PI.powi(2);
        let mut errs = Vec::new();
        for n in [8usize, 16] {
            let tr = unit_square(n);
            let ad = Realization::from_restriction(&tr, KernelChoice::Gamma1).unwrap();
            errs.push((ad.eigenvalues()[0] - target).abs());
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(
            order >= 1.8,
            "observed convergence order {order:.2} (errors {errs:?})"
        );
    }

    #[test]
    fn sampled_coefficients_rejected() {
        let err = build(
            4,
            4,
            1.0,
            1.0,
            &Coeff::Samples(vec![1.0; 16]),
            &Coeff::Const(1.0),
            &Coeff::Const(0.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn ellipticity_and_grid_guards() {
        assert!(matches!(
            build(
                2,
                4,
                1.0,
                1.0,
                &Coeff::Const(1.0),
                &Coeff::Const(1.0),
                &Coeff::Const(0.0)
            ),
            Err(Error::DegenerateGrid { .. })
        ));
        assert!(matches!(
            build(
                4,
                4,
                1.0,
                1.0,
                &Coeff::Const(0.0),
                &Coeff::Const(1.0),
                &Coeff::Const(0.0)
            ),
            Err(Error::EllipticityViolated { .. })
        ));
    }
}
