//! Boundary triples for finite-dimensional symmetric operators.
//!
//! A [`QuasiTriple`] packages a discretized elliptic expression together with
//! its two trace maps.  The carrier is a "domain" coordinate space holding
//! interior *and* boundary degrees of freedom:
//!
//! * `t : dom -> H` — the differential expression evaluated at interior nodes,
//! * `p : dom -> H` — restriction to the interior nodes,
//! * `gamma0 : dom -> G` — outward conormal-derivative trace,
//! * `gamma1 : dom -> G` — Dirichlet (boundary-value) trace,
//!
//! where `H` is the weighted interior space and `G` the weighted boundary
//! space.  The defining property is the discrete Green identity
//!
//! ```text
//! (t f, p g)_H - (p f, t g)_H = (gamma1 f, gamma0 g)_G - (gamma0 f, gamma1 g)_G,
//! ```
//!
//! which every shipped model satisfies *exactly* (to rounding), by
//! summation-by-parts construction.  From it flow, verbatim from the abstract
//! theory:
//!
//! * self-adjoint restrictions: `ker gamma0` (Neumann), `ker gamma1`
//!   (Dirichlet), `ker(B gamma1 - gamma0)` (Robin with boundary operator `B`),
//! * the gamma field `lambda -> gamma(lambda)` of boundary-data solution
//!   operators and the Weyl function `M(lambda)` (Neumann-to-Dirichlet map),
//! * Krein-type formulas expressing resolvent differences of two restrictions
//!   through boundary-space data alone.

use crate::error::{Error, Result};
use crate::linalg::{
    c64, hermitian_eig, symmetrize_weighted, weighted_adjoint, CMatrix, Complex64, LuFactors,
    WeightedSpace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Accepted self-adjointness defect (relative) for restricted operators.
pub const SELF_ADJOINT_TOL: f64 = 1e-10;

/// Relative pivot threshold for the stacked boundary-value solve; a smaller
/// pivot means the spectral parameter is (numerically) an eigenvalue.
pub const STACKED_PIVOT_REL: f64 = 1e-12;

/// A finite-dimensional boundary triple: expression, interior projection, and
/// the two trace maps, over weighted interior/boundary spaces.
#[derive(Debug, Clone)]
pub struct QuasiTriple {
    h: WeightedSpace,
    g: WeightedSpace,
    t: CMatrix,
    p: CMatrix,
    gamma0: CMatrix,
    gamma1: CMatrix,
    /// For direct-sum models: the angular mode index carried by each boundary
    /// coordinate (used by synthetic spectral-decay boundary operators).
    boundary_modes: Option<Vec<i64>>,
}

impl QuasiTriple {
    /// Assemble a triple, checking shape consistency: all four maps act on a
    /// common domain of dimension `dim H + dim G`.
    pub fn new(
        h: WeightedSpace,
        g: WeightedSpace,
        t: CMatrix,
        p: CMatrix,
        gamma0: CMatrix,
        gamma1: CMatrix,
    ) -> Result<Self> {
        let dom = h.dim() + g.dim();
        let shapes = [
            ("t", &t, h.dim()),
            ("p", &p, h.dim()),
            ("gamma0", &gamma0, g.dim()),
            ("gamma1", &gamma1, g.dim()),
        ];
        for (name, m, rows) in shapes {
            if m.rows() != rows || m.cols() != dom {
                return Err(Error::DimensionMismatch {
                    op: "QuasiTriple::new",
                    detail: format!(
                        "{name} is {}x{}, expected {rows}x{dom}",
                        m.rows(),
                        m.cols()
                    ),
                });
            }
            if !m.is_finite() {
                return Err(Error::DimensionMismatch {
                    op: "QuasiTriple::new",
                    detail: format!("{name} contains non-finite entries"),
                });
            }
        }
        Ok(QuasiTriple {
            h,
            g,
            t,
            p,
            gamma0,
            gamma1,
            boundary_modes: None,
        })
    }

    /// Attach angular-mode labels to the boundary coordinates.
    pub fn with_boundary_modes(mut self, modes: Vec<i64>) -> Result<Self> {
        if modes.len() != self.g.dim() {
            return Err(Error::DimensionMismatch {
                op: "with_boundary_modes",
                detail: format!("{} labels for {} boundary dofs", modes.len(), self.g.dim()),
            });
        }
        self.boundary_modes = Some(modes);
        Ok(self)
    }

    pub fn interior_space(&self) -> &WeightedSpace {
        &self.h
    }

    pub fn boundary_space(&self) -> &WeightedSpace {
        &self.g
    }

    pub fn domain_dim(&self) -> usize {
        self.h.dim() + self.g.dim()
    }

    pub fn expression(&self) -> &CMatrix {
        &self.t
    }

    pub fn interior_projection(&self) -> &CMatrix {
        &self.p
    }

    pub fn trace_conormal(&self) -> &CMatrix {
        &self.gamma0
    }

    pub fn trace_dirichlet(&self) -> &CMatrix {
        &self.gamma1
    }

    pub fn boundary_modes(&self) -> Option<&[i64]> {
        self.boundary_modes.as_deref()
    }

    /// Scale the Dirichlet trace map (fault injection for validation tooling;
    /// any scale other than 1 breaks the Green identity).
    pub fn scale_dirichlet_trace(&mut self, scale: f64) {
        self.gamma1 = self.gamma1.scale(c64(scale, 0.0));
    }

    /// Randomized check of the abstract Green identity.
    ///
    /// Draws `samples` pairs of complex domain vectors from the seeded
    /// generator and evaluates both sides; the reported residual for each pair
    /// is `|lhs - rhs| / (1 + |f| |g|)` with Euclidean vector norms.
    pub fn check_green_identity(&self, samples: usize, tol: f64, seed: u64) -> GreenReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dom = self.domain_dim();
        let mut max_residual: f64 = 0.0;
        for _ in 0..samples {
            let f = random_vector(&mut rng, dom);
            let g = random_vector(&mut rng, dom);
            let residual = self.green_residual(&f, &g);
            max_residual = max_residual.max(residual);
        }
        GreenReport {
            samples,
            tol,
            max_residual,
            pass: max_residual <= tol,
        }
    }

    /// Green-identity residual for one pair of domain vectors.
    pub fn green_residual(&self, f: &CMatrix, g: &CMatrix) -> f64 {
        let tf = self.t.mul(f).expect("shape checked");
        let tg = self.t.mul(g).expect("shape checked");
        let pf = self.p.mul(f).expect("shape checked");
        let pg = self.p.mul(g).expect("shape checked");
        let g0f = self.gamma0.mul(f).expect("shape checked");
        let g0g = self.gamma0.mul(g).expect("shape checked");
        let g1f = self.gamma1.mul(f).expect("shape checked");
        let g1g = self.gamma1.mul(g).expect("shape checked");
        let lhs = self.h.inner(tf.data(), pg.data()) - self.h.inner(pf.data(), tg.data());
        let rhs = self.g.inner(g1f.data(), g0g.data()) - self.g.inner(g0f.data(), g1g.data());
        let scale = 1.0 + vec_norm(f) * vec_norm(g);
        (lhs - rhs).norm() / scale
    }

    /// Orthonormal basis of the kernel of the selected trace combination.
    pub fn kernel_basis(&self, choice: KernelChoice) -> Result<CMatrix> {
        let trace_map = match choice {
            KernelChoice::Gamma0 => self.gamma0.clone(),
            KernelChoice::Gamma1 => self.gamma1.clone(),
            KernelChoice::Robin(b) => b.matrix().mul(&self.gamma1)?.sub(&self.gamma0)?,
        };
        kernel_of(&trace_map, self.h.dim())
    }

    /// Matrix of the self-adjoint restriction determined by `choice`, acting
    /// on the interior space.
    ///
    /// With `K` a kernel basis of the trace combination, the restriction is
    /// `A = (t K) (p K)^{-1}`; the result is independent of the basis choice
    /// and is weighted-self-adjoint by the Green identity.  A restriction
    /// failing the self-adjointness check at [`SELF_ADJOINT_TOL`] indicates a
    /// broken triple and is reported as an error instead of returned.
    pub fn restrict_to_kernel(&self, choice: KernelChoice) -> Result<CMatrix> {
        let k = self.kernel_basis(choice)?;
        let x = self.p.mul(&k)?;
        let y = self.t.mul(&k)?;
        // A = Y X^{-1}, computed as A^T = X^{-T} Y^T.
        let lu = LuFactors::new(&x.transpose()).map_err(|e| match e {
            Error::Singular { .. } => Error::DegenerateKernel {
                detail: "interior projection of the kernel basis is singular".into(),
            },
            other => other,
        })?;
        let a = lu.solve(&y.transpose())?.transpose();

        // Self-adjointness with respect to the interior weights: W A = (W A)^H.
        let wa = a.row_scaled(self.h.weights())?;
        let defect = wa.sub(&wa.adjoint())?.norm_max();
        let scale = wa.norm_max().max(f64::MIN_POSITIVE);
        if defect > SELF_ADJOINT_TOL * scale {
            return Err(Error::NotSelfAdjoint {
                defect: defect / scale,
                tol: SELF_ADJOINT_TOL,
            });
        }
        Ok(a)
    }

    /// Solve the boundary-value problem `(t - lambda p) f = 0`,
    /// `gamma0 f = phi` for every unit boundary datum; returns the domain
    /// representation (`dom x dim G`) of the solution operator.
    ///
    /// The stacked system `[t - lambda p; gamma0]` is square by construction;
    /// a pivot breakdown means `lambda` is an eigenvalue of the Neumann
    /// restriction.
    pub fn boundary_solution(&self, lambda: Complex64) -> Result<CMatrix> {
        let nh = self.h.dim();
        let ng = self.g.dim();
        let dom = self.domain_dim();
        let mut stacked = CMatrix::zeros(dom, dom);
        for i in 0..nh {
            for j in 0..dom {
                stacked.set(i, j, self.t.get(i, j) - lambda * self.p.get(i, j));
            }
        }
        for i in 0..ng {
            for j in 0..dom {
                stacked.set(nh + i, j, self.gamma0.get(i, j));
            }
        }
        let mut rhs = CMatrix::zeros(dom, ng);
        for i in 0..ng {
            rhs.set(nh + i, i, c64(1.0, 0.0));
        }
        let lu = LuFactors::with_threshold(&stacked, STACKED_PIVOT_REL).map_err(|e| match e {
            Error::Singular { .. } => Error::LambdaInSpectrum {
                lambda: format_lambda(lambda),
            },
            other => other,
        })?;
        lu.solve(&rhs)
    }

    /// Gamma field `gamma(lambda) : G -> H`, interior values of the
    /// boundary-data solutions.
    pub fn gamma(&self, lambda: Complex64) -> Result<CMatrix> {
        Ok(self.p.mul(&self.boundary_solution(lambda)?)?)
    }

    /// Weyl function `M(lambda) : G -> G`, Dirichlet traces of the
    /// boundary-data solutions (the Neumann-to-Dirichlet map).
    pub fn weyl(&self, lambda: Complex64) -> Result<CMatrix> {
        Ok(self.gamma1.mul(&self.boundary_solution(lambda)?)?)
    }

    /// Adjoint gamma field `gamma(conj lambda)^* : H -> G` (weighted adjoint),
    /// the holomorphic companion of [`QuasiTriple::gamma`] appearing in every
    /// Krein formula.
    pub fn gamma_star(&self, lambda: Complex64) -> Result<CMatrix> {
        let g_at_conj = self.gamma(lambda.conj())?;
        weighted_adjoint(&g_at_conj, &self.g, &self.h)
    }

    /// Krein formula for the Neumann/Dirichlet resolvent difference:
    ///
    /// ```text
    /// (A_N - lambda)^{-1} - (A_D - lambda)^{-1}
    ///     = gamma(lambda) M(lambda)^{-1} gamma(conj lambda)^*,
    /// ```
    ///
    /// assembled purely from boundary data (no interior eigensolve).
    pub fn krein_dn(&self, lambda: Complex64) -> Result<CMatrix> {
        let ext = self.boundary_solution(lambda)?;
        let gam = self.p.mul(&ext)?;
        let m = self.gamma1.mul(&ext)?;
        let gstar = self.gamma_star(lambda)?;
        let minv_gstar = LuFactors::new(&m)
            .map_err(|e| match e {
                Error::Singular { .. } => Error::SingularWeyl {
                    lambda: format_lambda(lambda),
                },
                other => other,
            })?
            .solve(&gstar)?;
        Ok(gam.mul(&minv_gstar)?)
    }

    /// Krein formula for the Robin/Neumann resolvent difference:
    ///
    /// ```text
    /// (A_B - lambda)^{-1} - (A_N - lambda)^{-1}
    ///     = gamma (I - B M)^{-1} B gamma^*      (RobinForm::TransformFirst)
    ///     = gamma B (I - M B)^{-1} gamma^*      (RobinForm::OperatorFirst)
    /// ```
    ///
    /// The two forms are algebraically identical; both are exposed so they can
    /// be cross-checked.
    pub fn krein_robin(
        &self,
        b: &RobinParameter,
        lambda: Complex64,
        form: RobinForm,
    ) -> Result<CMatrix> {
        let ext = self.boundary_solution(lambda)?;
        let gam = self.p.mul(&ext)?;
        let m = self.gamma1.mul(&ext)?;
        let gstar = self.gamma_star(lambda)?;
        let ng = self.g.dim();
        let bm = b.matrix();
        let middle = match form {
            RobinForm::TransformFirst => {
                // (I - B M)^{-1} B
                let ibm = CMatrix::identity(ng).sub(&bm.mul(&m)?)?;
                robin_lu(&ibm, lambda)?.solve(&bm.mul(&gstar)?)?
            }
            RobinForm::OperatorFirst => {
                // B (I - M B)^{-1}
                let imb = CMatrix::identity(ng).sub(&m.mul(bm)?)?;
                bm.mul(&robin_lu(&imb, lambda)?.solve(&gstar)?)?
            }
        };
        Ok(gam.mul(&middle)?)
    }
}

fn robin_lu(m: &CMatrix, lambda: Complex64) -> Result<LuFactors> {
    LuFactors::new(m).map_err(|e| match e {
        Error::Singular { .. } => Error::SingularRobinToNeumann {
            lambda: format_lambda(lambda),
        },
        other => other,
    })
}

/// Which trace combination to restrict to.
#[derive(Debug, Clone, Copy)]
pub enum KernelChoice<'a> {
    /// `ker gamma0` — the Neumann restriction.
    Gamma0,
    /// `ker gamma1` — the Dirichlet restriction.
    Gamma1,
    /// `ker (B gamma1 - gamma0)` — the Robin restriction for boundary
    /// operator `B`.
    Robin(&'a RobinParameter),
}

/// How to arrange the Robin Krein formula middle factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RobinForm {
    /// `(I - B M)^{-1} B`.
    TransformFirst,
    /// `B (I - M B)^{-1}`.
    OperatorFirst,
}

/// Result of a randomized Green-identity check.
#[derive(Debug, Clone)]
pub struct GreenReport {
    pub samples: usize,
    pub tol: f64,
    pub max_residual: f64,
    pub pass: bool,
}

/// Boundary operator for Robin-type conditions `B gamma1 f = gamma0 f`.
///
/// Must be self-adjoint with respect to the weighted boundary inner product;
/// `declared_s` optionally records a weak Schatten exponent claimed for the
/// operator (or for a difference of two such operators), which feeds the decay
/// predictions.
#[derive(Debug, Clone)]
pub struct RobinParameter {
    b: CMatrix,
    declared_s: Option<f64>,
}

impl RobinParameter {
    /// Accepted self-adjointness defect (relative) for boundary operators.
    pub const SELF_ADJOINT_TOL: f64 = 1e-12;

    pub fn new(b: CMatrix, g: &WeightedSpace, declared_s: Option<f64>) -> Result<Self> {
        if !b.is_square() || b.rows() != g.dim() {
            return Err(Error::DimensionMismatch {
                op: "RobinParameter::new",
                detail: format!(
                    "operator is {}x{} on a boundary space of dim {}",
                    b.rows(),
                    b.cols(),
                    g.dim()
                ),
            });
        }
        if let Some(s) = declared_s {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::Config(format!(
                    "declared weak-Schatten exponent must be positive, got {s}"
                )));
            }
        }
        let wb = b.row_scaled(g.weights())?;
        let defect = wb.sub(&wb.adjoint())?.norm_max();
        let scale = wb.norm_max().max(f64::MIN_POSITIVE);
        if defect > Self::SELF_ADJOINT_TOL * scale {
            return Err(Error::NotSelfAdjoint {
                defect: defect / scale,
                tol: Self::SELF_ADJOINT_TOL,
            });
        }
        Ok(RobinParameter { b, declared_s })
    }

    /// The zero boundary operator (Robin degenerates to Neumann).
    pub fn zero(g: &WeightedSpace) -> Self {
        RobinParameter {
            b: CMatrix::zeros(g.dim(), g.dim()),
            declared_s: None,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.b
    }

    pub fn declared_s(&self) -> Option<f64> {
        self.declared_s
    }
}

/// A self-adjoint restriction together with its spectral decomposition.
///
/// The eigendecomposition is computed once and then drives all resolvent
/// powers and resolvent traces by scalar calculus on the eigenvalues — this is
/// the "direct" side against which the boundary-space formulas are verified.
#[derive(Debug, Clone)]
pub struct Realization {
    matrix: CMatrix,
    evals: Vec<f64>,
    /// Columns are eigenvectors; `matrix = modal diag(evals) modal_inv`.
    modal: CMatrix,
    modal_inv: CMatrix,
}

impl Realization {
    /// Relative distance below which a spectral parameter is treated as lying
    /// on the spectrum.
    pub const SPECTRUM_MARGIN_REL: f64 = 1e-12;

    /// Wrap a weighted-self-adjoint matrix on the given space.
    pub fn new(matrix: CMatrix, space: &WeightedSpace) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != space.dim() {
            return Err(Error::DimensionMismatch {
                op: "Realization::new",
                detail: format!(
                    "matrix is {}x{} on a space of dim {}",
                    matrix.rows(),
                    matrix.cols(),
                    space.dim()
                ),
            });
        }
        let wa = matrix.row_scaled(space.weights())?;
        let defect = wa.sub(&wa.adjoint())?.norm_max();
        let scale = wa.norm_max().max(f64::MIN_POSITIVE);
        if defect > SELF_ADJOINT_TOL * scale {
            return Err(Error::NotSelfAdjoint {
                defect: defect / scale,
                tol: SELF_ADJOINT_TOL,
            });
        }
        // Similarity-transform to a plain Hermitian matrix, diagonalize, and
        // transform the eigenbasis back.
        let sym = symmetrize_weighted(&matrix, space)?;
        let (evals, q) = hermitian_eig(&sym, 1e-6)?;
        let modal = q.row_scaled(&space.inv_sqrt_weights())?;
        let modal_inv = q.adjoint().col_scaled(space.sqrt_weights())?;
        Ok(Realization {
            matrix,
            evals,
            modal,
            modal_inv,
        })
    }

    /// Build directly from a trace-kernel restriction of a triple.
    pub fn from_restriction(tr: &QuasiTriple, choice: KernelChoice) -> Result<Self> {
        Realization::new(tr.restrict_to_kernel(choice)?, tr.interior_space())
    }

    pub fn dim(&self) -> usize {
        self.evals.len()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.evals
    }

    /// Distance from `lambda` to the spectrum.
    pub fn distance_to_spectrum(&self, lambda: Complex64) -> f64 {
        self.evals
            .iter()
            .map(|&mu| (c64(mu, 0.0) - lambda).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn check_resolvent_point(&self, lambda: Complex64) -> Result<()> {
        let scale = self
            .evals
            .iter()
            .fold(1.0_f64, |acc, &mu| acc.max(mu.abs()));
        if self.distance_to_spectrum(lambda) <= Self::SPECTRUM_MARGIN_REL * scale {
            return Err(Error::LambdaInSpectrum {
                lambda: format_lambda(lambda),
            });
        }
        Ok(())
    }

    /// `(A - lambda)^{-m}` by spectral calculus.
    pub fn resolvent_power(&self, lambda: Complex64, m: usize) -> Result<CMatrix> {
        self.check_resolvent_point(lambda)?;
        let d: Vec<Complex64> = self
            .evals
            .iter()
            .map(|&mu| (c64(mu, 0.0) - lambda).powi(-(m as i32)))
            .collect();
        Ok(self.modal.col_scaled_complex(&d)?.mul(&self.modal_inv)?)
    }

    /// `trace((A - lambda)^{-m})` as a scalar eigenvalue sum (no matrices).
    pub fn resolvent_trace(&self, lambda: Complex64, m: usize) -> Result<Complex64> {
        self.check_resolvent_point(lambda)?;
        let mut acc = c64(0.0, 0.0);
        for &mu in &self.evals {
            acc += (c64(mu, 0.0) - lambda).powi(-(m as i32));
        }
        Ok(acc)
    }
}

/// Orthonormal basis of `ker g` for a wide full-row-rank matrix, via
/// Gauss-Jordan elimination with full pivoting followed by modified
/// Gram-Schmidt.
fn kernel_of(g: &CMatrix, expected_dim: usize) -> Result<CMatrix> {
    let rows = g.rows();
    let dom = g.cols();
    let mut m = g.clone();
    let scale = m.norm_max().max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    let mut pivot_cols: Vec<usize> = Vec::with_capacity(rows);
    let mut is_pivot = vec![false; dom];

    for r in 0..rows {
        // Full pivoting over the remaining rows and non-pivot columns.
        let mut best = (r, 0usize, -1.0_f64);
        for i in r..rows {
            for j in 0..dom {
                if is_pivot[j] {
                    continue;
                }
                let mag = m.get(i, j).norm();
                if mag > best.2 {
                    best = (i, j, mag);
                }
            }
        }
        let (bi, bj, bm) = best;
        if bm <= tol {
            return Err(Error::DegenerateKernel {
                detail: format!("trace map has row rank {r}, expected {rows}"),
            });
        }
        if bi != r {
            for j in 0..dom {
                let tmp = m.get(r, j);
                m.set(r, j, m.get(bi, j));
                m.set(bi, j, tmp);
            }
        }
        let pivot = m.get(r, bj);
        for j in 0..dom {
            m.set(r, j, m.get(r, j) / pivot);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, bj);
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in 0..dom {
                let v = m.get(i, j) - factor * m.get(r, j);
                m.set(i, j, v);
            }
        }
        pivot_cols.push(bj);
        is_pivot[bj] = true;
    }

    let free: Vec<usize> = (0..dom).filter(|&j| !is_pivot[j]).collect();
    if free.len() != expected_dim {
        return Err(Error::DegenerateKernel {
            detail: format!("kernel dimension {} != expected {}", free.len(), expected_dim),
        });
    }
    let mut k = CMatrix::zeros(dom, free.len());
    for (c, &fcol) in free.iter().enumerate() {
        k.set(fcol, c, c64(1.0, 0.0));
        for (r, &pcol) in pivot_cols.iter().enumerate() {
            k.set(pcol, c, -m.get(r, fcol));
        }
    }
    gram_schmidt(&mut k)?;
    Ok(k)
}

/// In-place modified Gram-Schmidt on the columns (plain Euclidean metric; any
/// basis of the kernel yields the same restriction, orthonormality is for
/// conditioning only).
fn gram_schmidt(k: &mut CMatrix) -> Result<()> {
    let rows = k.rows();
    let cols = k.cols();
    for j in 0..cols {
        for prev in 0..j {
            let mut proj = c64(0.0, 0.0);
            for i in 0..rows {
                proj += k.get(i, j) * k.get(i, prev).conj();
            }
            for i in 0..rows {
                let v = k.get(i, j) - proj * k.get(i, prev);
                k.set(i, j, v);
            }
        }
        let norm: f64 = (0..rows)
            .map(|i| k.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm <= 1e-300 {
            return Err(Error::DegenerateKernel {
                detail: "kernel basis collapsed during orthonormalization".into(),
            });
        }
        for i in 0..rows {
            let v = k.get(i, j) / norm;
            k.set(i, j, v);
        }
    }
    Ok(())
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, 1, |_, _| {
        c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn vec_norm(v: &CMatrix) -> f64 {
    v.norm_fro()
}

pub(crate) fn format_lambda(lambda: Complex64) -> String {
    format!("{}{:+}i", lambda.re, lambda.im)
}
