//! Spectral analysis of extension pairs.
//!
//! Everything here compares two self-adjoint realizations of the same
//! expression: the brute-force side works with eigendecompositions of the
//! restricted interior matrices, the boundary side with the Weyl function and
//! its derivatives.  The two views are connected by exact finite-dimensional
//! identities:
//!
//! * trace identities
//!   `tr((A_L - l)^{-m} - (A_R - l)^{-m}) = tr(d^{m-1}[C(l) M'(l)]) / (m-1)!`
//!   with a pair-specific boundary composite `C`;
//! * the factored form of the resolvent power difference
//!   `(A_L - l)^{-m} - (A_R - l)^{-m} = d^{m-1}[gamma K gamma^*] / (m-1)!`
//!   whose weighted singular values quantify the perturbation's weak-Schatten
//!   class.
//!
//! Decay ladders re-run the factored computation across grid refinements and
//! fit the tail exponent of the singular values, comparing it against the
//! dimension-counting prediction.

use std::fmt;

use num_complex::Complex64;

use crate::calculus::{EvalContext, OperatorExpr, MAX_DERIVATIVE_ORDER};
use crate::error::{Error, Result};
use crate::linalg::{
    c64, svd_values, symmetrize_weighted, trace, weak_schatten_quasinorm, CMatrix,
};
use crate::models::{
    dense_boundary_op, disk, BoundaryOpSpec, Coeff, ModelConfig, ModelInstance, RadialMode,
};
use crate::triple::{KernelChoice, QuasiTriple, Realization};

/// Singular values at or below this floor are treated as numerical zeros and
/// excluded from decay fits.
pub const DECAY_FLOOR: f64 = 1e-13;

/// Minimum number of usable singular values for a decay fit.
pub const MIN_FIT_VALUES: usize = 8;

/// Default tail-window fraction for decay fits: fit over ranks
/// `[K/8, K/2]` out of `K` usable values.
pub const DEFAULT_FIT_WINDOW: f64 = 0.5;

/// Slack allowed when checking that the fit error is non-increasing across a
/// refinement ladder (absorbs floating-point noise between near-equal errors).
pub const DECAY_MONOTONE_SLACK: f64 = 1e-9;

/// The four extension pairs whose resolvent differences are analyzed.
///
/// The code strings follow the usual shorthand: the first letter names the
/// left realization, the second the right one, of the difference
/// `(A_left - l)^{-m} - (A_right - l)^{-m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairKind {
    /// Neumann minus Dirichlet.
    NeumannDirichlet,
    /// Robin minus Neumann.
    RobinNeumann,
    /// Robin minus Robin.
    RobinRobin,
    /// Robin minus Dirichlet.
    RobinDirichlet,
}

impl PairKind {
    pub fn code(self) -> &'static str {
        match self {
            PairKind::NeumannDirichlet => "DN",
            PairKind::RobinNeumann => "RN",
            PairKind::RobinRobin => "RR",
            PairKind::RobinDirichlet => "RD",
        }
    }

    pub fn all() -> [PairKind; 4] {
        [
            PairKind::NeumannDirichlet,
            PairKind::RobinNeumann,
            PairKind::RobinRobin,
            PairKind::RobinDirichlet,
        ]
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// An extension pair together with the boundary operators that define it.
///
/// Conventions: all differences are `left - right` in the order of the
/// variant name, e.g. [`ExtensionPair::RobinNeumann`] compares
/// `(A_B - l)^{-m} - (A_N - l)^{-m}`.
#[derive(Debug, Clone)]
pub enum ExtensionPair {
    NeumannDirichlet,
    RobinNeumann {
        b: BoundaryOpSpec,
    },
    RobinRobin {
        b1: BoundaryOpSpec,
        b2: BoundaryOpSpec,
    },
    RobinDirichlet {
        b: BoundaryOpSpec,
    },
}

impl ExtensionPair {
    pub fn kind(&self) -> PairKind {
        match self {
            ExtensionPair::NeumannDirichlet => PairKind::NeumannDirichlet,
            ExtensionPair::RobinNeumann { .. } => PairKind::RobinNeumann,
            ExtensionPair::RobinRobin { .. } => PairKind::RobinRobin,
            ExtensionPair::RobinDirichlet { .. } => PairKind::RobinDirichlet,
        }
    }

    /// Weak-Schatten exponent declared for the boundary perturbation.
    ///
    /// For a two-operator pair this is read as a declaration about the
    /// difference `B1 - B2` (the first operator's declaration wins when both
    /// are present).
    pub fn declared_s(&self) -> Option<f64> {
        match self {
            ExtensionPair::NeumannDirichlet => None,
            ExtensionPair::RobinNeumann { b } | ExtensionPair::RobinDirichlet { b } => {
                b.effective_declared_s()
            }
            ExtensionPair::RobinRobin { b1, b2 } => b1
                .effective_declared_s()
                .or(b2.effective_declared_s()),
        }
    }

    /// Decay-improvement index `t = (n-1)/s` earned by a declared
    /// weak-Schatten class of the boundary perturbation; zero when nothing is
    /// declared, and zero for the pairs whose prediction does not involve the
    /// boundary operator (Neumann/Dirichlet and Robin/Dirichlet).
    pub fn improvement_t(&self, spatial_dimension: usize) -> f64 {
        match self.kind() {
            PairKind::RobinNeumann | PairKind::RobinRobin => self
                .declared_s()
                .map(|s| (spatial_dimension.saturating_sub(1)) as f64 / s)
                .unwrap_or(0.0),
            PairKind::NeumannDirichlet | PairKind::RobinDirichlet => 0.0,
        }
    }

    /// Predicted decay exponent `alpha` with `s_k = O(k^{-alpha})`:
    /// `2m/(n-1)` for the pairs containing a Dirichlet side, and
    /// `(2m + 1 + t)/(n-1)` for Robin/Neumann and Robin/Robin.
    ///
    /// `None` for one-dimensional models, whose boundary space is too small
    /// to carry an asymptotic law.
    pub fn predicted_exponent(&self, spatial_dimension: usize, m: usize) -> Option<f64> {
        if spatial_dimension < 2 {
            return None;
        }
        let nm1 = (spatial_dimension - 1) as f64;
        Some(match self.kind() {
            PairKind::NeumannDirichlet | PairKind::RobinDirichlet => 2.0 * m as f64 / nm1,
            PairKind::RobinNeumann | PairKind::RobinRobin => {
                (2.0 * m as f64 + 1.0 + self.improvement_t(spatial_dimension)) / nm1
            }
        })
    }
}

/// One verified trace identity.
#[derive(Debug, Clone)]
pub struct TraceReport {
    pub pair: PairKind,
    pub m: usize,
    pub lambda: Complex64,
    /// Eigenvalue-sum side: `tr((A_left - l)^{-m} - (A_right - l)^{-m})`.
    pub lhs: Complex64,
    /// Boundary side: `tr(d^{m-1}[C(l) M'(l)]) / (m-1)!`.
    pub rhs: Complex64,
    pub abs_discrepancy: f64,
    /// `abs_discrepancy / (1 + |lhs|)`.
    pub rel_discrepancy: f64,
    /// Known continuum limit of the lhs, where one exists for the model.
    pub continuum_reference: Option<Complex64>,
}

impl TraceReport {
    /// Assemble a report from the two independently computed sides.
    pub fn from_sides(
        pair: PairKind,
        m: usize,
        lambda: Complex64,
        lhs: Complex64,
        rhs: Complex64,
        continuum_reference: Option<Complex64>,
    ) -> Self {
        let abs = (lhs - rhs).norm();
        TraceReport {
            pair,
            m,
            lambda,
            lhs,
            rhs,
            abs_discrepancy: abs,
            rel_discrepancy: abs / (1.0 + lhs.norm()),
            continuum_reference,
        }
    }

    pub fn passes(&self, rel_tol: f64) -> bool {
        self.rel_discrepancy <= rel_tol
    }
}

/// One refinement level of a decay ladder.
#[derive(Debug, Clone)]
pub struct DecayLevel {
    /// Model description at this resolution.
    pub resolution: String,
    /// Weighted singular values of the resolvent power difference,
    /// non-increasing.
    pub s_values: Vec<f64>,
    /// Fitted tail exponent (`None` when the model cannot carry a fit).
    pub fitted_exponent: Option<f64>,
    /// Coefficient of determination of the log-log fit.
    pub r_squared: Option<f64>,
    /// Weak-Schatten quasinorm `sup_k k^alpha s_k` at the predicted exponent.
    pub quasinorm: Option<f64>,
}

/// Singular-value decay of a resolvent power difference across a ladder of
/// grid refinements.
#[derive(Debug, Clone)]
pub struct DecayReport {
    pub pair: PairKind,
    pub m: usize,
    pub lambda: Complex64,
    pub spatial_dimension: usize,
    /// Improvement index earned by a declared boundary-operator class.
    pub improvement_t: f64,
    pub predicted_exponent: Option<f64>,
    /// `false` for one-dimensional models: their two-point boundary cannot
    /// carry an asymptotic decay law, so no exponent is fitted.
    pub applicable: bool,
    pub levels: Vec<DecayLevel>,
}

impl DecayReport {
    /// Fit error `|fitted - predicted|` at each level, in ladder order; a
    /// level without a fit yields `None`.
    pub fn fit_errors(&self) -> Vec<Option<f64>> {
        let predicted = self.predicted_exponent;
        self.levels
            .iter()
            .map(|lv| match (lv.fitted_exponent, predicted) {
                (Some(f), Some(p)) => Some((f - p).abs()),
                _ => None,
            })
            .collect()
    }

    /// The monotone-approach criterion: a prediction exists, every level is
    /// fitted, and the fit error never grows (up to `slack`) as the ladder
    /// refines.
    pub fn monotone_approach(&self, slack: f64) -> bool {
        if !self.applicable {
            return false;
        }
        let errors = self.fit_errors();
        if errors.iter().any(|e| e.is_none()) || errors.is_empty() {
            return false;
        }
        errors
            .windows(2)
            .all(|w| w[1].unwrap() <= w[0].unwrap() + slack)
    }
}

fn order_guard(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Config(
            "resolvent power m must be at least 1".into(),
        ));
    }
    if m - 1 > MAX_DERIVATIVE_ORDER {
        return Err(Error::DepthExceeded {
            order: m - 1,
            max: MAX_DERIVATIVE_ORDER,
        });
    }
    Ok(())
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `(I - M(l) B)^{-1}` as an expression (the mirror image of
/// [`OperatorExpr::composite_t`]).
fn inv_i_minus_mb(b: &CMatrix) -> OperatorExpr {
    let n = b.rows();
    OperatorExpr::Inverse(Box::new(OperatorExpr::Sum(vec![
        (
            c64(1.0, 0.0),
            OperatorExpr::Const(CMatrix::identity(n)),
        ),
        (
            c64(-1.0, 0.0),
            OperatorExpr::Product(vec![
                OperatorExpr::Weyl,
                OperatorExpr::Const(b.clone()),
            ]),
        ),
    ])))
}

/// Both realizations of one extension pair over a single dense triple, with
/// the boundary-side expression of its trace identity.
///
/// Building a session costs the eigendecompositions of the restricted
/// matrices; afterwards traces, resolvent powers, and checks at any `(m, l)`
/// are cheap.
pub struct DensePairSession<'a> {
    tr: &'a QuasiTriple,
    kind: PairKind,
    /// Neumann realization: the distinguished restriction whose resolvent
    /// drives all closed derivative forms.
    reference: Realization,
    left: Realization,
    right: Realization,
    /// Pair composite times `M'`; its `(m-1)`-th derivative traces the
    /// `m`-th power difference.
    rhs_expr: OperatorExpr,
}

impl<'a> DensePairSession<'a> {
    pub fn new(tr: &'a QuasiTriple, pair: &ExtensionPair) -> Result<Self> {
        let reference = Realization::from_restriction(tr, KernelChoice::Gamma0)?;
        let dirichlet = || Realization::from_restriction(tr, KernelChoice::Gamma1);
        let robin = |spec: &BoundaryOpSpec| -> Result<(Realization, CMatrix)> {
            let rb = dense_boundary_op(spec, tr)?;
            let real = Realization::from_restriction(tr, KernelChoice::Robin(&rb))?;
            Ok((real, rb.matrix().clone()))
        };
        let (left, right, rhs_expr) = match pair {
            ExtensionPair::NeumannDirichlet => (
                reference.clone(),
                dirichlet()?,
                OperatorExpr::Product(vec![
                    OperatorExpr::Inverse(Box::new(OperatorExpr::Weyl)),
                    OperatorExpr::WeylDeriv(1),
                ]),
            ),
            ExtensionPair::RobinNeumann { b } => {
                let (real, bm) = robin(b)?;
                let expr = OperatorExpr::Product(vec![
                    OperatorExpr::composite_u(&bm),
                    OperatorExpr::WeylDeriv(1),
                ]);
                (real, reference.clone(), expr)
            }
            ExtensionPair::RobinRobin { b1, b2 } => {
                let (r1, bm1) = robin(b1)?;
                let (r2, bm2) = robin(b2)?;
                let expr = OperatorExpr::Product(vec![
                    OperatorExpr::composite_t(&bm1),
                    OperatorExpr::Const(bm1.sub(&bm2)?),
                    inv_i_minus_mb(&bm2),
                    OperatorExpr::WeylDeriv(1),
                ]);
                (r1, r2, expr)
            }
            ExtensionPair::RobinDirichlet { b } => {
                let (real, bm) = robin(b)?;
                let expr = OperatorExpr::Product(vec![
                    OperatorExpr::composite_v(&bm),
                    OperatorExpr::WeylDeriv(1),
                ]);
                (real, dirichlet()?, expr)
            }
        };
        Ok(DensePairSession {
            tr,
            kind: pair.kind(),
            reference,
            left,
            right,
            rhs_expr,
        })
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn left(&self) -> &Realization {
        &self.left
    }

    pub fn right(&self) -> &Realization {
        &self.right
    }

    pub fn reference(&self) -> &Realization {
        &self.reference
    }

    /// `(A_left - l)^{-m} - (A_right - l)^{-m}` on the interior space, by
    /// spectral calculus on the two restrictions.
    pub fn power_diff(&self, m: usize, lambda: Complex64) -> Result<CMatrix> {
        order_guard(m)?;
        self.left
            .resolvent_power(lambda, m)?
            .sub(&self.right.resolvent_power(lambda, m)?)
    }

    /// Weighted singular values of the power difference, non-increasing.
    pub fn s_values(&self, m: usize, lambda: Complex64) -> Result<Vec<f64>> {
        let diff = self.power_diff(m, lambda)?;
        svd_values(&symmetrize_weighted(&diff, self.tr.interior_space())?)
    }

    /// Eigenvalue-sum side of the trace identity.
    pub fn lhs_trace(&self, m: usize, lambda: Complex64) -> Result<Complex64> {
        order_guard(m)?;
        Ok(self.left.resolvent_trace(lambda, m)? - self.right.resolvent_trace(lambda, m)?)
    }

    /// Boundary side of the trace identity:
    /// `tr(d^{m-1}[C(l) M'(l)]) / (m-1)!`.
    pub fn rhs_trace(&self, m: usize, lambda: Complex64) -> Result<Complex64> {
        order_guard(m)?;
        let ctx = EvalContext::full(self.tr, &self.reference);
        let d = ctx.derivative(&self.rhs_expr, m - 1, lambda)?;
        Ok(trace(&d)? / factorial(m - 1))
    }

    pub fn check(
        &self,
        m: usize,
        lambda: Complex64,
        continuum_reference: Option<Complex64>,
    ) -> Result<TraceReport> {
        let lhs = self.lhs_trace(m, lambda)?;
        let rhs = self.rhs_trace(m, lambda)?;
        Ok(TraceReport::from_sides(
            self.kind,
            m,
            lambda,
            lhs,
            rhs,
            continuum_reference,
        ))
    }
}

/// A pair session over a whole model instance: one dense session for the
/// interval and rectangle, one per angular mode for the disk (trace sides add
/// across blocks).
pub struct InstanceSession<'a> {
    kind: PairKind,
    sessions: Vec<DensePairSession<'a>>,
}

impl<'a> InstanceSession<'a> {
    pub fn new(instance: &'a ModelInstance, pair: &ExtensionPair) -> Result<Self> {
        let sessions = match instance {
            ModelInstance::Dense(tr) => vec![DensePairSession::new(tr, pair)?],
            ModelInstance::Modes(blocks) => blocks
                .iter()
                .map(|b| DensePairSession::new(&b.triple, pair))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(InstanceSession {
            kind: pair.kind(),
            sessions,
        })
    }

    pub fn sessions(&self) -> &[DensePairSession<'a>] {
        &self.sessions
    }

    /// Verify the trace identity, summing both sides over blocks.
    pub fn trace_check(
        &self,
        m: usize,
        lambda: Complex64,
        continuum_reference: Option<Complex64>,
    ) -> Result<TraceReport> {
        let mut lhs = c64(0.0, 0.0);
        let mut rhs = c64(0.0, 0.0);
        for session in &self.sessions {
            lhs += session.lhs_trace(m, lambda)?;
            rhs += session.rhs_trace(m, lambda)?;
        }
        Ok(TraceReport::from_sides(
            self.kind,
            m,
            lambda,
            lhs,
            rhs,
            continuum_reference,
        ))
    }

    /// Weighted singular values of the instance-wide power difference
    /// (block-merged and re-sorted for mode models).
    pub fn s_values(&self, m: usize, lambda: Complex64) -> Result<Vec<f64>> {
        let mut all = Vec::new();
        for session in &self.sessions {
            all.extend(session.s_values(m, lambda)?);
        }
        all.sort_by(|a, b| b.total_cmp(a));
        Ok(all)
    }
}

/// Resolvent power difference of an extension pair over one dense triple.
pub fn resolvent_power_diff(
    tr: &QuasiTriple,
    pair: &ExtensionPair,
    m: usize,
    lambda: Complex64,
) -> Result<CMatrix> {
    DensePairSession::new(tr, pair)?.power_diff(m, lambda)
}

/// One-shot trace-identity check over one dense triple.
pub fn trace_formula_check(
    tr: &QuasiTriple,
    pair: &ExtensionPair,
    m: usize,
    lambda: Complex64,
) -> Result<TraceReport> {
    DensePairSession::new(tr, pair)?.check(m, lambda, None)
}

/// Known continuum limit of the trace-identity lhs, where the model admits
/// one in closed form.
///
/// For the interval with constant coefficients the Neumann and Dirichlet
/// spectra agree except for one extra Neumann eigenvalue at the potential
/// value `a0`, so the Neumann/Dirichlet trace difference converges to
/// `(a0 - l)^{-m}` independent of the diffusion coefficient and the length.
pub fn continuum_trace_reference(
    cfg: &ModelConfig,
    pair: &ExtensionPair,
    m: usize,
    lambda: Complex64,
) -> Option<Complex64> {
    match (cfg, pair) {
        (
            ModelConfig::Sl1d {
                a: Coeff::Const(_),
                a0: Coeff::Const(c),
                ..
            },
            ExtensionPair::NeumannDirichlet,
        ) if m >= 1 => Some((c64(*c, 0.0) - lambda).powi(-(m as i32))),
        _ => None,
    }
}

/// Least-squares fit of the tail exponent of a non-increasing singular-value
/// sequence: returns `(alpha, r_squared)` for `s_k ~ C k^{-alpha}`.
///
/// `window` is the tail fraction used for the fit: with `K` values above
/// [`DECAY_FLOOR`], the fit runs over 1-based ranks
/// `k in [window*K/4, window*K]` (equal log-weight below and above the
/// geometric center of the window), so the default `window = 0.5` fits ranks
/// `[K/8, K/2]`.  The top ranks are always excluded: they carry the
/// non-asymptotic leading modes.
pub fn fit_decay_exponent(s: &[f64], window: f64) -> Result<(f64, f64)> {
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::Config(format!(
            "decay fit window must lie in (0, 1], got {window}"
        )));
    }
    let count = s
        .iter()
        .take_while(|&&v| v.is_finite() && v > DECAY_FLOOR)
        .count();
    if count < MIN_FIT_VALUES {
        return Err(Error::TooFewValues {
            have: count,
            need: MIN_FIT_VALUES,
        });
    }
    let hi = ((count as f64 * window).floor() as usize).clamp(2, count);
    let lo = ((count as f64 * window / 4.0).floor() as usize).clamp(1, hi - 1);
    let mut xs = Vec::with_capacity(hi - lo + 1);
    let mut ys = Vec::with_capacity(hi - lo + 1);
    for k in lo..=hi {
        xs.push((k as f64).ln());
        ys.push(s[k - 1].ln());
    }
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - xbar) * (x - xbar);
        sxy += (x - xbar) * (y - ybar);
        syy += (y - ybar) * (y - ybar);
    }
    let slope = sxy / sxx;
    let r2 = if syy <= f64::MIN_POSITIVE {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok((-slope, r2))
}

/// One refinement step of a model configuration.
///
/// The interval and rectangle double their cell counts per direction; the
/// disk doubles the angular modes and quadruples the radial cells, so the
/// radial discretization bias shrinks at least as fast as the mode window
/// grows.
pub fn refine_config(cfg: &ModelConfig) -> Result<ModelConfig> {
    match cfg {
        ModelConfig::Sl1d { n, length, a, a0 } => {
            if matches!(a, Coeff::Samples(_)) || matches!(a0, Coeff::Samples(_)) {
                return Err(Error::Config(
                    "ladder refinement requires constant coefficients (sampled \
                     coefficients cannot be re-sampled on a finer grid)"
                        .into(),
                ));
            }
            Ok(ModelConfig::Sl1d {
                n: n * 2,
                length: *length,
                a: a.clone(),
                a0: a0.clone(),
            })
        }
        ModelConfig::Rect2d {
            nx,
            ny,
            lx,
            ly,
            a11,
            a22,
            a0,
        } => Ok(ModelConfig::Rect2d {
            nx: nx * 2,
            ny: ny * 2,
            lx: *lx,
            ly: *ly,
            a11: a11.clone(),
            a22: a22.clone(),
            a0: a0.clone(),
        }),
        ModelConfig::DiskModes {
            n_r,
            mode_max,
            radius,
        } => Ok(ModelConfig::DiskModes {
            n_r: n_r * 4,
            mode_max: mode_max * 2,
            radius: *radius,
        }),
    }
}

/// Weighted singular values of the pair's resolvent power difference at one
/// resolution, non-increasing.
///
/// Mode-resolved models take a factored route that never assembles interior
/// matrices: per mode, the difference is `d^{m-1}[gamma K(M) gamma^*]/(m-1)!`
/// where every derivative is a closed form in resolvent applications of the
/// tridiagonal radial system, and the singular values come from a small
/// `m x m` core after orthogonalizing the column and row families.
pub fn level_s_values(
    cfg: &ModelConfig,
    pair: &ExtensionPair,
    m: usize,
    lambda: Complex64,
) -> Result<Vec<f64>> {
    order_guard(m)?;
    match cfg {
        ModelConfig::DiskModes {
            n_r,
            mode_max,
            radius,
        } => {
            let modes = disk::radial_modes(*n_r, *mode_max, *radius)?;
            let mut all = Vec::new();
            for mode in &modes {
                all.extend(mode_s_values(mode, pair, m, lambda)?);
            }
            all.sort_by(|a, b| b.total_cmp(a));
            Ok(all)
        }
        _ => {
            let instance = cfg.build()?;
            InstanceSession::new(&instance, pair)?.s_values(m, lambda)
        }
    }
}

/// Pair middle factor `K(M)` of the factored resolvent difference
/// `gamma K(M) gamma^*`, as a scalar expression for one angular mode.
fn mode_middle_expr(pair: &ExtensionPair, ell: i64) -> Result<OperatorExpr> {
    let scalar = |spec: &BoundaryOpSpec| -> Result<CMatrix> {
        let v = spec.variant.per_mode_value(ell)?;
        CMatrix::from_real_rows(&[vec![v]])
    };
    Ok(match pair {
        ExtensionPair::NeumannDirichlet => {
            OperatorExpr::Inverse(Box::new(OperatorExpr::Weyl))
        }
        ExtensionPair::RobinNeumann { b } => OperatorExpr::composite_u(&scalar(b)?),
        ExtensionPair::RobinRobin { b1, b2 } => OperatorExpr::Sum(vec![
            (c64(1.0, 0.0), OperatorExpr::composite_u(&scalar(b1)?)),
            (c64(-1.0, 0.0), OperatorExpr::composite_u(&scalar(b2)?)),
        ]),
        ExtensionPair::RobinDirichlet { b } => OperatorExpr::Sum(vec![
            (c64(1.0, 0.0), OperatorExpr::composite_u(&scalar(b)?)),
            (
                c64(1.0, 0.0),
                OperatorExpr::Inverse(Box::new(OperatorExpr::Weyl)),
            ),
        ]),
    })
}

/// Upper-triangular factor of a thin QR of the given columns (modified
/// Gram-Schmidt).  Numerically dependent columns produce (near-)zero rows,
/// which is harmless for the singular-value use downstream.
fn thin_qr_r(cols: &[Vec<Complex64>]) -> CMatrix {
    let r_dim = cols.len();
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(r_dim);
    let mut r = CMatrix::zeros(r_dim, r_dim);
    for (j, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        for (i, qi) in q.iter().enumerate() {
            let rij: Complex64 = qi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            r.set(i, j, rij);
            for (vk, qk) in v.iter_mut().zip(qi) {
                *vk -= rij * qk;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        r.set(j, j, c64(norm, 0.0));
        if norm > f64::MIN_POSITIVE {
            for vk in v.iter_mut() {
                *vk /= norm;
            }
        } else {
            for vk in v.iter_mut() {
                *vk = c64(0.0, 0.0);
            }
        }
        q.push(v);
    }
    r
}

/// Weighted singular values of the `m`-th resolvent power difference for one
/// angular mode, via the factored form.
///
/// With `k = m - 1` and `R` the Neumann resolvent, the difference is
/// `sum_{a+b+c=k} (K^{(b)}/b!) (R^a gamma)(gamma^* R^c)`, so it factors as
/// `U kappa V` over the `k+1` column vectors `R^a gamma` and row vectors
/// `gamma^* R^c`; all of them are single tridiagonal solves.  The rows come
/// from solves at `conj(l)`: `gamma^* R^c` is the weighted adjoint of
/// `R(conj l)^c gamma(conj l)`.
fn mode_s_values(
    mode: &RadialMode,
    pair: &ExtensionPair,
    m: usize,
    lambda: Complex64,
) -> Result<Vec<f64>> {
    let k = m - 1;
    let factor = mode.factor(lambda)?;

    // Column family u_a = R^a gamma(l).
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(k + 1);
    cols.push(factor.gamma()?);
    for a in 1..=k {
        let next = factor.apply_resolvent(&cols[a - 1])?;
        cols.push(next);
    }

    // Row family generators x_c = R(conj l)^c gamma(conj l); for real l these
    // coincide with the columns.
    let xs: Vec<Vec<Complex64>> = if lambda.im == 0.0 {
        cols.clone()
    } else {
        let conj_factor = mode.factor(lambda.conj())?;
        let mut v: Vec<Vec<Complex64>> = Vec::with_capacity(k + 1);
        v.push(conj_factor.gamma()?);
        for c in 1..=k {
            let next = conj_factor.apply_resolvent(&v[c - 1])?;
            v.push(next);
        }
        v
    };

    let wi = mode.interior_weights();
    let wb = mode.boundary_weight();

    // Weyl derivatives for the middle factor: M from the factored solve,
    // M^{(j)} = j! gamma^* R^{j-1} gamma = j! <u_{j-1}, x_0>_weighted / w_b.
    let mut weyl_derivs = Vec::with_capacity(k + 1);
    weyl_derivs.push(CMatrix::from_rows(&[vec![factor.weyl()?]])?);
    let mut fact = 1.0;
    for j in 1..=k {
        fact *= j as f64;
        let mut dot = c64(0.0, 0.0);
        for i in 0..wi.len() {
            dot += xs[0][i].conj() * cols[j - 1][i] * (wi[i] / wb);
        }
        weyl_derivs.push(CMatrix::from_rows(&[vec![dot * fact]])?);
    }

    let ctx = EvalContext::boundary_only(lambda, weyl_derivs)?;
    let expr = mode_middle_expr(pair, mode.ell())?;

    // kappa[a][c] = K^{(k-a-c)} / (k-a-c)! for a + c <= k, zero beyond.
    let mut derivs = Vec::with_capacity(k + 1);
    for b in 0..=k {
        let d = ctx.derivative(&expr, b, lambda)?;
        derivs.push(d.get(0, 0) / factorial(b));
    }
    let mut kappa = CMatrix::zeros(k + 1, k + 1);
    for a in 0..=k {
        for c in 0..=(k - a) {
            kappa.set(a, c, derivs[k - a - c]);
        }
    }

    // Orthogonalize the weighted families; the singular values live in the
    // (k+1)-dimensional core T1 kappa T2^H.
    let sqrt_wi: Vec<f64> = wi.iter().map(|w| w.sqrt()).collect();
    let left: Vec<Vec<Complex64>> = cols
        .iter()
        .map(|u| {
            u.iter()
                .zip(&sqrt_wi)
                .map(|(v, sw)| v * *sw)
                .collect()
        })
        .collect();
    let right: Vec<Vec<Complex64>> = xs
        .iter()
        .map(|x| {
            x.iter()
                .zip(&sqrt_wi)
                .map(|(v, sw)| v * (*sw / wb))
                .collect()
        })
        .collect();
    let t1 = thin_qr_r(&left);
    let t2 = thin_qr_r(&right);
    let core = t1.mul(&kappa)?.mul(&t2.adjoint())?;
    svd_values(&core)
}

/// Run a decay ladder: compute the weighted singular values of the pair's
/// `m`-th resolvent power difference at `levels` successive refinements of
/// `cfg`, fit the tail exponent at each level, and compare with the
/// dimension-counting prediction.
pub fn singular_value_ladder(
    cfg: &ModelConfig,
    pair: &ExtensionPair,
    m: usize,
    lambda: Complex64,
    levels: usize,
    window: f64,
) -> Result<DecayReport> {
    if levels < 2 {
        return Err(Error::Config(format!(
            "a decay ladder needs at least 2 levels to compare, got {levels}"
        )));
    }
    order_guard(m)?;
    let n = cfg.spatial_dimension();
    let applicable = n >= 2;
    let predicted = pair.predicted_exponent(n, m);
    let improvement_t = pair.improvement_t(n);

    let mut level_cfg = cfg.clone();
    let mut out = Vec::with_capacity(levels);
    for level in 0..levels {
        if level > 0 {
            level_cfg = refine_config(&level_cfg)?;
        }
        let s = level_s_values(&level_cfg, pair, m, lambda)?;
        let (fitted, r_squared, quasinorm) = if applicable {
            let (alpha, r2) = fit_decay_exponent(&s, window)?;
            let q = match predicted {
                Some(p) => Some(weak_schatten_quasinorm(&s, 1.0 / p)?),
                None => None,
            };
            (Some(alpha), Some(r2), q)
        } else {
            (None, None, None)
        };
        out.push(DecayLevel {
            resolution: level_cfg.describe(),
            s_values: s,
            fitted_exponent: fitted,
            r_squared,
            quasinorm,
        });
    }
    Ok(DecayReport {
        pair: pair.kind(),
        m,
        lambda,
        spatial_dimension: n,
        improvement_t,
        predicted_exponent: predicted,
        applicable,
        levels: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;
    use crate::models::disk::assemble_direct_sum;

    const B_ONE: fn() -> BoundaryOpSpec = || BoundaryOpSpec::multiplication_const(1.0);

    fn micro() -> QuasiTriple {
        crate::models::sl1d::build(2, 1.0, &Coeff::Const(1.0), &Coeff::Const(0.0)).unwrap()
    }

    /// Compare the leading singular values of two routes, ignoring the
    /// rank-deficient tail where the Gram-matrix SVD only resolves values
    /// down to about `1e-8 * s_max`.
    fn assert_matching_heads(a: &[f64], b: &[f64], tol: f64) {
        let scale = a
            .first()
            .copied()
            .unwrap_or(0.0)
            .max(b.first().copied().unwrap_or(0.0));
        let cut = 1e-6 * scale;
        let ah: Vec<f64> = a.iter().copied().take_while(|&v| v > cut).collect();
        let bh: Vec<f64> = b.iter().copied().take_while(|&v| v > cut).collect();
        assert_eq!(
            ah.len(),
            bh.len(),
            "significant counts differ: {} vs {}",
            ah.len(),
            bh.len()
        );
        for (x, y) in ah.iter().zip(&bh) {
            assert!((x - y).abs() <= tol * (1.0 + scale), "{x} vs {y}");
        }
    }

    fn sl1d_variable(n: usize) -> QuasiTriple {
        let faces: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.3 * ((i as f64 + 0.5) / n as f64).sin())
            .collect();
        let pot: Vec<f64> = (1..n).map(|i| 0.5 * (i as f64 / n as f64).cos()).collect();
        crate::models::sl1d::build(n, 1.0, &Coeff::Samples(faces), &Coeff::Samples(pot)).unwrap()
    }

    #[test]
    fn micro_frozen_trace_values() {
        let tr = micro();
        let lam = c64(4.0, 0.0);

        let dn = trace_formula_check(&tr, &ExtensionPair::NeumannDirichlet, 1, lam).unwrap();
        assert!((dn.lhs - c64(-0.5, 0.0)).norm() < 1e-14, "lhs {}", dn.lhs);
        assert!(dn.abs_discrepancy < 1e-12, "abs {}", dn.abs_discrepancy);

        let rn =
            trace_formula_check(&tr, &ExtensionPair::RobinNeumann { b: B_ONE() }, 1, lam).unwrap();
        assert!(
            (rn.lhs - c64(1.0 / 6.0, 0.0)).norm() < 1e-14,
            "lhs {}",
            rn.lhs
        );
        assert!(rn.abs_discrepancy < 1e-12, "abs {}", rn.abs_discrepancy);

        let rd = trace_formula_check(&tr, &ExtensionPair::RobinDirichlet { b: B_ONE() }, 1, lam)
            .unwrap();
        assert!(
            (rd.lhs - c64(-1.0 / 3.0, 0.0)).norm() < 1e-14,
            "lhs {}",
            rd.lhs
        );
        assert!(rd.abs_discrepancy < 1e-12, "abs {}", rd.abs_discrepancy);

        // Power differences on the one-dimensional interior space.
        let d = resolvent_power_diff(&tr, &ExtensionPair::NeumannDirichlet, 1, lam).unwrap();
        assert_eq!((d.rows(), d.cols()), (1, 1));
        assert!((d.get(0, 0) - c64(-0.5, 0.0)).norm() < 1e-14);
        let d = resolvent_power_diff(&tr, &ExtensionPair::RobinNeumann { b: B_ONE() }, 1, lam)
            .unwrap();
        assert!((d.get(0, 0) - c64(1.0 / 6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn equal_robin_parameters_give_zero() {
        let pair = ExtensionPair::RobinRobin {
            b1: BoundaryOpSpec::multiplication_const(0.7),
            b2: BoundaryOpSpec::multiplication_const(0.7),
        };
        for tr in [micro(), sl1d_variable(12)] {
            let rep = trace_formula_check(&tr, &pair, 2, c64(-1.0, 0.4)).unwrap();
            assert!(rep.lhs.norm() < 1e-13, "lhs {}", rep.lhs);
            assert!(rep.rhs.norm() < 1e-12, "rhs {}", rep.rhs);
            let d = resolvent_power_diff(&tr, &pair, 1, c64(-1.0, 0.4)).unwrap();
            assert!(d.norm_max() < 1e-13, "diff {}", d.norm_max());
        }
    }

    #[test]
    fn telescoping_robin_dirichlet_splits() {
        let tr = sl1d_variable(16);
        let b = BoundaryOpSpec::multiplication_const(0.8);
        let rd = DensePairSession::new(&tr, &ExtensionPair::RobinDirichlet { b: b.clone() })
            .unwrap();
        let rn =
            DensePairSession::new(&tr, &ExtensionPair::RobinNeumann { b: b.clone() }).unwrap();
        let dn = DensePairSession::new(&tr, &ExtensionPair::NeumannDirichlet).unwrap();
        for lam in [c64(-9.0, 0.0), c64(-1.0, 0.5)] {
            for m in 1..=3 {
                let whole = rd.lhs_trace(m, lam).unwrap();
                let split = rn.lhs_trace(m, lam).unwrap() + dn.lhs_trace(m, lam).unwrap();
                assert!(
                    (whole - split).norm() <= 1e-10 * (1.0 + whole.norm()),
                    "m={m} lam={lam}: {whole} vs {split}"
                );
            }
        }
    }

    #[test]
    fn trace_identity_on_variable_coefficients() {
        let tr = sl1d_variable(24);
        let pairs = [
            ExtensionPair::NeumannDirichlet,
            ExtensionPair::RobinNeumann {
                b: BoundaryOpSpec {
                    variant: crate::models::BoundaryOpVariant::Multiplication(
                        crate::models::BetaSpec::Samples(vec![0.5, 1.5]),
                    ),
                    declared_s: None,
                },
            },
            ExtensionPair::RobinRobin {
                b1: BoundaryOpSpec {
                    variant: crate::models::BoundaryOpVariant::Multiplication(
                        crate::models::BetaSpec::Samples(vec![0.5, 1.5]),
                    ),
                    declared_s: None,
                },
                b2: BoundaryOpSpec {
                    variant: crate::models::BoundaryOpVariant::Multiplication(
                        crate::models::BetaSpec::Samples(vec![0.4, 0.9]),
                    ),
                    declared_s: None,
                },
            },
            ExtensionPair::RobinDirichlet {
                b: BoundaryOpSpec::multiplication_const(0.6),
            },
        ];
        for pair in &pairs {
            let session = DensePairSession::new(&tr, pair).unwrap();
            for lam in [c64(-25.0, 0.0), c64(-1.2, 0.7), c64(3.0, 2.0)] {
                for m in 1..=3 {
                    let rep = session.check(m, lam, None).unwrap();
                    assert!(
                        rep.rel_discrepancy <= 1e-10,
                        "{} m={m} lam={lam}: lhs {} rhs {} rel {}",
                        rep.pair,
                        rep.lhs,
                        rep.rhs,
                        rep.rel_discrepancy
                    );
                }
            }
        }
    }

    #[test]
    fn mode_blocks_and_direct_sum_agree() {
        let blocks = disk::mode_blocks(10, 2, 1.0).unwrap();
        let dense = assemble_direct_sum(&blocks).unwrap();
        let modes_instance = ModelInstance::Modes(blocks);
        let pairs = [
            ExtensionPair::NeumannDirichlet,
            ExtensionPair::RobinNeumann {
                b: BoundaryOpSpec::multiplication_const(0.7),
            },
        ];
        for pair in &pairs {
            let by_modes = InstanceSession::new(&modes_instance, pair).unwrap();
            let by_dense = DensePairSession::new(&dense, pair).unwrap();
            for m in 1..=2 {
                let a = by_modes.trace_check(m, c64(-1.0, 0.0), None).unwrap();
                let lhs_d = by_dense.lhs_trace(m, c64(-1.0, 0.0)).unwrap();
                let rhs_d = by_dense.rhs_trace(m, c64(-1.0, 0.0)).unwrap();
                assert!(
                    (a.lhs - lhs_d).norm() < 1e-10,
                    "lhs: {} vs {}",
                    a.lhs,
                    lhs_d
                );
                assert!(
                    (a.rhs - rhs_d).norm() < 1e-10,
                    "rhs: {} vs {}",
                    a.rhs,
                    rhs_d
                );
                assert!(a.abs_discrepancy < 1e-11);
            }
        }
    }

    #[test]
    fn factored_mode_route_matches_dense_s_values() {
        let n_r = 12;
        let mode_max = 3;
        let cfg = ModelConfig::DiskModes {
            n_r,
            mode_max,
            radius: 1.0,
        };
        let blocks = disk::mode_blocks(n_r, mode_max, 1.0).unwrap();
        let cases = [
            (ExtensionPair::NeumannDirichlet, 1),
            (ExtensionPair::NeumannDirichlet, 3),
            (
                ExtensionPair::RobinRobin {
                    b1: BoundaryOpSpec::fourier_decay(1.0, 1.0, 1.0),
                    b2: BoundaryOpSpec::multiplication_const(1.0),
                },
                2,
            ),
            (
                ExtensionPair::RobinNeumann {
                    b: BoundaryOpSpec::multiplication_const(0.5),
                },
                2,
            ),
        ];
        for lam in [c64(-1.0, 0.0), c64(-0.8, 0.6)] {
            for (pair, m) in &cases {
                let fast = level_s_values(&cfg, pair, *m, lam).unwrap();
                let mut slow = Vec::new();
                for block in &blocks {
                    let session = DensePairSession::new(&block.triple, pair).unwrap();
                    slow.extend(session.s_values(*m, lam).unwrap());
                }
                slow.sort_by(|a, b| b.total_cmp(a));
                assert_matching_heads(&fast, &slow, 1e-9);
            }
        }
    }

    #[test]
    fn s_values_match_eigenvalue_magnitudes_at_real_lambda() {
        let tr = sl1d_variable(16);
        let session = DensePairSession::new(&tr, &ExtensionPair::NeumannDirichlet).unwrap();
        let diff = session.power_diff(1, c64(-2.0, 0.0)).unwrap();
        let sym = symmetrize_weighted(&diff, tr.interior_space()).unwrap();
        let s = svd_values(&sym).unwrap();
        let (evals, _) = hermitian_eig(&sym, 1e-9).unwrap();
        let mut mags: Vec<f64> = evals.iter().map(|v| v.abs()).collect();
        mags.sort_by(|a, b| b.total_cmp(a));
        assert_matching_heads(&s, &mags, 1e-10);
    }

    #[test]
    fn fit_recovers_exact_power_laws() {
        let s2: Vec<f64> = (1..=100).map(|k| (k as f64).powi(-2)).collect();
        let (alpha, r2) = fit_decay_exponent(&s2, DEFAULT_FIT_WINDOW).unwrap();
        assert!((alpha - 2.0).abs() < 1e-8, "alpha {alpha}");
        assert!(r2 > 0.999999, "r2 {r2}");

        let s3: Vec<f64> = (1..=100).map(|k| 5.0 * (k as f64).powi(-3)).collect();
        let (alpha, r2) = fit_decay_exponent(&s3, DEFAULT_FIT_WINDOW).unwrap();
        assert!((alpha - 3.0).abs() < 1e-8, "alpha {alpha}");
        assert!(r2 > 0.999999);

        let wobble: Vec<f64> = (1..=200)
            .map(|k| (k as f64).powi(-2) * (1.0 + 0.1 * (k as f64).sin()))
            .collect();
        let (alpha, _) = fit_decay_exponent(&wobble, DEFAULT_FIT_WINDOW).unwrap();
        assert!((1.9..=2.1).contains(&alpha), "alpha {alpha}");
    }

    #[test]
    fn fit_rejects_thin_or_invalid_input() {
        let few = vec![1.0, 0.5, 0.1, 0.05, 0.01];
        match fit_decay_exponent(&few, 0.5) {
            Err(Error::TooFewValues { have: 5, need: 8 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        // Values below the floor do not count.
        let mut padded: Vec<f64> = (1..=7).map(|k| (k as f64).powi(-2)).collect();
        padded.extend(std::iter::repeat(1e-15).take(20));
        assert!(matches!(
            fit_decay_exponent(&padded, 0.5),
            Err(Error::TooFewValues { have: 7, .. })
        ));
        let fine: Vec<f64> = (1..=50).map(|k| (k as f64).powi(-1)).collect();
        assert!(matches!(
            fit_decay_exponent(&fine, 0.0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            fit_decay_exponent(&fine, 1.5),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn product_of_prescribed_classes_fits_the_summed_exponent() {
        // Diagonal factors with s-values k^{-1/2} and k^{-1/3}: the product
        // decays with exponent 1/2 + 1/3 (the discrete analogue of the ideal
        // product rule), and the fit must find at least that minus slack.
        let n = 64;
        let d1: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-0.5)).collect();
        let d2: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-1.0 / 3.0)).collect();
        let m1 = crate::models::real_diagonal(&d1);
        let m2 = crate::models::real_diagonal(&d2);
        let s = svd_values(&m1.mul(&m2).unwrap()).unwrap();
        let (alpha, r2) = fit_decay_exponent(&s, DEFAULT_FIT_WINDOW).unwrap();
        assert!(alpha >= 0.5 + 1.0 / 3.0 - 0.1, "alpha {alpha}");
        assert!(r2 > 0.99);
    }

    #[test]
    fn predicted_exponents_follow_the_counting_rules() {
        let dn = ExtensionPair::NeumannDirichlet;
        assert_eq!(dn.predicted_exponent(2, 1), Some(2.0));
        assert_eq!(dn.predicted_exponent(2, 3), Some(6.0));
        assert_eq!(dn.predicted_exponent(1, 1), None);

        let rn = ExtensionPair::RobinNeumann {
            b: BoundaryOpSpec::multiplication_const(1.0),
        };
        assert_eq!(rn.predicted_exponent(2, 1), Some(3.0));
        assert_eq!(rn.improvement_t(2), 0.0);

        let rr = ExtensionPair::RobinRobin {
            b1: BoundaryOpSpec::fourier_decay(1.0, 1.0, 1.0),
            b2: BoundaryOpSpec::multiplication_const(1.0),
        };
        assert_eq!(rr.improvement_t(2), 1.0);
        assert_eq!(rr.predicted_exponent(2, 1), Some(4.0));

        let rd = ExtensionPair::RobinDirichlet {
            b: BoundaryOpSpec::fourier_decay(1.0, 1.0, 0.0),
        };
        // Dirichlet-side pairs ignore the declared class.
        assert_eq!(rd.improvement_t(2), 0.0);
        assert_eq!(rd.predicted_exponent(2, 2), Some(4.0));
    }

    #[test]
    fn ladder_on_the_interval_is_marked_not_applicable() {
        let cfg = ModelConfig::Sl1d {
            n: 30,
            length: 1.0,
            a: Coeff::Const(1.0),
            a0: Coeff::Const(0.0),
        };
        let rep = singular_value_ladder(
            &cfg,
            &ExtensionPair::NeumannDirichlet,
            1,
            c64(-1.0, 0.0),
            2,
            DEFAULT_FIT_WINDOW,
        )
        .unwrap();
        assert!(!rep.applicable);
        assert_eq!(rep.predicted_exponent, None);
        assert_eq!(rep.levels.len(), 2);
        for level in &rep.levels {
            assert!(level.fitted_exponent.is_none());
            assert!(level.quasinorm.is_none());
            // A two-point boundary still yields (two) singular values.
            assert_eq!(level.s_values.len() >= 1, true);
        }
        assert_ne!(rep.levels[0].resolution, rep.levels[1].resolution);
    }

    #[test]
    fn ladder_on_a_small_disk_produces_a_finite_fit() {
        let cfg = ModelConfig::DiskModes {
            n_r: 8,
            mode_max: 4,
            radius: 1.0,
        };
        let rep = singular_value_ladder(
            &cfg,
            &ExtensionPair::NeumannDirichlet,
            1,
            c64(-1.0, 0.0),
            2,
            DEFAULT_FIT_WINDOW,
        )
        .unwrap();
        assert!(rep.applicable);
        assert_eq!(rep.predicted_exponent, Some(2.0));
        for level in &rep.levels {
            let s = &level.s_values;
            assert!(s.windows(2).all(|w| w[0] >= w[1]), "not sorted");
            let alpha = level.fitted_exponent.unwrap();
            assert!(alpha.is_finite() && alpha > 0.0, "alpha {alpha}");
            assert!(level.quasinorm.unwrap() > 0.0);
        }
        // The finer level has strictly more singular values (more modes).
        assert!(rep.levels[1].s_values.len() > rep.levels[0].s_values.len());
    }

    #[test]
    fn guards_reject_degenerate_requests() {
        let tr = micro();
        assert!(matches!(
            trace_formula_check(&tr, &ExtensionPair::NeumannDirichlet, 0, c64(-1.0, 0.0)),
            Err(Error::Config(_))
        ));
        let cfg = ModelConfig::DiskModes {
            n_r: 8,
            mode_max: 4,
            radius: 1.0,
        };
        assert!(matches!(
            singular_value_ladder(
                &cfg,
                &ExtensionPair::NeumannDirichlet,
                1,
                c64(-1.0, 0.0),
                1,
                0.5
            ),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn refinement_scales_each_geometry() {
        let disk = ModelConfig::DiskModes {
            n_r: 64,
            mode_max: 32,
            radius: 1.0,
        };
        match refine_config(&disk).unwrap() {
            ModelConfig::DiskModes { n_r, mode_max, .. } => {
                assert_eq!((n_r, mode_max), (256, 64));
            }
            other => panic!("unexpected {other:?}"),
        }
        let line = ModelConfig::Sl1d {
            n: 100,
            length: 1.0,
            a: Coeff::Const(1.0),
            a0: Coeff::Const(0.0),
        };
        match refine_config(&line).unwrap() {
            ModelConfig::Sl1d { n, .. } => assert_eq!(n, 200),
            other => panic!("unexpected {other:?}"),
        }
        let sampled = ModelConfig::Sl1d {
            n: 4,
            length: 1.0,
            a: Coeff::Samples(vec![1.0, 1.0, 1.0, 1.0]),
            a0: Coeff::Const(0.0),
        };
        assert!(matches!(refine_config(&sampled), Err(Error::Config(_))));
    }

    #[test]
    fn continuum_reference_only_for_constant_interval_dn() {
        let cfg = ModelConfig::Sl1d {
            n: 100,
            length: 1.0,
            a: Coeff::Const(2.0),
            a0: Coeff::Const(0.5),
        };
        let lam = c64(-1.0, 0.0);
        let dn = ExtensionPair::NeumannDirichlet;
        let got = continuum_trace_reference(&cfg, &dn, 1, lam).unwrap();
        assert!((got - c64(1.0 / 1.5, 0.0)).norm() < 1e-15);
        let got = continuum_trace_reference(&cfg, &dn, 2, lam).unwrap();
        assert!((got - c64(1.0 / 2.25, 0.0)).norm() < 1e-15);

        let rn = ExtensionPair::RobinNeumann { b: B_ONE() };
        assert!(continuum_trace_reference(&cfg, &rn, 1, lam).is_none());
        let sampled = ModelConfig::Sl1d {
            n: 4,
            length: 1.0,
            a: Coeff::Samples(vec![1.0; 4]),
            a0: Coeff::Const(0.0),
        };
        assert!(continuum_trace_reference(&sampled, &dn, 1, lam).is_none());
        let disk = ModelConfig::DiskModes {
            n_r: 8,
            mode_max: 2,
            radius: 1.0,
        };
        assert!(continuum_trace_reference(&disk, &dn, 1, lam).is_none());
    }

    #[test]
    fn sl1d_dn_trace_converges_to_continuum_reference() {
        // Sharper version of the convergence check used by the acceptance
        // gate, at a small size: the discrete lhs approaches (a0 - l)^{-1}.
        let lam = c64(-1.0, 0.0);
        let mut last = f64::INFINITY;
        for n in [25, 50, 100] {
            let cfg = ModelConfig::Sl1d {
                n,
                length: 1.0,
                a: Coeff::Const(1.0),
                a0: Coeff::Const(0.0),
            };
            let instance = cfg.build().unwrap();
            let session = InstanceSession::new(&instance, &ExtensionPair::NeumannDirichlet)
                .unwrap();
            let reference =
                continuum_trace_reference(&cfg, &ExtensionPair::NeumannDirichlet, 1, lam)
                    .unwrap();
            let rep = session.trace_check(1, lam, Some(reference)).unwrap();
            let err = (rep.lhs - reference).norm();
            assert!(err < last, "error not decreasing: {err} vs {last}");
            last = err;
        }
        assert!(last < 5e-3, "final error {last}");
    }
}
