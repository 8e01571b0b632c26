//! Discretized elliptic model problems that produce boundary triples.
//!
//! Three geometries are shipped:
//!
//! * [`sl1d`] — a Sturm-Liouville problem `-(a u')' + a0 u` on an interval.
//!   One-dimensional testbed: the boundary space is two points, so every
//!   resolvent difference is finite rank and decay fitting does not apply.
//! * [`rect2d`] — a variable-axis five-point discretization of
//!   `-div(A grad u) + a0 u` on a rectangle with diagonal `A`.
//! * [`disk`] — the unit-style disk via separation of variables: a direct sum
//!   of radial problems indexed by angular mode, with a diagonal Weyl
//!   function.  This is the scalable geometry used for decay ladders.
//!
//! All builders arrange the discrete Green identity to hold exactly (to
//! rounding): the conormal trace is the one-sided flux difference that the
//! interior summation-by-parts telescopes to, and quadrature weights are the
//! matching cell measures.  That costs O(h) consistency of the trace maps but
//! makes every Krein/trace identity downstream pure algebra.

pub mod disk;
pub mod rect2d;
pub mod sl1d;

pub use disk::{ModeBlock, RadialFactor, RadialMode};

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix};
use crate::triple::{QuasiTriple, RobinParameter};

/// Scalar coefficient field for a model: either a constant or grid samples.
///
/// Sampled coefficients are supported on the interval model, where the
/// builder documents how many samples it needs (faces for the stiffness
/// coefficient, interior nodes for the potential).  The rectangle and disk
/// builders take constants.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coeff {
    Const(f64),
    Samples(Vec<f64>),
}

impl Coeff {
    /// Value at sample index `idx` out of `expected` samples.
    fn value(&self, idx: usize, expected: usize, what: &str) -> Result<f64> {
        match self {
            Coeff::Const(c) => Ok(*c),
            Coeff::Samples(v) => {
                if v.len() != expected {
                    return Err(Error::Config(format!(
                        "{what}: expected {expected} samples, got {}",
                        v.len()
                    )));
                }
                Ok(v[idx])
            }
        }
    }

    /// The constant value, or an error for sampled coefficients (used by
    /// builders that do not support sampling).
    fn constant(&self, what: &str) -> Result<f64> {
        match self {
            Coeff::Const(c) => Ok(*c),
            Coeff::Samples(_) => Err(Error::Config(format!(
                "{what}: this model supports constant coefficients only"
            ))),
        }
    }
}

/// Geometry plus coefficients for one model problem.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelConfig {
    /// `-(a u')' + a0 u` on `[0, length]`, `n` cells.
    Sl1d {
        n: usize,
        length: f64,
        a: Coeff,
        a0: Coeff,
    },
    /// `-(a11 u_x)_x - (a22 u_y)_y + a0 u` on `[0, lx] x [0, ly]`.
    Rect2d {
        nx: usize,
        ny: usize,
        lx: f64,
        ly: f64,
        a11: Coeff,
        a22: Coeff,
        a0: Coeff,
    },
    /// `-Laplace` on the disk of the given radius, as radial problems for
    /// angular modes `|l| <= mode_max`, `n_r` staggered radial cells.
    DiskModes {
        n_r: usize,
        mode_max: usize,
        radius: f64,
    },
}

impl ModelConfig {
    /// Spatial dimension `n` used in decay-exponent predictions.
    pub fn spatial_dimension(&self) -> usize {
        match self {
            ModelConfig::Sl1d { .. } => 1,
            ModelConfig::Rect2d { .. } | ModelConfig::DiskModes { .. } => 2,
        }
    }

    /// One-line description for reports.
    pub fn describe(&self) -> String {
        match self {
            ModelConfig::Sl1d { n, length, .. } => format!("sl1d(n={n}, length={length})"),
            ModelConfig::Rect2d { nx, ny, lx, ly, .. } => {
                format!("rect2d(nx={nx}, ny={ny}, lx={lx}, ly={ly})")
            }
            ModelConfig::DiskModes {
                n_r,
                mode_max,
                radius,
            } => format!("disk_modes(n_r={n_r}, mode_max={mode_max}, radius={radius})"),
        }
    }

    /// Build the model: a single dense triple for the interval and rectangle,
    /// a block list (one triple per angular mode) for the disk.
    pub fn build(&self) -> Result<ModelInstance> {
        match self {
            ModelConfig::Sl1d { n, length, a, a0 } => {
                Ok(ModelInstance::Dense(sl1d::build(*n, *length, a, a0)?))
            }
            ModelConfig::Rect2d {
                nx,
                ny,
                lx,
                ly,
                a11,
                a22,
                a0,
            } => Ok(ModelInstance::Dense(rect2d::build(
                *nx, *ny, *lx, *ly, a11, a22, a0,
            )?)),
            ModelConfig::DiskModes {
                n_r,
                mode_max,
                radius,
            } => Ok(ModelInstance::Modes(disk::mode_blocks(
                *n_r, *mode_max, *radius,
            )?)),
        }
    }
}

/// A built model: one dense triple, or one triple per angular mode.
#[derive(Debug, Clone)]
pub enum ModelInstance {
    Dense(QuasiTriple),
    Modes(Vec<ModeBlock>),
}

impl ModelInstance {
    /// Total boundary-space dimension.
    pub fn boundary_dim(&self) -> usize {
        match self {
            ModelInstance::Dense(tr) => tr.boundary_space().dim(),
            ModelInstance::Modes(blocks) => blocks.len(),
        }
    }

    /// Total interior-space dimension.
    pub fn interior_dim(&self) -> usize {
        match self {
            ModelInstance::Dense(tr) => tr.interior_space().dim(),
            ModelInstance::Modes(blocks) => blocks
                .iter()
                .map(|b| b.triple.interior_space().dim())
                .sum(),
        }
    }

    /// Worst Green-identity residual across the instance (per-mode maximum
    /// for block models).
    pub fn max_green_residual(&self, samples: usize, seed: u64) -> f64 {
        match self {
            ModelInstance::Dense(tr) => tr.check_green_identity(samples, 0.0, seed).max_residual,
            ModelInstance::Modes(blocks) => blocks
                .iter()
                .map(|b| {
                    b.triple
                        .check_green_identity(samples, 0.0, seed)
                        .max_residual
                })
                .fold(0.0, f64::max),
        }
    }
}

/// Spec for the boundary operator `B` in `B Gamma1 f = Gamma0 f`.
#[derive(Debug, Clone)]
pub struct BoundaryOpSpec {
    pub variant: BoundaryOpVariant,
    /// Weak Schatten exponent claimed for this operator (or, in two-operator
    /// pairs, for the difference); used by decay predictions.  Defaults to
    /// the decay rate for the spectral variant, none otherwise.
    pub declared_s: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum BoundaryOpVariant {
    /// Multiplication by a real function on the boundary: a constant, or one
    /// sample per boundary coordinate.
    Multiplication(BetaSpec),
    /// Explicit dense matrix (must be self-adjoint in the weighted boundary
    /// inner product).
    Dense(CMatrix),
    /// Diagonal in the angular-mode basis with eigenvalues
    /// `offset + amplitude * (1 + |l|)^(-1/s)`; with zero offset this places
    /// the operator exactly in the weak Schatten class of exponent `s`.
    FourierDecay { s: f64, amplitude: f64, offset: f64 },
}

#[derive(Debug, Clone)]
pub enum BetaSpec {
    Const(f64),
    Samples(Vec<f64>),
}

impl BoundaryOpSpec {
    pub fn multiplication_const(beta: f64) -> Self {
        BoundaryOpSpec {
            variant: BoundaryOpVariant::Multiplication(BetaSpec::Const(beta)),
            declared_s: None,
        }
    }

    pub fn fourier_decay(s: f64, amplitude: f64, offset: f64) -> Self {
        BoundaryOpSpec {
            variant: BoundaryOpVariant::FourierDecay {
                s,
                amplitude,
                offset,
            },
            declared_s: None,
        }
    }

    /// One-line rendering for run manifests and logs.
    pub fn describe(&self) -> String {
        let mut out = match &self.variant {
            BoundaryOpVariant::Multiplication(BetaSpec::Const(b)) => {
                format!("multiplication(beta={b})")
            }
            BoundaryOpVariant::Multiplication(BetaSpec::Samples(v)) => {
                format!("multiplication({} samples)", v.len())
            }
            BoundaryOpVariant::Dense(m) => format!("dense({}x{})", m.rows(), m.cols()),
            BoundaryOpVariant::FourierDecay {
                s,
                amplitude,
                offset,
            } => format!("fourier_decay(s={s}, amplitude={amplitude}, offset={offset})"),
        };
        if let Some(s) = self.declared_s {
            out.push_str(&format!(", declared_s={s}"));
        }
        out
    }

    /// The weak Schatten exponent this operator carries into predictions:
    /// an explicit declaration wins, else the spectral variant's own `s`.
    pub fn effective_declared_s(&self) -> Option<f64> {
        self.declared_s.or(match self.variant {
            BoundaryOpVariant::FourierDecay { s, .. } => Some(s),
            _ => None,
        })
    }
}

impl BoundaryOpVariant {
    /// Scalar value of the operator on one angular mode (spectral and
    /// constant variants only).
    pub fn per_mode_value(&self, ell: i64) -> Result<f64> {
        match self {
            BoundaryOpVariant::Multiplication(BetaSpec::Const(beta)) => Ok(*beta),
            BoundaryOpVariant::FourierDecay {
                s,
                amplitude,
                offset,
            } => {
                if !(*s > 0.0) {
                    return Err(Error::Config(format!(
                        "spectral decay rate must be positive, got {s}"
                    )));
                }
                Ok(offset + amplitude * (1.0 + ell.unsigned_abs() as f64).powf(-1.0 / s))
            }
            _ => Err(Error::Config(
                "mode-resolved models support constant-multiplication or spectral \
                 boundary operators only"
                    .into(),
            )),
        }
    }
}

/// The boundary operator, realized against a model instance.
#[derive(Debug, Clone)]
pub enum BoundaryOp {
    Dense(RobinParameter),
    /// One scalar operator per angular mode, aligned with the block order.
    PerMode(Vec<RobinParameter>),
}

impl BoundaryOp {
    pub fn declared_s(&self) -> Option<f64> {
        match self {
            BoundaryOp::Dense(b) => b.declared_s(),
            BoundaryOp::PerMode(bs) => bs.first().and_then(|b| b.declared_s()),
        }
    }
}

pub fn real_diagonal(d: &[f64]) -> CMatrix {
    let diag: Vec<_> = d.iter().map(|&v| c64(v, 0.0)).collect();
    CMatrix::diagonal(&diag)
}

/// Realize a boundary-operator spec against one dense triple.
pub fn dense_boundary_op(spec: &BoundaryOpSpec, tr: &QuasiTriple) -> Result<RobinParameter> {
    let g = tr.boundary_space();
    let matrix = match &spec.variant {
        BoundaryOpVariant::Multiplication(BetaSpec::Const(beta)) => {
            CMatrix::identity(g.dim()).scale(c64(*beta, 0.0))
        }
        BoundaryOpVariant::Multiplication(BetaSpec::Samples(beta)) => {
            if beta.len() != g.dim() {
                return Err(Error::DimensionMismatch {
                    op: "dense_boundary_op",
                    detail: format!(
                        "{} boundary samples for a boundary space of dim {}",
                        beta.len(),
                        g.dim()
                    ),
                });
            }
            real_diagonal(beta)
        }
        BoundaryOpVariant::Dense(b) => b.clone(),
        BoundaryOpVariant::FourierDecay { .. } => {
            let modes = tr.boundary_modes().ok_or_else(|| {
                Error::Config(
                    "spectral boundary operators need mode labels on the boundary \
                     space (disk models only)"
                        .into(),
                )
            })?;
            let diag: Vec<f64> = modes
                .iter()
                .map(|&ell| spec.variant.per_mode_value(ell))
                .collect::<Result<_>>()?;
            real_diagonal(&diag)
        }
    };
    RobinParameter::new(matrix, g, spec.effective_declared_s())
}

/// Realize a boundary-operator spec against a built model.
pub fn build_boundary_op(spec: &BoundaryOpSpec, instance: &ModelInstance) -> Result<BoundaryOp> {
    match instance {
        ModelInstance::Dense(tr) => Ok(BoundaryOp::Dense(dense_boundary_op(spec, tr)?)),
        ModelInstance::Modes(blocks) => {
            let s = spec.effective_declared_s();
            let mut per = Vec::with_capacity(blocks.len());
            for block in blocks {
                let value = spec.variant.per_mode_value(block.ell)?;
                let b = real_diagonal(&[value]);
                per.push(RobinParameter::new(b, block.triple.boundary_space(), s)?);
            }
            Ok(BoundaryOp::PerMode(per))
        }
    }
}

/// Build the interval model from a config of the matching kind.
pub fn build_sl1d(cfg: &ModelConfig) -> Result<QuasiTriple> {
    match cfg {
        ModelConfig::Sl1d { n, length, a, a0 } => sl1d::build(*n, *length, a, a0),
        _ => Err(Error::Config("build_sl1d called on a non-sl1d config".into())),
    }
}

/// Build the rectangle model from a config of the matching kind.
pub fn build_rect2d(cfg: &ModelConfig) -> Result<QuasiTriple> {
    match cfg {
        ModelConfig::Rect2d {
            nx,
            ny,
            lx,
            ly,
            a11,
            a22,
            a0,
        } => rect2d::build(*nx, *ny, *lx, *ly, a11, a22, a0),
        _ => Err(Error::Config(
            "build_rect2d called on a non-rect2d config".into(),
        )),
    }
}

/// Build the disk model from a config of the matching kind, assembled as one
/// dense direct-sum triple with mode labels on the boundary space.  Memory grows
/// with the square of the total dimension; intended for small mode counts —
/// large runs should stay on the per-mode block representation.
pub fn build_disk_modes(cfg: &ModelConfig) -> Result<QuasiTriple> {
    match cfg {
        ModelConfig::DiskModes {
            n_r,
            mode_max,
            radius,
        } => {
            let blocks = disk::mode_blocks(*n_r, *mode_max, *radius)?;
            disk::assemble_direct_sum(&blocks)
        }
        _ => Err(Error::Config(
            "build_disk_modes called on a non-disk config".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_op_constant_beta_on_interval() {
        let cfg = ModelConfig::Sl1d {
            n: 2,
            length: 1.0,
            a: Coeff::Const(1.0),
            a0: Coeff::Const(0.0),
        };
        let inst = cfg.build().unwrap();
        // beta = 1 gives the identity on the two-point boundary space.
        let op = build_boundary_op(&BoundaryOpSpec::multiplication_const(1.0), &inst).unwrap();
        let BoundaryOp::Dense(b) = op else {
            panic!("interval model should give a dense boundary operator")
        };
        assert!(b
            .matrix()
            .sub(&CMatrix::identity(2))
            .unwrap()
            .norm_max()
            .eq(&0.0));
        // beta = 0 gives the zero operator.
        let op = build_boundary_op(&BoundaryOpSpec::multiplication_const(0.0), &inst).unwrap();
        let BoundaryOp::Dense(b) = op else { unreachable!() };
        assert_eq!(b.matrix().norm_max(), 0.0);
    }

    #[test]
    fn fourier_decay_requires_mode_labels() {
        let cfg = ModelConfig::Sl1d {
            n: 4,
            length: 1.0,
            a: Coeff::Const(1.0),
            a0: Coeff::Const(0.0),
        };
        let inst = cfg.build().unwrap();
        let spec = BoundaryOpSpec::fourier_decay(1.0, 1.0, 0.0);
        assert!(matches!(
            build_boundary_op(&spec, &inst),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn declared_s_defaults_to_spectral_rate() {
        let spec = BoundaryOpSpec::fourier_decay(0.5, 2.0, 0.0);
        assert_eq!(spec.effective_declared_s(), Some(0.5));
        let spec = BoundaryOpSpec {
            declared_s: Some(1.5),
            ..BoundaryOpSpec::fourier_decay(0.5, 2.0, 0.0)
        };
        assert_eq!(spec.effective_declared_s(), Some(1.5));
        assert_eq!(
            BoundaryOpSpec::multiplication_const(2.0).effective_declared_s(),
            None
        );
    }

    #[test]
    fn per_mode_boundary_ops_on_disk() {
        let cfg = ModelConfig::DiskModes {
            n_r: 6,
            mode_max: 2,
            radius: 1.0,
        };
        let inst = cfg.build().unwrap();
        let op = build_boundary_op(&BoundaryOpSpec::fourier_decay(1.0, 1.0, 0.0), &inst).unwrap();
        let BoundaryOp::PerMode(bs) = op else {
            panic!("disk model should give per-mode boundary operators")
        };
        assert_eq!(bs.len(), 5);
        // Block order 0, 1, -1, 2, -2: values 1, 1/2, 1/2, 1/3, 1/3.
        let expect = [1.0, 0.5, 0.5, 1.0 / 3.0, 1.0 / 3.0];
        for (b, e) in bs.iter().zip(expect) {
            assert!((b.matrix().get(0, 0) - c64(e, 0.0)).norm() < 1e-15);
        }
    }
}
