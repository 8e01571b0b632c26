//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`].  Variants are grouped by the
//! layer that raises them, but the enum is shared so that errors propagate
//! cleanly from the linear-algebra kernels up through the CLI.

use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    // ---- dense kernels -------------------------------------------------
    /// A matrix expected to be (conjugate-)symmetric is not, beyond the
    /// caller-supplied tolerance.
    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { asymmetry: f64, tol: f64 },

    /// The iterative eigensolver exhausted its sweep budget.
    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    /// A linear solve met a pivot below the breakdown threshold.
    #[error("matrix is numerically singular (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    Singular { pivot: f64, threshold: f64 },

    /// An operation that requires a square matrix received a rectangular one.
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    /// An empty sequence was passed where at least one element is required.
    #[error("empty sequence passed to {op}")]
    EmptySequence { op: &'static str },

    /// Operand shapes are incompatible.
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    // ---- boundary triple ----------------------------------------------
    /// A kernel restriction produced the wrong kernel dimension or a
    /// non-invertible interior projection.
    #[error("degenerate kernel in restriction: {detail}")]
    DegenerateKernel { detail: String },

    /// An operator that must be self-adjoint (with respect to the weighted
    /// inner product of its space) is not.
    #[error("operator is not self-adjoint: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotSelfAdjoint { defect: f64, tol: f64 },

    /// The spectral parameter sits on (or numerically too close to) the
    /// spectrum of the relevant self-adjoint restriction.
    #[error("spectral parameter {lambda} lies in (or too close to) the spectrum")]
    LambdaInSpectrum { lambda: String },

    /// The Weyl function is singular at the requested point.
    #[error("Weyl function is singular at lambda = {lambda}")]
    SingularWeyl { lambda: String },

    /// I - B M(lambda) (or I - M(lambda) B) is singular at the requested point.
    #[error("Robin-to-Neumann transform I - B*M is singular at lambda = {lambda}")]
    SingularRobinToNeumann { lambda: String },

    // ---- operator calculus ---------------------------------------------
    /// A finite-difference stencil point fell on the spectrum.
    #[error("finite-difference stencil point {point} hits the spectrum")]
    StencilHitsSpectrum { point: String },

    /// An Inverse node could not be inverted at the evaluation point.
    #[error("inverse node is singular at lambda = {lambda}")]
    SingularInverse { lambda: String },

    /// The requested derivative order exceeds the configured budget.
    #[error("derivative order {order} exceeds the supported maximum {max}")]
    DepthExceeded { order: usize, max: usize },

    // ---- model builders -------------------------------------------------
    /// A diffusion coefficient sample is non-positive.
    #[error("ellipticity violated: coefficient sample {value:.3e} at index {index} is not positive")]
    EllipticityViolated { index: usize, value: f64 },

    /// A grid was requested that is too coarse to carry the discretization.
    #[error("degenerate grid: {detail}")]
    DegenerateGrid { detail: String },

    // ---- analysis -------------------------------------------------------
    /// Too few usable singular values for a decay fit.
    #[error("too few singular values above the floor for a decay fit: have {have}, need {need}")]
    TooFewValues { have: usize, need: usize },

    // ---- configuration / CLI ---------------------------------------------
    /// Malformed configuration file or inconsistent option set.
    #[error("configuration error: {0}")]
    Config(String),

    /// Underlying I/O failure (config files, dense-operator files, reports).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
