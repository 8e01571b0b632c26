//! Finite-dimensional boundary triples for discretized elliptic operators.
//!
//! This crate instantiates the abstract boundary-triple toolkit — trace maps,
//! gamma fields, Weyl functions (Neumann-to-Dirichlet maps), Krein-type
//! resolvent identities — on concrete finite-difference models, and verifies
//! the operator-theoretic predictions numerically:
//!
//! * exact discrete Green identities for the shipped models,
//! * Krein resolvent formulas for Dirichlet/Neumann and Robin-type boundary
//!   conditions, including non-local boundary operators,
//! * trace formulas equating interior resolvent-power differences with
//!   boundary-side derivative expressions,
//! * singular-value decay laws (weak Schatten-class membership) measured
//!   across resolution ladders.
//!
//! Layering, bottom to top:
//!
//! | module       | contents                                                      |
//! |--------------|---------------------------------------------------------------|
//! | [`linalg`]   | dense complex kernels over weighted spaces                    |
//! | [`triple`]   | boundary triples, self-adjoint restrictions, Krein formulas   |
//! | [`calculus`] | symbolic lambda-derivatives of operator-valued expressions    |
//! | [`models`]   | interval / rectangle / disk discretizations, boundary operators|
//! | [`analysis`] | trace-formula checks, decay ladders, exponent fits            |
//! | [`config`], [`report`], [`cli`] | config parsing, JSON/CSV reports, subcommands |
//!
//! The `examples/` directory contains one runnable walkthrough per capability;
//! the `weyltrace` binary exposes the same checks as subcommands.

pub mod analysis;
pub mod calculus;
pub mod cli;
pub mod config;
pub mod error;
pub mod linalg;
pub mod models;
pub mod report;
pub mod triple;

pub use error::{Error, Result};
