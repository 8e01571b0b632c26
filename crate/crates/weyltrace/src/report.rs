//! Run manifests and machine-readable reports.
//!
//! Every command emits one JSON document with fields `{manifest, results,
//! pass}`.  The manifest pins everything needed to reproduce the run: the
//! command, the config path and the resolved model, the seed, the requested
//! parameters, the output paths, and the tool version.  Serialization is
//! deterministic (fixed field order, exact float rendering), so re-running a
//! command with the same inputs and seed produces byte-identical reports;
//! wall-clock timings are therefore deliberately kept out of the report and
//! printed to stderr instead.
//!
//! Decay runs additionally emit the measured singular values as CSV with
//! columns `k, s_k, level` (rank within the level, value, 1-based ladder
//! level).

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{DecayReport, TraceReport, DECAY_MONOTONE_SLACK};
use crate::models::ModelConfig;

/// Tool version baked into every manifest.
pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

fn c_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Everything needed to reproduce a run.  Fields that do not apply to the
/// command are omitted from the JSON.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_path: String,
    /// The model as resolved from the config file.
    pub model: ModelConfig,
    #[serde(skip_serializing_if = "is_one")]
    pub gamma1_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_op: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_op2: Option<String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Paths this run wrote (report itself, CSV side-car).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

impl RunManifest {
    /// A manifest with only the universal fields filled in; command-specific
    /// parameters start empty and are set by the caller.
    pub fn new(command: &str, config_path: &str, model: ModelConfig, seed: u64) -> Self {
        RunManifest {
            tool: "weyltrace".into(),
            version: tool_version().into(),
            command: command.into(),
            config_path: config_path.into(),
            model,
            gamma1_scale: 1.0,
            boundary_op: None,
            boundary_op2: None,
            seed,
            pair: None,
            m: None,
            lambda: Vec::new(),
            levels: None,
            samples: None,
            window: None,
            tol: None,
            outputs: Vec::new(),
        }
    }
}

/// One verification result inside a report.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum ResultRecord {
    /// Randomized Green-identity residual check.
    Green {
        samples: usize,
        scale: f64,
        max_residual: f64,
        tol: f64,
        pass: bool,
    },
    /// Resolvent-difference formula residual at one spectral point.
    Krein {
        pair: String,
        form: String,
        lambda: [f64; 2],
        residual: f64,
        tol: f64,
        pass: bool,
    },
    /// Trace-formula check at one `(m, lambda)`.
    Trace {
        pair: String,
        m: usize,
        lambda: [f64; 2],
        lhs: [f64; 2],
        rhs: [f64; 2],
        abs_discrepancy: f64,
        rel_discrepancy: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        continuum_reference: Option<[f64; 2]>,
        tol: f64,
        pass: bool,
    },
    /// Singular-value decay ladder summary (values themselves go to CSV).
    Decay {
        pair: String,
        m: usize,
        lambda: [f64; 2],
        spatial_dimension: usize,
        improvement_t: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        predicted_exponent: Option<f64>,
        applicable: bool,
        levels: Vec<DecayLevelRecord>,
        pass: bool,
    },
}

/// Per-level decay summary.
#[derive(Debug, Clone, Serialize)]
pub struct DecayLevelRecord {
    pub resolution: String,
    /// Number of singular values retained at this level.
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_squared: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quasinorm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_error: Option<f64>,
}

impl ResultRecord {
    pub fn from_green(max_residual: f64, samples: usize, scale: f64, tol: f64) -> Self {
        ResultRecord::Green {
            samples,
            scale,
            max_residual,
            tol,
            pass: max_residual <= tol,
        }
    }

    pub fn from_trace(report: &TraceReport, tol: f64) -> Self {
        ResultRecord::Trace {
            pair: report.pair.code().into(),
            m: report.m,
            lambda: c_pair(report.lambda),
            lhs: c_pair(report.lhs),
            rhs: c_pair(report.rhs),
            abs_discrepancy: report.abs_discrepancy,
            rel_discrepancy: report.rel_discrepancy,
            continuum_reference: report.continuum_reference.map(c_pair),
            tol,
            pass: report.passes(tol),
        }
    }

    pub fn from_decay(report: &DecayReport) -> Self {
        let errors = report.fit_errors();
        let levels = report
            .levels
            .iter()
            .zip(errors)
            .map(|(lv, err)| DecayLevelRecord {
                resolution: lv.resolution.clone(),
                count: lv.s_values.len(),
                fitted_exponent: lv.fitted_exponent,
                r_squared: lv.r_squared,
                quasinorm: lv.quasinorm,
                fit_error: err,
            })
            .collect();
        ResultRecord::Decay {
            pair: report.pair.code().into(),
            m: report.m,
            lambda: c_pair(report.lambda),
            spatial_dimension: report.spatial_dimension,
            improvement_t: report.improvement_t,
            predicted_exponent: report.predicted_exponent,
            applicable: report.applicable,
            levels,
            pass: report.monotone_approach(DECAY_MONOTONE_SLACK),
        }
    }

    /// Whether this record passed its own criterion.
    pub fn pass(&self) -> bool {
        match self {
            ResultRecord::Green { pass, .. }
            | ResultRecord::Krein { pass, .. }
            | ResultRecord::Trace { pass, .. }
            | ResultRecord::Decay { pass, .. } => *pass,
        }
    }

    /// One human-readable line for terminal output.
    pub fn summary_line(&self) -> String {
        fn verdict(pass: bool) -> &'static str {
            if pass {
                "pass"
            } else {
                "FAIL"
            }
        }
        match self {
            ResultRecord::Green {
                samples,
                max_residual,
                tol,
                pass,
                ..
            } => format!(
                "green: {} samples, max residual {max_residual:.3e} (tol {tol:.1e}) .. {}",
                samples,
                verdict(*pass)
            ),
            ResultRecord::Krein {
                pair,
                form,
                lambda,
                residual,
                tol,
                pass,
            } => format!(
                "krein {pair} [{form}] at {}+{}i: residual {residual:.3e} (tol {tol:.1e}) .. {}",
                lambda[0],
                lambda[1],
                verdict(*pass)
            ),
            ResultRecord::Trace {
                pair,
                m,
                lambda,
                rel_discrepancy,
                tol,
                pass,
                ..
            } => format!(
                "trace {pair} m={m} at {}+{}i: rel discrepancy {rel_discrepancy:.3e} (tol {tol:.1e}) .. {}",
                lambda[0],
                lambda[1],
                verdict(*pass)
            ),
            ResultRecord::Decay {
                pair,
                m,
                predicted_exponent,
                applicable,
                levels,
                pass,
                ..
            } => {
                let fitted = levels
                    .last()
                    .and_then(|lv| lv.fitted_exponent)
                    .map(|a| format!("{a:.4}"))
                    .unwrap_or_else(|| "-".into());
                let predicted = predicted_exponent
                    .map(|a| format!("{a:.4}"))
                    .unwrap_or_else(|| "-".into());
                if *applicable {
                    format!(
                        "decay {pair} m={m}: fitted {fitted} vs predicted {predicted} \
                         over {} levels .. {}",
                        levels.len(),
                        verdict(*pass)
                    )
                } else {
                    format!("decay {pair} m={m}: not applicable in dimension 1 .. {}", verdict(*pass))
                }
            }
        }
    }
}

/// The complete output of one command invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub manifest: RunManifest,
    pub results: Vec<ResultRecord>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(manifest: RunManifest, results: Vec<ResultRecord>) -> Self {
        let pass = !results.is_empty() && results.iter().all(|r| r.pass());
        RunReport {
            manifest,
            results,
            pass,
        }
    }

    /// Deterministic pretty JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }
}

/// Singular values of a ladder as CSV with columns `k, s_k, level`.
/// `k` is the 1-based rank within the level, `level` the 1-based ladder
/// position, values in scientific notation.
pub fn singular_value_csv(report: &DecayReport) -> String {
    let mut out = String::from("k,s_k,level\n");
    for (level_idx, level) in report.levels.iter().enumerate() {
        for (k, s) in level.s_values.iter().enumerate() {
            out.push_str(&format!("{},{:e},{}\n", k + 1, s, level_idx + 1));
        }
    }
    out
}
