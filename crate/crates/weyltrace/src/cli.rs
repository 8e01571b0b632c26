//! Command-line interface: one subcommand per verification workflow.
//!
//! * `green` — randomized abstract Green-identity check on the built model.
//! * `krein` — residuals of the resolvent-difference formulas against
//!   directly computed resolvents (pairs `dn` and `rn`).
//! * `trace` — trace-formula check (interior side vs boundary side) for an
//!   extension pair at one or more spectral points.
//! * `decay` — singular-value decay ladder with exponent fit and
//!   monotone-approach verdict (mode-resolved models only).
//! * `all` — every check the configuration supports, in one report.
//!
//! Exit codes: `0` all checks passed, `1` a check ran and failed its
//! criterion, `2` usage, configuration, or numerical setup error.  Reports
//! are deterministic JSON (stdout, or `--out PATH`); `decay` additionally
//! writes the singular values as CSV next to the report when `--out` is
//! given (same path with extension `.csv`).

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::analysis::{
    continuum_trace_reference, singular_value_ladder, ExtensionPair, InstanceSession, PairKind,
    DEFAULT_FIT_WINDOW,
};
use crate::config::{load_config, FileConfig};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::models::{dense_boundary_op, BoundaryOpSpec, ModelConfig, ModelInstance};
use crate::report::{singular_value_csv, ResultRecord, RunManifest, RunReport};
use crate::triple::{KernelChoice, QuasiTriple, Realization, RobinForm};

/// Default spectral point: safely below the spectra of all shipped models.
const DEFAULT_LAMBDA: Complex64 = Complex64::new(-1.0, 0.0);

const DEFAULT_GREEN_TOL: f64 = 1e-12;
const DEFAULT_KREIN_TOL: f64 = 1e-10;
const DEFAULT_TRACE_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "weyltrace",
    version,
    about = "Verify boundary-triple identities on discretized elliptic models",
    after_help = "Exit codes: 0 = all checks passed, 1 = a check failed, \
                  2 = usage/configuration error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
struct CommonArgs {
    /// Model configuration file.
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    /// Write the JSON report to this path instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seed for randomized checks (reports are byte-identical per seed).
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

/// Extension pair selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PairArg {
    /// Neumann vs Dirichlet.
    Dn,
    /// Robin vs Neumann (needs [boundary_op]).
    Rn,
    /// Robin vs Robin (needs [boundary_op] and [boundary_op2]).
    Rr,
    /// Robin vs Dirichlet (needs [boundary_op]).
    Rd,
}

fn parse_lambda(text: &str) -> std::result::Result<Complex64, String> {
    let mut parts = text.splitn(2, ',');
    let re = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("expected `re` or `re,im`, got `{text}`"))?;
    let im = match parts.next() {
        Some(part) => part
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("expected `re` or `re,im`, got `{text}`"))?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the abstract Green identity on randomized vector pairs.
    Green {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of random vector pairs (must be positive).
        #[arg(long, default_value_t = 32)]
        samples: usize,
        /// Residual tolerance.
        #[arg(long, default_value_t = DEFAULT_GREEN_TOL)]
        tol: f64,
    },
    /// Verify the resolvent-difference formulas against direct resolvents.
    Krein {
        #[command(flatten)]
        common: CommonArgs,
        /// Pair to verify: `dn`, or `rn` for both Robin middle forms.
        #[arg(long, value_enum, default_value_t = PairArg::Dn)]
        pair: PairArg,
        /// Spectral point `re` or `re,im`; repeatable.
        #[arg(long = "lambda", value_parser = parse_lambda, allow_hyphen_values = true)]
        lambda: Vec<Complex64>,
        /// Relative residual tolerance.
        #[arg(long, default_value_t = DEFAULT_KREIN_TOL)]
        tol: f64,
    },
    /// Check the trace formula for an extension pair at (m, lambda).
    Trace {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = PairArg::Dn)]
        pair: PairArg,
        /// Resolvent power.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Spectral point `re` or `re,im`; repeatable.
        #[arg(long = "lambda", value_parser = parse_lambda, allow_hyphen_values = true)]
        lambda: Vec<Complex64>,
        /// Relative discrepancy tolerance.
        #[arg(long, default_value_t = DEFAULT_TRACE_TOL)]
        tol: f64,
    },
    /// Measure singular-value decay across a refinement ladder.
    Decay {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = PairArg::Dn)]
        pair: PairArg,
        /// Resolvent power.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Ladder length (at least 2).
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Spectral point `re` or `re,im` (exactly one).
        #[arg(long = "lambda", value_parser = parse_lambda, allow_hyphen_values = true)]
        lambda: Vec<Complex64>,
        /// Tail-window fraction for the exponent fit.
        #[arg(long, default_value_t = DEFAULT_FIT_WINDOW)]
        window: f64,
    },
    /// Run every check the configuration supports.
    All {
        #[command(flatten)]
        common: CommonArgs,
        /// Resolvent power for trace checks.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Spectral point `re` or `re,im`; repeatable.
        #[arg(long = "lambda", value_parser = parse_lambda, allow_hyphen_values = true)]
        lambda: Vec<Complex64>,
        /// Number of random vector pairs for the Green check.
        #[arg(long, default_value_t = 32)]
        samples: usize,
        /// Ladder length for decay checks on mode-resolved models.
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
}

/// Run the CLI; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    let started = Instant::now();
    match execute(cli.command) {
        Ok(report) => {
            for record in &report.results {
                eprintln!("{}", record.summary_line());
            }
            eprintln!(
                "weyltrace: {} in {:.1?}",
                if report.pass { "pass" } else { "FAIL" },
                started.elapsed()
            );
            if report.pass {
                0
            } else {
                1
            }
        }
        Err(err) => {
            eprintln!("weyltrace: error: {err}");
            2
        }
    }
}

fn require_b1(cfg: &FileConfig) -> Result<BoundaryOpSpec> {
    cfg.boundary_op.clone().ok_or_else(|| {
        Error::Config("this pair needs a [boundary_op] section in the config".into())
    })
}

fn require_b2(cfg: &FileConfig) -> Result<BoundaryOpSpec> {
    cfg.boundary_op2.clone().ok_or_else(|| {
        Error::Config("a Robin/Robin pair needs a [boundary_op2] section in the config".into())
    })
}

fn extension_pair(cfg: &FileConfig, pair: PairArg) -> Result<ExtensionPair> {
    Ok(match pair {
        PairArg::Dn => ExtensionPair::NeumannDirichlet,
        PairArg::Rn => ExtensionPair::RobinNeumann { b: require_b1(cfg)? },
        PairArg::Rr => ExtensionPair::RobinRobin {
            b1: require_b1(cfg)?,
            b2: require_b2(cfg)?,
        },
        PairArg::Rd => ExtensionPair::RobinDirichlet { b: require_b1(cfg)? },
    })
}

fn lambdas_or_default(lambda: Vec<Complex64>) -> Vec<Complex64> {
    if lambda.is_empty() {
        vec![DEFAULT_LAMBDA]
    } else {
        lambda
    }
}

fn manifest_for(command: &str, common: &CommonArgs, cfg: &FileConfig) -> RunManifest {
    let mut manifest = RunManifest::new(
        command,
        &common.model.display().to_string(),
        cfg.model.clone(),
        common.seed,
    );
    manifest.gamma1_scale = cfg.gamma1_scale;
    manifest.boundary_op = cfg.boundary_op.as_ref().map(|b| b.describe());
    manifest.boundary_op2 = cfg.boundary_op2.as_ref().map(|b| b.describe());
    if let Some(out) = &common.out {
        manifest.outputs.push(out.display().to_string());
    }
    manifest
}

/// Residuals of the boundary-side (Krein) reconstructions against directly
/// computed resolvent differences, for every requested `lambda`.  The
/// eigendecompositions behind the direct side are built once per block and
/// reused across spectral points and middle forms; for mode models the worst
/// block residual is reported.
fn krein_records(
    instance: &ModelInstance,
    cfg: &FileConfig,
    pair: PairArg,
    lambdas: &[Complex64],
    tol: f64,
) -> Result<Vec<ResultRecord>> {
    let forms: &[(RobinForm, &str)] = match pair {
        PairArg::Dn => &[(RobinForm::TransformFirst, "gamma M^-1 gamma*")],
        PairArg::Rn => &[
            (RobinForm::TransformFirst, "(I - B M)^-1 B"),
            (RobinForm::OperatorFirst, "B (I - M B)^-1"),
        ],
        PairArg::Rr | PairArg::Rd => {
            return Err(Error::Config(
                "krein verifies the primitive formulas only (pairs dn, rn); \
                 use `trace` for composite pairs"
                    .into(),
            ))
        }
    };
    let b_spec = match pair {
        PairArg::Rn => Some(require_b1(cfg)?),
        _ => None,
    };
    let triples: Vec<&QuasiTriple> = match instance {
        ModelInstance::Dense(tr) => vec![tr],
        ModelInstance::Modes(blocks) => blocks.iter().map(|b| &b.triple).collect(),
    };

    let mut worst = vec![0.0f64; lambdas.len() * forms.len()];
    for tr in triples {
        let robin_param = b_spec
            .as_ref()
            .map(|spec| dense_boundary_op(spec, tr))
            .transpose()?;
        let (left, right) = match pair {
            PairArg::Dn => (
                Realization::from_restriction(tr, KernelChoice::Gamma0)?,
                Realization::from_restriction(tr, KernelChoice::Gamma1)?,
            ),
            _ => (
                Realization::from_restriction(
                    tr,
                    KernelChoice::Robin(robin_param.as_ref().expect("rn has an operator")),
                )?,
                Realization::from_restriction(tr, KernelChoice::Gamma0)?,
            ),
        };
        for (li, &lambda) in lambdas.iter().enumerate() {
            let direct = left
                .resolvent_power(lambda, 1)?
                .sub(&right.resolvent_power(lambda, 1)?)?;
            let scale = 1.0 + direct.norm_fro();
            for (fi, (form, _)) in forms.iter().enumerate() {
                let formula: CMatrix = match pair {
                    PairArg::Dn => tr.krein_dn(lambda)?,
                    _ => tr.krein_robin(
                        robin_param.as_ref().expect("rn has an operator"),
                        lambda,
                        *form,
                    )?,
                };
                let residual = direct.sub(&formula)?.norm_fro() / scale;
                let slot = li * forms.len() + fi;
                worst[slot] = worst[slot].max(residual);
            }
        }
    }

    let pair_code = match pair {
        PairArg::Dn => PairKind::NeumannDirichlet.code(),
        _ => PairKind::RobinNeumann.code(),
    };
    let mut records = Vec::new();
    for (li, &lambda) in lambdas.iter().enumerate() {
        for (fi, (_, label)) in forms.iter().enumerate() {
            let residual = worst[li * forms.len() + fi];
            records.push(ResultRecord::Krein {
                pair: pair_code.into(),
                form: (*label).into(),
                lambda: [lambda.re, lambda.im],
                residual,
                tol,
                pass: residual <= tol,
            });
        }
    }
    Ok(records)
}

fn trace_records(
    instance: &ModelInstance,
    cfg: &FileConfig,
    pair: &ExtensionPair,
    m: usize,
    lambdas: &[Complex64],
    tol: f64,
) -> Result<Vec<ResultRecord>> {
    let session = InstanceSession::new(instance, pair)?;
    let mut records = Vec::new();
    for &lambda in lambdas {
        let reference = continuum_trace_reference(&cfg.model, pair, m, lambda);
        let report = session.trace_check(m, lambda, reference)?;
        records.push(ResultRecord::from_trace(&report, tol));
    }
    Ok(records)
}

fn decay_record(
    cfg: &FileConfig,
    pair: &ExtensionPair,
    m: usize,
    lambda: Complex64,
    levels: usize,
    window: f64,
) -> Result<(ResultRecord, String)> {
    if cfg.gamma1_scale != 1.0 {
        return Err(Error::Config(
            "decay ladders rebuild the model per level; gamma1_scale is not supported here"
                .into(),
        ));
    }
    if !matches!(cfg.model, ModelConfig::DiskModes { .. }) {
        return Err(Error::Config(
            "decay ladders run on mode-resolved models (disk_modes): dense geometries \
             need full eigensolves at every refined level, and 1-D models have no \
             decay prediction (their boundary is finite-rank)"
                .into(),
        ));
    }
    let report = singular_value_ladder(&cfg.model, pair, m, lambda, levels, window)?;
    let csv = singular_value_csv(&report);
    Ok((ResultRecord::from_decay(&report), csv))
}

fn write_outputs(
    report: &mut RunReport,
    out: Option<&Path>,
    csv: Option<&str>,
) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(csv) = csv {
                let csv_path = path.with_extension("csv");
                report
                    .manifest
                    .outputs
                    .push(csv_path.display().to_string());
                // Re-derive the verdict after manifest edits (pass is fixed,
                // but keep the JSON consistent with what we write).
                std::fs::write(&csv_path, csv)?;
            }
            std::fs::write(path, report.to_json())?;
        }
        None => {
            print!("{}", report.to_json());
        }
    }
    Ok(())
}

fn execute(command: Command) -> Result<RunReport> {
    match command {
        Command::Green {
            common,
            samples,
            tol,
        } => {
            if samples == 0 {
                return Err(Error::Config(
                    "green needs at least one sample (--samples >= 1)".into(),
                ));
            }
            let cfg = load_config(&common.model)?;
            let instance = cfg.build_instance()?;
            let mut manifest = manifest_for("green", &common, &cfg);
            manifest.samples = Some(samples);
            manifest.tol = Some(tol);
            let residual = instance.max_green_residual(samples, common.seed);
            let record = ResultRecord::from_green(residual, samples, cfg.gamma1_scale, tol);
            let mut report = RunReport::new(manifest, vec![record]);
            write_outputs(&mut report, common.out.as_deref(), None)?;
            Ok(report)
        }
        Command::Krein {
            common,
            pair,
            lambda,
            tol,
        } => {
            let cfg = load_config(&common.model)?;
            let instance = cfg.build_instance()?;
            let lambdas = lambdas_or_default(lambda);
            let mut manifest = manifest_for("krein", &common, &cfg);
            manifest.pair = Some(format!("{pair:?}").to_lowercase());
            manifest.lambda = lambdas.iter().map(|l| [l.re, l.im]).collect();
            manifest.tol = Some(tol);
            let records = krein_records(&instance, &cfg, pair, &lambdas, tol)?;
            let mut report = RunReport::new(manifest, records);
            write_outputs(&mut report, common.out.as_deref(), None)?;
            Ok(report)
        }
        Command::Trace {
            common,
            pair,
            m,
            lambda,
            tol,
        } => {
            let cfg = load_config(&common.model)?;
            let instance = cfg.build_instance()?;
            let ext = extension_pair(&cfg, pair)?;
            let lambdas = lambdas_or_default(lambda);
            let mut manifest = manifest_for("trace", &common, &cfg);
            manifest.pair = Some(ext.kind().code().into());
            manifest.m = Some(m);
            manifest.lambda = lambdas.iter().map(|l| [l.re, l.im]).collect();
            manifest.tol = Some(tol);
            let records = trace_records(&instance, &cfg, &ext, m, &lambdas, tol)?;
            let mut report = RunReport::new(manifest, records);
            write_outputs(&mut report, common.out.as_deref(), None)?;
            Ok(report)
        }
        Command::Decay {
            common,
            pair,
            m,
            levels,
            lambda,
            window,
        } => {
            let cfg = load_config(&common.model)?;
            let ext = extension_pair(&cfg, pair)?;
            let lambdas = lambdas_or_default(lambda);
            if lambdas.len() != 1 {
                return Err(Error::Config(
                    "decay takes exactly one --lambda (the CSV is per-level, per-rank)".into(),
                ));
            }
            let mut manifest = manifest_for("decay", &common, &cfg);
            manifest.pair = Some(ext.kind().code().into());
            manifest.m = Some(m);
            manifest.lambda = vec![[lambdas[0].re, lambdas[0].im]];
            manifest.levels = Some(levels);
            manifest.window = Some(window);
            let (record, csv) = decay_record(&cfg, &ext, m, lambdas[0], levels, window)?;
            let mut report = RunReport::new(manifest, vec![record]);
            write_outputs(&mut report, common.out.as_deref(), Some(&csv))?;
            Ok(report)
        }
        Command::All {
            common,
            m,
            lambda,
            samples,
            levels,
        } => {
            if samples == 0 {
                return Err(Error::Config(
                    "green needs at least one sample (--samples >= 1)".into(),
                ));
            }
            let cfg = load_config(&common.model)?;
            let instance = cfg.build_instance()?;
            let lambdas = lambdas_or_default(lambda);
            let mut manifest = manifest_for("all", &common, &cfg);
            manifest.m = Some(m);
            manifest.lambda = lambdas.iter().map(|l| [l.re, l.im]).collect();
            manifest.samples = Some(samples);
            manifest.levels = Some(levels);

            let mut records = Vec::new();
            let residual = instance.max_green_residual(samples, common.seed);
            records.push(ResultRecord::from_green(
                residual,
                samples,
                cfg.gamma1_scale,
                DEFAULT_GREEN_TOL,
            ));

            records.extend(krein_records(
                &instance,
                &cfg,
                PairArg::Dn,
                &lambdas,
                DEFAULT_KREIN_TOL,
            )?);
            if cfg.boundary_op.is_some() {
                records.extend(krein_records(
                    &instance,
                    &cfg,
                    PairArg::Rn,
                    &lambdas,
                    DEFAULT_KREIN_TOL,
                )?);
            }

            let mut pairs = vec![ExtensionPair::NeumannDirichlet];
            if let Some(b) = &cfg.boundary_op {
                pairs.push(ExtensionPair::RobinNeumann { b: b.clone() });
                pairs.push(ExtensionPair::RobinDirichlet { b: b.clone() });
                if let Some(b2) = &cfg.boundary_op2 {
                    pairs.push(ExtensionPair::RobinRobin {
                        b1: b.clone(),
                        b2: b2.clone(),
                    });
                }
            }
            for pair in &pairs {
                records.extend(trace_records(&instance, &cfg, pair, m, &lambdas, DEFAULT_TRACE_TOL)?);
            }

            // Decay ladders rebuild the model per level, which only scales on
            // the mode-resolved geometry; dense geometries stop at trace checks.
            let mut csv = None;
            if matches!(instance, ModelInstance::Modes(_)) && cfg.gamma1_scale == 1.0 {
                let mut merged = String::new();
                for pair in &pairs {
                    let (record, pair_csv) =
                        decay_record(&cfg, pair, m, lambdas[0], levels, DEFAULT_FIT_WINDOW)?;
                    records.push(record);
                    merged.push_str(&pair_csv);
                }
                csv = Some(merged);
            }

            let mut report = RunReport::new(manifest, records);
            write_outputs(&mut report, common.out.as_deref(), csv.as_deref())?;
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn lambda_parser_accepts_real_and_complex_forms() {
        assert_eq!(parse_lambda("-1").unwrap(), c64(-1.0, 0.0));
        assert_eq!(parse_lambda("-5,2").unwrap(), c64(-5.0, 2.0));
        assert_eq!(parse_lambda(" 0.5 , -0.25 ").unwrap(), c64(0.5, -0.25));
        assert!(parse_lambda("").is_err());
        assert!(parse_lambda("1;2").is_err());
        assert!(parse_lambda("1,2,3").is_err());
    }

    #[test]
    fn robin_pairs_demand_their_config_sections() {
        let cfg = FileConfig {
            model: crate::models::ModelConfig::Sl1d {
                n: 4,
                length: 1.0,
                a: crate::models::Coeff::Const(1.0),
                a0: crate::models::Coeff::Const(0.0),
            },
            gamma1_scale: 1.0,
            boundary_op: None,
            boundary_op2: None,
        };
        assert!(extension_pair(&cfg, PairArg::Dn).is_ok());
        assert!(matches!(
            extension_pair(&cfg, PairArg::Rn),
            Err(Error::Config(msg)) if msg.contains("[boundary_op]")
        ));
        assert!(matches!(
            extension_pair(&cfg, PairArg::Rr),
            Err(Error::Config(_))
        ));

        let with_b1 = FileConfig {
            boundary_op: Some(BoundaryOpSpec::multiplication_const(1.0)),
            ..cfg
        };
        assert!(extension_pair(&with_b1, PairArg::Rn).is_ok());
        assert!(matches!(
            extension_pair(&with_b1, PairArg::Rr),
            Err(Error::Config(msg)) if msg.contains("[boundary_op2]")
        ));
    }

    #[test]
    fn krein_rejects_composite_pairs() {
        let cfg = FileConfig {
            model: crate::models::ModelConfig::Sl1d {
                n: 6,
                length: 1.0,
                a: crate::models::Coeff::Const(1.0),
                a0: crate::models::Coeff::Const(0.0),
            },
            gamma1_scale: 1.0,
            boundary_op: Some(BoundaryOpSpec::multiplication_const(1.0)),
            boundary_op2: Some(BoundaryOpSpec::multiplication_const(2.0)),
        };
        let instance = cfg.build_instance().unwrap();
        for pair in [PairArg::Rr, PairArg::Rd] {
            let err =
                krein_records(&instance, &cfg, pair, &[DEFAULT_LAMBDA], 1e-10).unwrap_err();
            assert!(matches!(err, Error::Config(msg) if msg.contains("primitive")));
        }
    }

    #[test]
    fn krein_residuals_are_tiny_on_a_healthy_model() {
        let cfg = FileConfig {
            model: crate::models::ModelConfig::Sl1d {
                n: 12,
                length: 1.0,
                a: crate::models::Coeff::Const(1.0),
                a0: crate::models::Coeff::Const(0.0),
            },
            gamma1_scale: 1.0,
            boundary_op: Some(BoundaryOpSpec::multiplication_const(1.0)),
            boundary_op2: None,
        };
        let instance = cfg.build_instance().unwrap();
        let records = krein_records(
            &instance,
            &cfg,
            PairArg::Rn,
            &[c64(-1.0, 0.0), c64(-2.0, 1.0)],
            DEFAULT_KREIN_TOL,
        )
        .unwrap();
        assert_eq!(records.len(), 4); // two lambdas x two middle forms
        for record in &records {
            assert!(record.pass(), "unexpected failure: {record:?}");
        }
    }
}
