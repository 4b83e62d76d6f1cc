//! Command-line front end.
//!
//! Results go to stdout (or `--out`), errors to stderr as one-line JSON
//! objects `{"error": <kind>, "message": ...}`. Exit status is 0 on success,
//! 1 on a domain error or failed verification, 2 on a usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::{ContextKind, ErrorKind};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{build_c_table, trace_convergence, write_traces_csv, Parity};
use crate::deriv::build_b_table;
use crate::error::Error;
use crate::kernel::{phi_eval_d, phi_eval_inf, KernelSpec, Sphere};
use crate::sequence::SequenceModel;
use crate::transform::{classify_d, classify_inf, transform_sequence};
use crate::verify::{Suite, Verifier};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_TRACE_JS: &str = "256,512,1024,2048";

#[derive(Debug, Parser)]
#[command(name = "spherekernel", version, about = "Positive definite functions on spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
    Both,
}

/// `inf` for the Hilbert sphere or a positive dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereArg(pub Sphere);

impl FromStr for SphereArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "inf" {
            return Ok(SphereArg(Sphere::Infinite));
        }
        match s.parse::<u32>() {
            Ok(d) if d >= 1 => Ok(SphereArg(Sphere::Dimension(d))),
            _ => Err(format!("expected `inf` or a positive dimension, got `{s}`")),
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Absolute tolerance for truncated series.
    #[arg(long, env = "SPHEREKERNEL_TOL", default_value_t = DEFAULT_TOL, value_parser = positive_f64, allow_negative_numbers = true)]
    pub tol: f64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the kernel at one or more angles.
    Eval {
        /// Coefficient model as inline JSON or `@path`.
        #[arg(long)]
        model: String,
        #[arg(long, default_value = "inf")]
        sphere: SphereArg,
        /// Comma-separated angles in [0, pi].
        #[arg(long, value_delimiter = ',', required = true, value_parser = angle, allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Derivative coefficient table of cos^j.
    Btable {
        #[arg(long)]
        j: u64,
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Table of leading constants.
    Ctable {
        #[arg(long)]
        max_n: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Convergence traces of the scaled moment sums.
    Asymptotics {
        /// One value of l; overrides --ell-max.
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long, default_value_t = 5)]
        ell_max: u32,
        #[arg(long, value_enum, default_value_t = ParityArg::Both)]
        parity: ParityArg,
        #[arg(long, value_delimiter = ',', default_value = DEFAULT_TRACE_JS)]
        js: Vec<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Circle coefficients of a Hilbert-sphere kernel.
    Transform {
        #[arg(long)]
        model: String,
        /// Largest circle index; chosen from the tolerance when omitted.
        #[arg(long)]
        max_index: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Smoothness at the origin from coefficient decay.
    Classify {
        #[arg(long)]
        model: String,
        /// `inf` reads cosine-power coefficients, a dimension reads
        /// Gegenbauer coefficients.
        #[arg(long, default_value = "inf")]
        sphere: SphereArg,
        #[arg(long, default_value_t = 6)]
        ell_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Run the property suites.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Where to write the convergence-trace CSV of the asymptotics suite.
        #[arg(long, default_value = "convergence_traces.csv")]
        traces: PathBuf,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

fn angle(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if (0.0..=std::f64::consts::PI).contains(&v) => Ok(v),
        _ => Err(format!("expected an angle in [0, pi], got `{s}`")),
    }
}

/// A failure with its exit status.
#[derive(Debug)]
pub enum Failure {
    Usage { flag: Option<String>, message: String },
    Domain(Error),
    Io(String),
    /// Verification ran but some checks failed.
    Checks,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage { .. } => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Failure::Usage { flag, message } => {
                let mut v = json!({ "error": "UsageError", "message": message });
                if let Some(f) = flag {
                    v["flag"] = json!(f);
                }
                v
            }
            Failure::Domain(e) => json!({ "error": e.name(), "message": e.to_string() }),
            Failure::Io(m) => json!({ "error": "IoError", "message": m }),
            Failure::Checks => json!({ "error": "VerificationFailed", "message": "one or more checks failed" }),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn usage(flag: &str, message: String) -> Failure {
    Failure::Usage {
        flag: Some(flag.into()),
        message,
    }
}

/// Parses `--model`, either inline JSON or `@path` to a JSON file.
pub fn parse_model(arg: &str) -> Result<SequenceModel, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| usage("--model", format!("cannot read {path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| usage("--model", format!("invalid model: {e}")))
}

fn sink(out: &Option<PathBuf>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| io_failure(path, e)),
        None => stdout
            .write_all(bytes)
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn json_line<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string(value).expect("report types serialize");
    s.push('\n');
    s.into_bytes()
}

fn csv_bytes<T: AsRef<str>>(header: &[&str], rows: impl IntoIterator<Item = Vec<T>>) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Failure::Io(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(row.iter().map(|c| c.as_ref())).map_err(err)?;
    }
    w.into_inner().map_err(|e| Failure::Io(format!("csv: {e}")))
}

#[derive(Serialize)]
struct CellOut {
    n1: u32,
    n2: u32,
    value: String,
}

fn exact_cells<'a>(cells: impl Iterator<Item = ((u32, u32), &'a num_bigint::BigInt)>) -> Vec<CellOut> {
    cells
        .map(|((n1, n2), v)| CellOut {
            n1,
            n2,
            value: v.to_string(),
        })
        .collect()
}

fn run_command(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Eval {
            model,
            sphere,
            theta,
            common,
        } => {
            let model = parse_model(&model)?;
            let spec = KernelSpec::new(sphere.0, model)?;
            let values = theta
                .iter()
                .map(|&t| match sphere.0 {
                    Sphere::Infinite => phi_eval_inf(&spec, t, common.tol),
                    Sphere::Dimension(_) => phi_eval_d(&spec, t, common.tol),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let bytes = match common.format {
                Format::Json => {
                    let sphere = match sphere.0 {
                        Sphere::Infinite => json!("inf"),
                        Sphere::Dimension(d) => json!(d),
                    };
                    let rows: Vec<Value> = theta
                        .iter()
                        .zip(&values)
                        .map(|(t, v)| json!({ "theta": t, "value": v }))
                        .collect();
                    json_line(&json!({ "sphere": sphere, "tol": common.tol, "values": rows }))
                }
                Format::Csv => csv_bytes(
                    &["theta", "value"],
                    theta.iter().zip(&values).map(|(t, v)| vec![t.to_string(), v.to_string()]),
                )?,
            };
            sink(&common.out, stdout, &bytes)
        }
        Command::Btable { j, order, common } => {
            let table = build_b_table(j, order)?;
            let bytes = match common.format {
                Format::Json => json_line(&json!({
                    "j": j,
                    "max_order": order,
                    "cells": exact_cells(table.cells()),
                })),
                Format::Csv => {
                    let mut buf = Vec::new();
                    table.write_csv(&mut buf)?;
                    buf
                }
            };
            sink(&common.out, stdout, &bytes)
        }
        Command::Ctable { max_n, common } => {
            let table = build_c_table(max_n)?;
            let bytes = match common.format {
                Format::Json => json_line(&json!({ "max_n": max_n, "cells": exact_cells(table.cells()) })),
                Format::Csv => {
                    let mut buf = Vec::new();
                    table.write_csv(&mut buf)?;
                    buf
                }
            };
            sink(&common.out, stdout, &bytes)
        }
        Command::Asymptotics {
            ell,
            ell_max,
            parity,
            js,
            common,
        } => {
            let ells: Vec<u32> = match ell {
                Some(l) => vec![l],
                None => (1..=ell_max).collect(),
            };
            let parities: &[Parity] = match parity {
                ParityArg::Even => &[Parity::Even],
                ParityArg::Odd => &[Parity::Odd],
                ParityArg::Both => &[Parity::Even, Parity::Odd],
            };
            let mut traces = Vec::new();
            for &l in &ells {
                for &p in parities {
                    traces.push(trace_convergence(l, p, &js)?);
                }
            }
            let bytes = match common.format {
                Format::Json => json_line(&json!({ "traces": traces })),
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_traces_csv(&traces, &mut buf)?;
                    buf
                }
            };
            sink(&common.out, stdout, &bytes)
        }
        Command::Transform {
            model,
            max_index,
            common,
        } => {
            let model = parse_model(&model)?;
            let seq = transform_sequence(&model, max_index, common.tol)?;
            let bytes = match common.format {
                Format::Json => json_line(&seq),
                Format::Csv => csv_bytes(
                    &["n", "value", "error_bound"],
                    seq.terms
                        .iter()
                        .map(|t| vec![t.index.to_string(), t.value.to_string(), t.error_bound.to_string()]),
                )?,
            };
            sink(&common.out, stdout, &bytes)
        }
        Command::Classify {
            model,
            sphere,
            ell_max,
            common,
        } => {
            let model = parse_model(&model)?;
            let report = match sphere.0 {
                Sphere::Infinite => classify_inf(&model, ell_max)?,
                Sphere::Dimension(_) => classify_d(&model, ell_max)?,
            };
            let bytes = match common.format {
                Format::Json => json_line(&report),
                Format::Csv => csv_bytes(
                    &["ell", "converges", "value", "kind"],
                    report.per_ell.iter().map(|v| {
                        vec![
                            v.ell.to_string(),
                            v.converges.to_string(),
                            v.value.to_string(),
                            serde_json::to_value(v.kind).unwrap().as_str().unwrap_or_default().to_string(),
                        ]
                    }),
                )?,
            };
            sink(&common.out, stdout, &bytes)
        }
        Command::Verify { suite, traces, json } => {
            let report = Verifier::default().run(suite);
            let mut text = String::new();
            for check in &report.checks {
                text.push_str(&format!("{check}\n"));
            }
            if !report.traces.is_empty() {
                let mut buf = Vec::new();
                write_traces_csv(&report.traces, &mut buf)?;
                fs::write(&traces, buf).map_err(|e| io_failure(&traces, e))?;
                text.push_str(&format!("traces written to {}\n", traces.display()));
            }
            let total: f64 = report.checks.iter().map(|c| c.seconds).sum();
            let passed = report.checks.iter().filter(|c| c.passed).count();
            text.push_str(&format!(
                "{passed}/{} checks passed in {total:.2}s\n",
                report.checks.len()
            ));
            sink(&None, stdout, text.as_bytes())?;
            if let Some(path) = json {
                fs::write(&path, json_line(&report)).map_err(|e| io_failure(&path, e))?;
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
    }
}

fn clap_failure(e: &clap::Error) -> Failure {
    let flag = e
        .get(ContextKind::InvalidArg)
        .and_then(|a| a.to_string().split_whitespace().next().map(str::to_string));
    let message = e
        .render()
        .to_string()
        .lines()
        .next()
        .unwrap_or_default()
        .trim_start_matches("error: ")
        .to_string();
    Failure::Usage { flag, message }
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
        Err(e) => {
            let failure = clap_failure(&e);
            let _ = stderr.write_all(&json_line(&failure.to_json()));
            return failure.exit_code();
        }
    };
    match run_command(cli.command, stdout) {
        Ok(()) => 0,
        Err(failure) => {
            let _ = stderr.write_all(&json_line(&failure.to_json()));
            failure.exit_code()
        }
    }
}
