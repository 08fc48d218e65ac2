//! Command-line front end. Every command writes one JSON document.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::Prime;
use crate::cycle::{cycle_closed_form, cycle_solver, selector};
use crate::error::{Error, Result};
use crate::qexp::{QExpJsonError, QExpansion};
use crate::serre::{omega4_digits, LocalRepDescriptor};
use crate::symbolic::verify_local;

#[derive(Debug, Parser)]
#[command(name = "siegel-theta", version, about = "Theta operators, theta cycles and Serre weights for mod-p Siegel modular forms")]
pub struct Cli {
    #[command(subcommand)]
    pub job: Job,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Job {
    /// Apply theta to q-expansion files.
    ThetaApply(ThetaApply),
    /// Report whether q-expansions are weakly p-singular within their truncation.
    PsingularCheck(Inputs),
    /// Compute a theta cycle.
    Cycle(CycleArgs),
    /// Compute classical Serre weights from descriptor files.
    SerreWeight(SerreArgs),
    /// Compare the local coefficient formulas symbolically.
    VerifyLocal(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Inputs {
    /// Input JSON files; several files are processed in parallel.
    #[arg(long = "in", required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ThetaApply {
    #[command(flatten)]
    pub io: Inputs,
    /// Number of applications.
    #[arg(long, default_value_t = 1)]
    pub iterations: u32,
}

#[derive(Debug, Clone, Args)]
pub struct CycleArgs {
    #[arg(long)]
    pub p: i64,
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub k: i64,
    #[arg(long)]
    pub semi_ordinary: bool,
    /// Enumerate low-point structures instead of using the closed form.
    #[arg(long)]
    pub solver: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SerreArgs {
    #[command(flatten)]
    pub io: Inputs,
    /// Also report the cycle position selected by w.
    #[arg(long)]
    pub with_selector: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
    pub r_max: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Canonical JSON text: keys sorted, compact, trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string(&v).expect("serializable");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_qexp(path: &Path) -> Result<QExpansion> {
    match QExpansion::from_json(&read(path)?) {
        Ok(f) => Ok(f),
        Err(QExpJsonError::Syntax(e)) if e.classify() == serde_json::error::Category::Data => {
            Err(Error::InvalidDocument {
                path: path.to_path_buf(),
                message: e.to_string(),
            })
        }
        Err(QExpJsonError::Syntax(e)) => Err(Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        }),
        Err(QExpJsonError::Invalid(e)) => Err(e.into()),
    }
}

fn load_descriptor(path: &Path) -> Result<LocalRepDescriptor> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    serde_json::from_value(value).map_err(|e| Error::InvalidDocument {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Runs `f` on every input in parallel, keeping input order. A single input
/// yields its value directly, several yield an array.
fn batch<F>(inputs: &[PathBuf], f: F) -> Result<Value>
where
    F: Fn(&Path) -> Result<Value> + Sync,
{
    let results: Vec<Result<Value>> = inputs.par_iter().map(|p| f(p)).collect();
    let mut values = Vec::with_capacity(results.len());
    for r in results {
        values.push(r?);
    }
    Ok(if values.len() == 1 {
        values.pop().expect("one value")
    } else {
        Value::Array(values)
    })
}

fn serre_output(d: &LocalRepDescriptor, with_selector: bool) -> Result<Value> {
    let w = d.serre_weight()?;
    let mut out = json!({"k1": w.k1, "k2": w.k2, "w": w.w});
    if let LocalRepDescriptor::Irreducible { p, a, .. } = d {
        let (digits, distinct) = omega4_digits(*p, *a);
        out["omega4"] = json!({"digits": digits, "distinct": distinct});
    }
    if with_selector {
        out["selector"] = match selector(d.p(), w.w) {
            Ok((j, theta3)) => json!({"j": j, "use_theta3": theta3}),
            Err(_) => Value::Null,
        };
    }
    Ok(out)
}

/// Executes a job and returns the document to print.
pub fn execute(job: &Job) -> Result<Value> {
    match job {
        Job::ThetaApply(args) => batch(&args.io.inputs, |path| {
            let f = load_qexp(path)?;
            Ok(serde_json::to_value(f.theta_iterate(args.iterations)).expect("serializable"))
        }),
        Job::PsingularCheck(args) => batch(&args.inputs, |path| {
            let f = load_qexp(path)?;
            Ok(json!({
                "weakly_p_singular": f.is_weakly_p_singular(),
                "is_zero": f.is_zero(),
                "scope": "within max_trace",
                "max_trace": f.max_trace(),
            }))
        }),
        Job::Cycle(args) => {
            let p = Prime::new(args.p)?;
            if args.solver {
                let results = cycle_solver(p, args.r, args.k, args.semi_ordinary)?;
                Ok(serde_json::to_value(results).expect("serializable"))
            } else {
                let result = cycle_closed_form(p, args.r, args.k, args.semi_ordinary)?;
                Ok(serde_json::to_value(result).expect("serializable"))
            }
        }
        Job::SerreWeight(args) => batch(&args.io.inputs, |path| {
            serre_output(&load_descriptor(path)?, args.with_selector)
        }),
        Job::VerifyLocal(args) => {
            let report = verify_local(args.r_max)?;
            Ok(serde_json::to_value(report).expect("serializable"))
        }
    }
}

fn out_path(job: &Job) -> Option<&Path> {
    match job {
        Job::ThetaApply(a) => a.io.out.as_deref(),
        Job::PsingularCheck(a) => a.out.as_deref(),
        Job::SerreWeight(a) => a.io.out.as_deref(),
        Job::VerifyLocal(a) => a.out.as_deref(),
        Job::Cycle(_) => None,
    }
}

fn error_document(e: &Error) -> String {
    canonical_json(&json!({"error": {"code": e.code(), "message": e.to_string()}}))
}

/// Runs a job, writing its output (or an error object) to `stdout` or the
/// requested file. Returns the process exit code.
pub fn run(job: &Job, stdout: &mut dyn Write) -> i32 {
    let result = execute(job).and_then(|value| {
        let text = canonical_json(&value);
        if let Job::VerifyLocal(_) = job {
            if value["ok"] != Value::Bool(true) {
                let _ = stdout.write_all(text.as_bytes());
                return Err(Error::Verification(
                    "asserted blocks differ or pole order out of bounds".into(),
                ));
            }
        }
        match out_path(job) {
            Some(path) => fs::write(path, &text).map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            }),
            None => stdout.write_all(text.as_bytes()).map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            log::debug!("{e}");
            let _ = stdout.write_all(error_document(&e).as_bytes());
            e.exit_code()
        }
    }
}

/// Seed for randomized checks: `THETA_SEED` if set, otherwise `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("THETA_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}
