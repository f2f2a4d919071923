//! Argument parsing and file plumbing for the `naxray` binary.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use naxray_core::reconstruction::Annulus;

use crate::commands::{self, Method};
use crate::error::{CliError, CliResult};
use crate::json;

#[derive(Debug, Parser)]
#[command(name = "naxray", version, about = "Exact non-abelian X-ray tomography on the integer lattice")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a seeded hidden field.
    Phantom(PhantomArgs),
    /// Build the ray plan for cell-chord reconstruction.
    Plan(PlanArgs),
    /// Project a field on the ray family of a method.
    Forward(ForwardArgs),
    /// Invert a sinogram.
    Reconstruct(ReconstructArgs),
    /// Compare a field with another field, or replay it against a sinogram.
    Verify(VerifyArgs),
    /// Two distinct single-cell fields with the same cell-chord data.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Args)]
pub struct PhantomArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub r: f64,
    /// Norm bound for the additive fields used by `--method star`.
    #[arg(long = "M", default_value_t = 1.0)]
    pub m_bound: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Method the field is meant for; `star` draws an additive field.
    #[arg(long, value_enum, default_value_t = Method::Layers)]
    pub method: Method,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long)]
    pub r: f64,
    #[arg(long = "M", default_value_t = 1.0)]
    pub m_bound: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ForwardArgs {
    /// Field document.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Restrict the layer rays to `α ≤ |z| ≤ β`, given as `α,β`.
    #[arg(long, value_parser = parse_annulus)]
    pub annulus: Option<(f64, f64)>,
    /// Worker threads; 0 or unset uses every logical processor.
    #[arg(long, env = "NAXRAY_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Sinogram document.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long, value_parser = parse_annulus)]
    pub annulus: Option<(f64, f64)>,
    /// Known field; adds per-cell residuals to the report.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Where to write the report; stderr when unset.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Field document.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Reference field, or a sinogram to replay the field against.
    #[arg(long)]
    pub truth: PathBuf,
    /// Where to write the report; stdout when unset.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long)]
    pub r: f64,
    #[arg(long = "M", default_value_t = 1.0)]
    pub m_bound: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_annulus(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected α,β, got {s:?}"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("bad α {a:?}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("bad β {b:?}: {e}"))?;
    Ok((a, b))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn write(path: Option<&Path>, text: &str, fallback_stderr: bool) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.into(), source }),
        None => {
            let res = if fallback_stderr {
                std::io::stderr().write_all(text.as_bytes())
            } else {
                std::io::stdout().write_all(text.as_bytes())
            };
            res.map_err(|source| CliError::Io { path: "-".into(), source })
        }
    }
}

fn annulus(pair: Option<(f64, f64)>) -> CliResult<Option<Annulus>> {
    pair.map(|(a, b)| Annulus::new(a, b).map_err(|e| CliError::usage(format!("--annulus: {e}")))).transpose()
}

fn load_plan(path: Option<&PathBuf>) -> CliResult<Option<naxray_core::GammaRPlan>> {
    path.map(|p| json::plan_from_json(&read(p)?)).transpose()
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Phantom(a) => {
            let field = commands::make_phantom(a.method, a.d, a.n, a.r, a.m_bound, a.seed)?;
            write(a.out.as_deref(), &json::field_to_json(&field)?, false)
        }
        Command::Plan(a) => {
            let plan = commands::make_plan(a.r, a.m_bound, a.d)?;
            write(a.out.as_deref(), &json::plan_to_json(&plan)?, false)
        }
        Command::Forward(a) => {
            let annulus = annulus(a.annulus)?;
            let field = json::field_from_json(&read(&a.input)?)?;
            let plan = load_plan(a.plan.as_ref())?;
            let sino = commands::forward(&field, a.method, plan.as_ref(), annulus.as_ref(), a.threads.unwrap_or(0))?;
            write(a.out.as_deref(), &json::sinogram_to_json(&sino)?, false)
        }
        Command::Reconstruct(a) => {
            let annulus = annulus(a.annulus)?;
            if a.method == Method::Star && a.plan.is_none() {
                return Err(CliError::usage("--method star needs --plan"));
            }
            let sino = json::sinogram_from_json(&read(&a.input)?)?;
            let plan = load_plan(a.plan.as_ref())?;
            let truth = a.truth.as_ref().map(|p| json::field_from_json(&read(p)?)).transpose()?;
            let (rec, report) =
                commands::reconstruct(&sino, a.method, plan.as_ref(), annulus.as_ref(), truth.as_ref())?;
            write(a.out.as_deref(), &json::field_to_json(&rec.field)?, false)?;
            write(a.report.as_deref(), &json::to_canonical_string(&report)?, true)
        }
        Command::Verify(a) => {
            let field = json::field_from_json(&read(&a.input)?)?;
            let text = read(&a.truth)?;
            let is_sinogram =
                serde_json::from_str::<serde_json::Value>(&text).map(|v| v.get("meta").is_some()).unwrap_or(false);
            let report = if is_sinogram {
                commands::replay(&field, &json::sinogram_from_json(&text)?)?
            } else {
                commands::compare_fields(&field, &json::field_from_json(&text)?)?
            };
            write(a.report.as_deref(), &json::to_canonical_string(&report)?, false)
        }
        Command::Counterexample(a) => {
            let doc = commands::counterexample(a.k, a.r, a.m_bound)?;
            write(a.out.as_deref(), &json::to_canonical_string(&doc)?, false)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("naxray: {e}");
            e.exit_code()
        }
    }
}
