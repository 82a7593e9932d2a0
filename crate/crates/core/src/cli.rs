//! `framelab` command line.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error (including a flow
//! step outside the admissible range).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::banach::analyze_asf;
use crate::error::{FrameLabError, Result};
use crate::flow::{run_flow, FlowConfig};
use crate::hilbert::{analyze_frame, closest_equal_norm, closest_parseval, naimark_complement};
use crate::io::{self as docs, Document};
use crate::lab::{self, estimate_paulsen, nearest_enp_alternating, InstanceKind, InstanceSpec};
use crate::projections::{balance_epsilon_banach, certify_projection, chordal_distance};

pub const TOL_ENV: &str = "FRAMELAB_TOL";

#[derive(Parser, Debug)]
#[command(
    name = "framelab",
    version,
    about = "Frames, ASFs and projections: certificates, nearest points, flows and sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify a frame (or ASF) document and print its report.
    Check { file: PathBuf },
    /// Closest-point maps.
    #[command(subcommand)]
    Nearest(Nearest),
    /// Run the spherical equalization flow on a unit-norm frame.
    Flow(FlowArgs),
    /// Naimark complement of a Parseval frame.
    Naimark {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chordal distance between two equal-rank projections.
    Chordal { p: PathBuf, q: PathBuf },
    /// Approximate Schauder frame tools.
    #[command(subcommand)]
    Asf(AsfCommand),
    /// Projection tools.
    #[command(subcommand)]
    Projection(ProjectionCommand),
    /// Sweep instances and write one CSV row per trial.
    Estimate(EstimateArgs),
}

#[derive(Subcommand, Debug)]
enum Nearest {
    /// Closest Parseval frame, `S^{-1/2}` applied to every vector.
    Parseval {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closest frame whose vectors share one norm.
    Equalnorm {
        file: PathBuf,
        /// Common norm of the output; defaults to the mean input norm.
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equal-norm Parseval frame near the input.
    Enp {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        max_rounds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct FlowArgs {
    file: PathBuf,
    #[arg(long = "t")]
    t: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    stop: f64,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Renormalize every vector after this many steps.
    #[arg(long)]
    renormalize_every: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum AsfCommand {
    /// Certify an ASF document and print its report.
    Check { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum ProjectionCommand {
    /// Balance of a projection against an Auerbach system.
    Balance {
        file: PathBuf,
        #[arg(long)]
        system: PathBuf,
    },
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    #[arg(long, value_parser = parse_exponent, default_value = "2")]
    p: f64,
    #[arg(long, value_parser = parse_kind, default_value = "perturbed_enp")]
    kind: InstanceKind,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|e| e.to_string()),
    }
}

fn parse_kind(s: &str) -> std::result::Result<InstanceKind, String> {
    s.parse().map_err(|e: FrameLabError| e.to_string())
}

enum Failure {
    Usage(String),
    Domain(FrameLabError),
}

impl From<FrameLabError> for Failure {
    fn from(e: FrameLabError) -> Self {
        match e {
            FrameLabError::StepTooLarge { .. } | FrameLabError::InvalidArgument(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Domain(e.into())
    }
}

fn certify_tol() -> std::result::Result<f64, Failure> {
    match std::env::var(TOL_ENV) {
        Err(_) => Ok(lab::DEFAULT_CERTIFY_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(Failure::Usage(format!("{TOL_ENV}={s:?} is not a positive number"))),
        },
    }
}

fn emit<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

/// Writes `doc` to `path` when given; otherwise folds it into `summary` under `key`.
fn deliver(out: &mut dyn Write, mut summary: Value, key: &str, doc: Value, path: Option<PathBuf>) -> Result<()> {
    match path {
        Some(p) => docs::write_json(p, &doc)?,
        None => {
            summary[key] = doc;
        }
    }
    emit(out, &summary)
}

fn dispatch(command: Command, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let tol = certify_tol()?;
    match command {
        Command::Check { file } => match docs::read_document(file)? {
            Document::Frame(f) => emit(out, &analyze_frame(&f))?,
            Document::Asf(a) => emit(out, &analyze_asf(&a, tol))?,
            other => {
                return Err(Failure::Domain(FrameLabError::InvalidDocument(format!(
                    "check expects hilbert_frame or asf, found {}",
                    other.kind()
                ))))
            }
        },
        Command::Nearest(Nearest::Parseval { file, out: path }) => {
            let (frame, dist_sq) = closest_parseval(&docs::read_frame(file)?)?;
            deliver(out, json!({ "dist_sq": dist_sq }), "frame", docs::frame_value(&frame), path)?;
        }
        Command::Nearest(Nearest::Equalnorm { file, target, out: path }) => {
            let (frame, dist_sq) = closest_equal_norm(&docs::read_frame(file)?, target)?;
            deliver(out, json!({ "dist_sq": dist_sq }), "frame", docs::frame_value(&frame), path)?;
        }
        Command::Nearest(Nearest::Enp { file, max_rounds, out: path }) => {
            let r = nearest_enp_alternating(&docs::read_frame(file)?, tol, max_rounds)?;
            let summary = json!({ "dist_sq": r.dist_sq, "rounds": r.rounds, "refinements": r.refinements });
            deliver(out, summary, "frame", docs::frame_value(&r.frame), path)?;
        }
        Command::Flow(args) => {
            let frame = docs::read_frame(&args.file)?;
            let config = FlowConfig {
                max_iters: args.max_iters,
                stop_defect: args.stop,
                renormalize_every: args.renormalize_every,
                ..FlowConfig::new(args.t)
            };
            config.validate(frame.len())?;
            let (last, trace) = run_flow(&frame, &config)?;
            if let Some(path) = args.trace {
                trace.write_csv(BufWriter::new(File::create(path)?))?;
            }
            let summary = json!({
                "final_iter": trace.final_iter,
                "termination": trace.termination,
                "unit_defect_hs": trace.last().unit_defect_hs,
                "frame_potential": trace.last().frame_potential,
                "coprime": trace.coprime,
                "small_initial_defect": trace.small_initial_defect,
                "displacement": trace.displacement,
                "displacement_bound": trace.displacement_bound,
            });
            deliver(out, summary, "frame", docs::frame_value(&last), args.out)?;
        }
        Command::Naimark { file, out: path } => {
            let complement = naimark_complement(&docs::read_frame(file)?, tol)?;
            deliver(
                out,
                json!({ "n": complement.len(), "dim": complement.dim() }),
                "frame",
                docs::frame_value(&complement),
                path,
            )?;
        }
        Command::Chordal { p, q } => {
            let p = certify_projection(&docs::read_projection(p)?, false, tol)?;
            let q = certify_projection(&docs::read_projection(q)?, false, tol)?;
            let distance = chordal_distance(&p, &q, tol)?;
            emit(out, &json!({ "rank": p.rank(), "chordal_distance": distance }))?;
        }
        Command::Asf(AsfCommand::Check { file }) => {
            emit(out, &analyze_asf(&docs::read_asf(file)?, tol))?;
        }
        Command::Projection(ProjectionCommand::Balance { file, system }) => {
            let p = certify_projection(&docs::read_projection(file)?, false, tol)?;
            let sys = docs::read_auerbach(system)?;
            emit(out, &balance_epsilon_banach(&p, &sys, tol)?)?;
        }
        Command::Estimate(args) => {
            let mut grid = Vec::new();
            for &d in &args.d {
                for &n in &args.n {
                    for &eps in &args.eps {
                        if d <= n {
                            grid.push(InstanceSpec {
                                kind: args.kind,
                                dim: d,
                                n,
                                epsilon_target: eps,
                                p: args.p,
                                seed: args.seed,
                            });
                        }
                    }
                }
            }
            if grid.is_empty() {
                return Err(Failure::Usage("no grid point has d <= n".into()));
            }
            for spec in &grid {
                spec.validate().or_else(|e| match e {
                    FrameLabError::Infeasible(_) => Ok(()),
                    other => Err(other),
                })?;
            }
            let estimate = estimate_paulsen(&grid, args.trials, tol)?;
            lab::write_records_csv(&estimate.records, BufWriter::new(File::create(&args.out)?))?;
            emit(out, &estimate.summary)?;
        }
    }
    Ok(())
}

/// Parses `argv` (program name first) and runs the command, writing results
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            2
        }
        // A closed downstream pipe (`| head`) is not worth a message.
        Err(Failure::Domain(FrameLabError::Io(e))) if e.kind() == io::ErrorKind::BrokenPipe => 1,
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}
