//! `qdt`: command-line front end for the quiver DT pipeline.
//!
//! Results go to standard output as JSON. Failures print `{"error", "message"}`
//! on standard error and exit with 2 (bad input), 3 (perturbation retries
//! exhausted) or 1 (selfcheck found a violation).

mod input;
mod render;
mod selfcheck;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use quiver_dt::dt::{coefficients, reconstruct_dt, AttractorFile, DtError};
use quiver_dt::flowtree::{FlowError, PerturbationSpec};
use quiver_dt::tropical::{tropical_multiplicity, FaceFile};

use input::{read_file, InputError};

#[derive(Parser)]
#[command(name = "qdt", version, about = "Exact DT invariants of quivers from attractor flow trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Universal coefficient F_r for an ordered list of parts.
    Coeff(CoeffArgs),
    /// DT invariant of a dimension vector from attractor invariants.
    Dt(DtArgs),
    /// Tropical multiplicity data of a trivalent face type.
    Tropmult {
        #[arg(long)]
        face: PathBuf,
    },
    /// Randomized consistency checks across independent code paths.
    Selfcheck {
        #[arg(long, default_value_t = 5)]
        max_r: usize,
        #[arg(long, default_value_t = 4)]
        max_d: usize,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Like `coeff --per-tree`, and also writes an SVG of the attractor trees.
    Render {
        #[command(flatten)]
        coeff: CoeffArgs,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Args)]
struct FlowArgs {
    /// Quiver JSON with "vertices" and either "arrows" or "skew_form".
    #[arg(long)]
    quiver: PathBuf,
    /// Stability parameter, comma separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Perturbation scale as p/q; defaults to 2^-40.
    #[arg(long)]
    scale: Option<String>,
    #[arg(long, default_value_t = quiver_dt::flowtree::DEFAULT_MAX_RETRIES)]
    max_retries: usize,
}

#[derive(Args)]
struct CoeffArgs {
    #[command(flatten)]
    flow: FlowArgs,
    /// Parts separated by ';', entries by ','.
    #[arg(long, allow_hyphen_values = true)]
    parts: String,
    /// Also list the attractor trees with their lattice data.
    #[arg(long)]
    per_tree: bool,
}

#[derive(Args)]
struct DtArgs {
    #[command(flatten)]
    flow: FlowArgs,
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
    /// Attractor invariants JSON; defaults to 1 on each simple.
    #[arg(long)]
    attractor: Option<PathBuf>,
}

enum Failure {
    Input { kind: String, message: String },
    Retries(String),
    Violation,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

impl From<DtError> for Failure {
    fn from(e: DtError) -> Self {
        match e {
            DtError::Flow(FlowError::RetriesExhausted { .. }) => Failure::Retries(e.to_string()),
            _ => Failure::Input {
                kind: variant_name(&e),
                message: e.to_string(),
            },
        }
    }
}

/// Name of the innermost error variant, for the `error` field.
fn variant_name(e: &impl std::fmt::Debug) -> String {
    let dbg = format!("{e:?}");
    let mut name = dbg.as_str();
    // Unwrap wrapper variants such as `Flow(NonGenericTheta)`.
    while let Some((outer, inner)) = name.split_once('(') {
        if matches!(outer, "Flow" | "Tropical") {
            name = inner;
        } else {
            name = outer;
            break;
        }
    }
    name.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: &'a str,
}

fn print_json(v: &impl Serialize) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn spec(flow: &FlowArgs) -> Result<PerturbationSpec, Failure> {
    let scale = match &flow.scale {
        Some(s) => input::parse_scale(s)?,
        None => quiver_dt::flowtree::default_scale(),
    };
    let mut spec = PerturbationSpec::new(flow.seed, scale).map_err(DtError::from)?;
    spec.max_retries = flow.max_retries;
    Ok(spec)
}

fn run_coeff(args: &CoeffArgs) -> Result<quiver_dt::dt::Coefficients, Failure> {
    let omega = input::read_quiver(&args.flow.quiver)?;
    let parts = input::parse_parts(&args.parts, omega.dim())?;
    let theta = input::parse_theta(&args.flow.theta, omega.dim())?;
    let spec = spec(&args.flow)?;
    Ok(coefficients(&omega, &parts, &theta, &spec)?)
}

#[derive(Serialize)]
struct TotalOnly {
    #[serde(rename = "F_total", serialize_with = "quiver_dt::json::serialize_bigint")]
    f_total: num_bigint::BigInt,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Coeff(args) => {
            let c = run_coeff(&args)?;
            if args.per_tree {
                print_json(&c);
            } else {
                print_json(&TotalOnly { f_total: c.f_total });
            }
        }
        Command::Render { coeff, svg } => {
            let c = run_coeff(&coeff)?;
            let omega = input::read_quiver(&coeff.flow.quiver)?;
            let parts = input::parse_parts(&coeff.parts, omega.dim())?;
            let theta = input::parse_theta(&coeff.flow.theta, omega.dim())?;
            let map = if parts.len() == 1 {
                None
            } else {
                Some(quiver_dt::dt::f_per_tree(&omega, &parts, &theta, &spec(&coeff.flow)?)?)
            };
            let doc = render::svg(&omega, &parts, &theta, map.as_ref());
            std::fs::write(&svg, doc).map_err(|e| InputError::Io(svg.display().to_string(), e.to_string()))?;
            print_json(&c);
        }
        Command::Dt(args) => {
            let omega = input::read_quiver(&args.flow.quiver)?;
            let d = omega.dim();
            let gamma = input::parse_vector(&args.gamma, d)?;
            let theta = input::parse_theta(&args.flow.theta, d)?;
            let att = match &args.attractor {
                Some(p) => AttractorFile::parse(&read_file(p)?)?.data()?,
                None => quiver_dt::dt::AttractorData::simples(d),
            };
            let spec = spec(&args.flow)?;
            print_json(&reconstruct_dt(&omega, &gamma, &theta, &att, &spec)?);
        }
        Command::Tropmult { face } => {
            let tropical = |e: quiver_dt::tropical::TropicalError| Failure::Input {
                kind: variant_name(&e),
                message: e.to_string(),
            };
            let face = FaceFile::parse(&read_file(&face)?).and_then(|f| f.face()).map_err(tropical)?;
            print_json(&tropical_multiplicity(&face).map_err(tropical)?);
        }
        Command::Selfcheck {
            max_r,
            max_d,
            cases,
            seed,
        } => {
            if max_r < 2 || max_d < 2 {
                return Err(Failure::Input {
                    kind: "Range".into(),
                    message: "--max-r and --max-d must be at least 2".into(),
                });
            }
            let report = selfcheck::run(max_r, max_d, cases, seed);
            print_json(&report);
            if !report.ok {
                return Err(Failure::Violation);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let report = ErrorReport {
                error: "Usage",
                message: msg.trim(),
            };
            eprintln!("{}", serde_json::to_string(&report).expect("serializable"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input { kind, message }) => {
            let report = ErrorReport {
                error: &kind,
                message: &message,
            };
            eprintln!("{}", serde_json::to_string(&report).expect("serializable"));
            ExitCode::from(2)
        }
        Err(Failure::Retries(message)) => {
            let report = ErrorReport {
                error: "RetriesExhausted",
                message: &message,
            };
            eprintln!("{}", serde_json::to_string(&report).expect("serializable"));
            ExitCode::from(3)
        }
        Err(Failure::Violation) => ExitCode::from(1),
    }
}
