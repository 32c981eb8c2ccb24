//! Command-line interface.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use evofreq_core::engine::MissingEdgePolicy;
use evofreq_core::{count_patterns, recommended_sample_size, EngineConfig, Mode, WMode};

use crate::driver::{compare_stream, run_stream, DriveError, DriveOptions, DriveOutput};
use crate::generate::{generate_stream, DegreeModel, GenParams};
use crate::parse::{read_stream, write_stream, ReadError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FORMAT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "evofreq", version, about = "Frequent subgraph patterns over evolving labeled edge streams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one engine over a stream file.
    Run(RunArgs),
    /// Run an approximate engine and exact counting side by side.
    Compare(RunArgs),
    /// Write a synthetic stream.
    Gen(GenArgs),
    /// Print the number of pattern classes and the recommended sample size.
    Patterns(PatternArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sr,
    Osr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WModeArg {
    Exact,
    Sketch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MissingEdgeArg {
    Skip,
    Abort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Uniform,
    PowerLaw,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Stream file (`+ u lu v lv le` / `- u v` lines).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Osr)]
    pub mode: ModeArg,
    /// Accept deletion events.
    #[arg(long)]
    pub dynamic: bool,
    /// Sliding window of this many insertions over an insertion-only stream.
    #[arg(long)]
    pub window: Option<usize>,
    /// Sample size; derived from epsilon, delta and the class count if absent.
    #[arg(long)]
    pub sample_size: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub sketch_size: usize,
    #[arg(long, value_enum, default_value_t = WModeArg::Exact)]
    pub w_mode: WModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub report_every: Option<u64>,
    /// CSV destination (standard output if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Snapshot destination (standard output if absent).
    #[arg(long)]
    pub snapshots: Option<PathBuf>,
    /// Vertex label alphabet size, for the class count.
    #[arg(long, default_value_t = 1)]
    pub labels: u32,
    /// Edge label alphabet size, for the class count.
    #[arg(long, default_value_t = 1)]
    pub edge_labels: u32,
    /// Exact counting: recount from scratch every this many events.
    #[arg(long)]
    pub verify_every: Option<u64>,
    #[arg(long, value_enum, default_value_t = MissingEdgeArg::Skip)]
    pub missing_edge: MissingEdgeArg,
    /// Fill the avg_update_ns column (wall-clock, so not reproducible).
    #[arg(long)]
    pub timing: bool,
    /// Write the final sample, one slot per line.
    #[arg(long)]
    pub dump_sample: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub vertices: u64,
    #[arg(long)]
    pub edges: u64,
    #[arg(long, default_value_t = 1)]
    pub labels: u32,
    #[arg(long, default_value_t = 1)]
    pub edge_labels: u32,
    #[arg(long, value_enum, default_value_t = ModelArg::Uniform)]
    pub model: ModelArg,
    /// Tail exponent of the power-law model.
    #[arg(long, default_value_t = 2.2)]
    pub exponent: f64,
    /// Share of events that are deletions, in [0, 0.5].
    #[arg(long, default_value_t = 0.0)]
    pub delete_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Destination (standard output if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub labels: u32,
    #[arg(long, default_value_t = 1)]
    pub edge_labels: u32,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
}

impl RunArgs {
    pub fn options(&self) -> DriveOptions {
        DriveOptions {
            config: EngineConfig {
                k: self.k,
                tau: self.tau,
                epsilon: self.epsilon,
                delta: self.delta,
                mode: match self.mode {
                    ModeArg::Exact => Mode::Exact,
                    ModeArg::Sr => Mode::Sr,
                    ModeArg::Osr => Mode::Osr,
                },
                dynamic: self.dynamic,
                sample_size: self.sample_size,
                vertex_labels: self.labels,
                edge_labels: self.edge_labels,
                w_mode: match self.w_mode {
                    WModeArg::Exact => WMode::Exact,
                    WModeArg::Sketch => WMode::Sketch,
                },
                sketch_size: self.sketch_size,
                seed: self.seed,
                missing_edge: match self.missing_edge {
                    MissingEdgeArg::Skip => MissingEdgePolicy::Skip,
                    MissingEdgeArg::Abort => MissingEdgePolicy::Abort,
                },
                verify_every: self.verify_every,
            },
            window: self.window,
            report_every: self.report_every,
            timing: self.timing,
        }
    }
}

/// A failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<DriveError> for Failure {
    fn from(e: DriveError) -> Self {
        Failure {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

fn write_to(path: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::usage(format!("writing {}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("writing output: {e}"))),
    }
}

fn load(path: &Path) -> Result<Vec<evofreq_core::StreamEvent>, Failure> {
    let file = File::open(path).map_err(|e| Failure::usage(format!("opening {}: {e}", path.display())))?;
    read_stream(BufReader::new(file)).map_err(|e| match e {
        ReadError::Parse(p) => Failure {
            code: EXIT_FORMAT,
            message: format!("{}: {p}", path.display()),
        },
        ReadError::Io(io) => Failure::usage(format!("reading {}: {io}", path.display())),
    })
}

fn drive(args: &RunArgs, compare: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let events = load(&args.input)?;
    let opts = args.options();
    for w in opts.config.warnings() {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let out: DriveOutput = if compare {
        compare_stream(&events, &opts)?
    } else {
        run_stream(&events, &opts)?
    };
    if out.skipped > 0 {
        let _ = writeln!(stderr, "warning: skipped {} deletions of absent edges", out.skipped);
    }
    write_to(args.snapshots.as_deref(), stdout, &out.snapshots)?;
    write_to(args.out.as_deref(), stdout, &out.csv)?;
    if let Some(path) = &args.dump_sample {
        let dump = out.engine.reservoir().map(|r| r.debug_dump()).unwrap_or_default();
        write_to(Some(path), stdout, &dump)?;
    }
    Ok(())
}

fn gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let params = GenParams {
        vertices: args.vertices,
        edges: args.edges,
        vertex_labels: args.labels,
        edge_labels: args.edge_labels,
        model: match args.model {
            ModelArg::Uniform => DegreeModel::Uniform,
            ModelArg::PowerLaw => DegreeModel::PowerLaw {
                exponent: args.exponent,
            },
        },
        delete_fraction: args.delete_fraction,
        seed: args.seed,
    };
    let events = generate_stream(&params).map_err(|e| Failure::usage(e.to_string()))?;
    let mut buf = Vec::new();
    write_stream(&mut buf, &events).expect("write to memory");
    write_to(args.out.as_deref(), stdout, &String::from_utf8(buf).expect("ascii"))
}

fn patterns(args: &PatternArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if !(args.epsilon > 0.0 && args.epsilon < 1.0 && args.delta > 0.0 && args.delta < 1.0) {
        return Err(Failure::usage("epsilon and delta must lie in (0, 1)"));
    }
    let t_k = count_patterns(
        args.k,
        args.labels,
        args.edge_labels,
        evofreq_core::pattern::DEFAULT_ENUMERATION_BUDGET,
    )
    .map_err(|e| Failure::usage(e.to_string()))?;
    let m = recommended_sample_size(t_k, args.epsilon, args.delta);
    write_to(None, stdout, &format!("T_k={t_k}\nM={m}\n"))
}

/// Parses `args` (program name first) and runs the command; returns the exit status.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match &cli.command {
        Command::Run(a) => drive(a, false, stdout, stderr),
        Command::Compare(a) => drive(a, true, stdout, stderr),
        Command::Gen(a) => gen(a, stdout),
        Command::Patterns(a) => patterns(a, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
