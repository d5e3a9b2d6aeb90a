//! Command-line entry point. Parses the experiment grammar
//!
//! ```text
//! fuglede <command> [--sizes 8,16,...] [--trials N] [--seed S]
//!                   [--norms s1,s1.5,s2,s4,sinf,weakl1,llog]
//!                   [--out PATH] [--format csv|json]
//! ```
//!
//! and exits 0 on success, 2 on configuration errors (unknown flags or
//! values, out-of-range sizes, unusable norm tags, unwritable output), and 3
//! on numerical errors surfaced from the computation itself. Wall-clock time
//! is reported on stderr only; the emitted records are byte-for-byte
//! deterministic functions of the configuration.
//!
//! The `FUGLEDE_THREADS` environment variable is accepted and validated (a
//! positive integer) but deliberately has no effect on the output: every
//! trial derives its RNG stream from `(seed, trial_index)` and records are
//! sorted into a canonical order before emission, so the bytes are identical
//! under any scheduling. The current runners execute sequentially.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuglede_cli::{
    default_norms, default_sizes, default_trials, emit, parse_norm_tag, run, Command,
    ExperimentConfig, OutputFormat,
};
use fuglede_core::Error;

#[derive(Parser)]
#[command(
    name = "fuglede",
    version,
    about = "Seeded numerical experiments on commutator norm inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Trace-norm growth curve of the triangular truncation of the rank-one
    /// averaging projection, tabulated against ln n
    Davies(CommonArgs),
    /// Max adjoint-commutator / commutator norm ratio over seeded random
    /// normal-contraction pairs, per size and norm
    FugledeSweep(CommonArgs),
    /// Scale search and trace-norm ratios for the weighted-diagonal pair
    /// whose commutator is small while the adjoint commutator is not
    Counterexample(CommonArgs),
    /// Boyd indices and per-n dilation quotients of the requested sequence
    /// spaces
    Boyd(CommonArgs),
    /// Max pointwise ratio of the adjoint-commutator profile against the
    /// averaged commutator profile over seeded random pairs
    CalderonCheck(CommonArgs),
    /// Intertwining residual and Hilbert-Schmidt equality for the
    /// spectral-integral route, over seeded random pairs
    DoiCheck(CommonArgs),
}

impl CliCommand {
    fn split(self) -> (Command, CommonArgs) {
        match self {
            CliCommand::Davies(a) => (Command::Davies, a),
            CliCommand::FugledeSweep(a) => (Command::FugledeSweep, a),
            CliCommand::Counterexample(a) => (Command::Counterexample, a),
            CliCommand::Boyd(a) => (Command::Boyd, a),
            CliCommand::CalderonCheck(a) => (Command::CalderonCheck, a),
            CliCommand::DoiCheck(a) => (Command::DoiCheck, a),
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Comma-separated matrix sizes (per-command default when omitted)
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,

    /// Number of random trials per cell (ignored by deterministic commands)
    #[arg(long)]
    trials: Option<u64>,

    /// Base seed; every record carries it
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Comma-separated norm tags: s<p> (e.g. s1, s1.5, s2), sinf, weakl1, llog
    #[arg(long, value_delimiter = ',')]
    norms: Option<Vec<String>>,

    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn build_config(command: Command, args: CommonArgs) -> Result<ExperimentConfig, Error> {
    let norms = match args.norms {
        Some(tags) => tags
            .iter()
            .map(|t| parse_norm_tag(t))
            .collect::<Result<Vec<_>, _>>()?,
        None => default_norms(command),
    };
    Ok(ExperimentConfig {
        command,
        sizes: args.sizes.unwrap_or_else(|| default_sizes(command)),
        trials: args.trials.unwrap_or_else(|| default_trials(command)),
        seed: args.seed,
        norms,
        output_path: args.out,
        format: match args.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        },
    })
}

/// Configuration problems exit 2; numerical failures inside a run exit 3.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) | Error::Io(_) => 2,
        _ => 3,
    }
}

/// Validates `FUGLEDE_THREADS` when set. The value constrains nothing today
/// (runners are sequential and output is scheduling-independent either way),
/// but a malformed value is still a configuration error.
fn check_thread_env() -> Result<(), Error> {
    if let Ok(raw) = std::env::var("FUGLEDE_THREADS") {
        let ok = raw.parse::<usize>().map(|v| v >= 1).unwrap_or(false);
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "FUGLEDE_THREADS must be a positive integer, got '{raw}'"
            )));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = cli.command.split();
    let started = Instant::now();
    if let Err(e) = check_thread_env() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let config = match build_config(command, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(records) => {
            if let Err(e) = emit(&records, config.format, config.output_path.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            eprintln!(
                "{}: {} records in {} ms",
                config.command.name(),
                records.len(),
                started.elapsed().as_millis()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
