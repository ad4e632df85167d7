//! Command-line front end. Exit codes: 0 success, 1 configuration or usage
//! error, 2 runtime error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{parse_config, Format, Kind};
use crate::run::{analyze, execute, CliError, RunOptions};

#[derive(Debug, Parser)]
#[command(name = "symba", version, about = "Run numeric-organism, boolean and DNA soup experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Ppm,
    Bin,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Ppm => Format::Ppm,
            FormatArg::Bin => Format::Bin,
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Output formats, repeatable; default all
    #[arg(long = "format", value_enum)]
    formats: Vec<FormatArg>,
    /// Worker threads for seed sweeps (0 = one per core)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Experiment configuration file
    #[arg(long)]
    config: PathBuf,
    /// Run this single seed instead of the configured ones
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One-dimensional numeric automaton
    Run1d(RunArgs),
    /// Two-dimensional vector automaton
    Run2d(RunArgs),
    /// Gated elementary automaton
    Runbool(RunArgs),
    /// Well-mixed DNA soup
    Dnasoup(RunArgs),
    /// DNA lattice with diffusing budget
    Dnaca(RunArgs),
    /// Intruder sweep around a periodic organism
    Robustness(RunArgs),
    /// Metrics of a stored spacetime (.bin or .csv)
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn options(c: &Common, fallback: Option<&[Format]>) -> RunOptions {
    let mut formats: Vec<Format> = if c.formats.is_empty() {
        fallback.map_or(Format::ALL.to_vec(), <[Format]>::to_vec)
    } else {
        c.formats.iter().map(|&f| f.into()).collect()
    };
    formats.sort();
    formats.dedup();
    RunOptions { out: c.out.clone(), formats, jobs: c.jobs }
}

fn run_kind(kind: Kind, args: &RunArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", args.config.display())))?;
    let mut cfg =
        parse_config(&text, Some(kind)).map_err(|e| CliError::Config(format!("{}:\n{e}", args.config.display())))?;
    if let Some(seed) = args.seed {
        cfg.seeds = vec![seed];
    }
    let opts = options(&args.common, cfg.formats.as_deref());
    execute(&cfg, &text, &opts).map(|_| ())
}

/// Parses `args` (program name first) and runs the command.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Run1d(a) => run_kind(Kind::Run1d, a),
        Command::Run2d(a) => run_kind(Kind::Run2d, a),
        Command::Runbool(a) => run_kind(Kind::RunBool, a),
        Command::Dnasoup(a) => run_kind(Kind::DnaSoup, a),
        Command::Dnaca(a) => run_kind(Kind::DnaCa, a),
        Command::Robustness(a) => run_kind(Kind::Robustness, a),
        Command::Analyze { input, common } => analyze(input, &options(common, None)).map(|_| ()),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
