//! Command-line front end for the experiment harness.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 when a requested
//! size exceeds an algorithm's bound.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand};
use ewens_spectra::experiment::{self, ExperimentConfig, Subcommand, RUN_RECORD_SCHEMA};
use ewens_spectra::Error;

#[derive(Parser, Debug)]
#[command(name = "ewens-spectra", version, about = "Eigenangle statistics of random permutation representations")]
struct Cli {
    /// Print the RunRecord JSON schema and exit.
    #[arg(long)]
    schema: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(ClapSubcommand, Debug)]
enum Command {
    /// Sample permutations and record Y_{n,k} (and Y^mode, with differences).
    Sample(RunArgs),
    /// Empirical moments against exact finite-n and limiting values.
    Moments(RunArgs),
    /// Limiting k = 2 density table, CDF and Kolmogorov-Smirnov distance.
    Density(RunArgs),
    /// Cross moments of the statistics on two arcs.
    Crossmoments(RunArgs),
    /// Discrepancy, Weyl sum and power-mean tables for the endpoint sequences.
    Discrepancy(RunArgs),
    /// Exact spectrum of one permutation or cycle type.
    Spectrum(RunArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// JSON config file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Ewens parameter, e.g. 1 or 1/2.
    #[arg(long)]
    theta: Option<String>,
    /// Left endpoint: sqrt2, sqrt3, sqrt5, sqrt7, phi, a decimal or p/q.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Left endpoint of the second arc (crossmoments).
    #[arg(long)]
    alpha2: Option<String>,
    #[arg(long)]
    beta2: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// tuple | set | irrep | cycle-statistic | poissonized
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// Write the record here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Highest moment order, at most 8.
    #[arg(long)]
    max_moment: Option<usize>,
    /// Points in density and discrepancy grids.
    #[arg(long)]
    grid: Option<usize>,
    /// One-line permutation for spectrum, e.g. 2,3,4,1.
    #[arg(long)]
    perm: Option<String>,
    /// Cycle type for spectrum, e.g. 4,2,1.
    #[arg(long)]
    cycle_type: Option<String>,
    /// Include one row per sample.
    #[arg(long)]
    per_sample: bool,
    /// Record wall-clock time (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

fn build_config(sub: Subcommand, args: RunArgs) -> ewens_spectra::Result<ExperimentConfig> {
    let mut c = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    c.subcommand = sub;
    macro_rules! overlay {
        ($($field:ident),*) => {
            $(if let Some(v) = args.$field {
                c.$field = v;
            })*
        };
    }
    overlay!(n, k, theta, alpha, beta, alpha2, beta2, samples, seed, bins, max_moment, grid);
    if let Some(m) = args.mode {
        c.mode = m.parse()?;
    }
    if let Some(f) = args.format {
        c.format = f.parse()?;
    }
    if let Some(o) = args.out {
        c.out = Some(o.to_string_lossy().into_owned());
    }
    if args.workers.is_some() {
        c.workers = args.workers;
    }
    if args.perm.is_some() {
        c.perm = args.perm;
    }
    if args.cycle_type.is_some() {
        c.cycle_type = args.cycle_type;
    }
    c.per_sample |= args.per_sample;
    c.timing |= args.timing;
    Ok(c)
}

fn execute(sub: Subcommand, args: RunArgs) -> ewens_spectra::Result<()> {
    let config = build_config(sub, args)?;
    let record = experiment::run(&config)?;
    if let Some(text) = experiment::write_record(&record, config.format, config.out.as_deref().map(Path::new))? {
        print!("{text}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.schema {
        print!("{RUN_RECORD_SCHEMA}");
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (sample, moments, density, crossmoments, discrepancy, spectrum); see --help");
        return ExitCode::from(2);
    };
    let (sub, args) = match command {
        Command::Sample(a) => (Subcommand::Sample, a),
        Command::Moments(a) => (Subcommand::Moments, a),
        Command::Density(a) => (Subcommand::Density, a),
        Command::Crossmoments(a) => (Subcommand::Crossmoments, a),
        Command::Discrepancy(a) => (Subcommand::Discrepancy, a),
        Command::Spectrum(a) => (Subcommand::Spectrum, a),
    };
    match execute(sub, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code() as u8
}
