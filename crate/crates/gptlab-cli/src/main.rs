//! `gptlab` — command-line runner for GPT circuit simulation, principle
//! verification and protocol experiments.
//!
//! Exit codes: 0 success, 1 runtime error, 2 parse/validation error,
//! 3 guard violation, 4 bound violation.

mod output;
mod run;

use clap::{Args, Parser, Subcommand};
use gptlab::scalar::Mode;

#[derive(Parser)]
#[command(
    name = "gptlab",
    about = "Simulator and verification laboratory for generalised probabilistic theories",
    version
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Scalar mode for the run.
    #[arg(long, value_enum, default_value = "exact", global = true)]
    mode: CliMode,
    /// Seed for all pseudo-random draws.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Comparison tolerance for approx-mode runs.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol: f64,
    /// Report format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Worker threads for data-parallel sweeps (0 = rayon default).
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq)]
enum CliMode {
    Exact,
    Approx,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Exact => Mode::Exact,
            CliMode::Approx => Mode::Approx,
        }
    }
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a circuit file: outcome distribution, acceptance probability
    /// and optional post-selection.
    Simulate {
        /// Path to a `.gpc` circuit file.
        circuit: std::path::PathBuf,
        /// Auxiliary state constructor (e.g. `pr()` or `maxmix()`), required
        /// when the circuit declares aux ports.
        #[arg(long)]
        aux: Option<String>,
    },
    /// Evaluate a Boolean function on every input through its advice state.
    AdviceDemo {
        /// Number of input bits (1..=12).
        #[arg(long)]
        n: usize,
        /// Truth table as a string of 2^n bits (input 0 first); random when
        /// omitted.
        #[arg(long)]
        table: Option<String>,
    },
    /// Spectral bound and threshold classification of aux-ported circuits.
    GmaBound {
        /// Circuit files with auxiliary registers.
        circuits: Vec<std::path::PathBuf>,
        /// Gap-trace exponent override (default: the tightest d with
        /// 2^(n+1) <= 4^d for n auxiliary sites).
        #[arg(long)]
        d: Option<u32>,
    },
    /// Run the principle verifiers on a built-in theory or a theory JSON
    /// file.
    Verify {
        /// `classical`, `classical<k>`, `boxworld`, `quantum`, or a path to a
        /// theory JSON document.
        theory: String,
    },
    /// Von Neumann unbiasing of a biased fiducial measurement.
    Unbias {
        /// Success probability of outcome 0 (rational `p/q` or decimal).
        #[arg(long)]
        p: String,
        /// Number of measurement pairs to draw.
        #[arg(long, default_value_t = 50_000)]
        pairs: usize,
    },
    /// Iterative advice distillation on a shipped toy family.
    Distill {
        /// `plus` (distillable) or `contradictory`.
        #[arg(long, default_value = "plus")]
        family: String,
        /// Iteration cap.
        #[arg(long, default_value_t = 16)]
        t_max: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    gptlab::par::configure_threads(cli.global.jobs);
    let code = run::dispatch(&cli.global, &cli.command);
    std::process::exit(code);
}
