//! `lp-rigidity`: generic rigidity checks for graphs in lp-spaces.
//!
//! Exit codes: 0 yes, 1 no, 2 error, 3 inconclusive, 4 cross-check mismatch.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use lp_rigidity::field::{PrimeField, DEFAULT_MODULUS};
use lp_rigidity::global::Mode;
use lp_rigidity::rigidity::DEFAULT_TRIALS;

use commands::Ctx;
use report::{ErrorReport, EXIT_ERROR};

#[derive(Parser, Debug)]
#[command(
    name = "lp-rigidity",
    version,
    about = "Generic local and global rigidity of graphs in lp-spaces (even p >= 4)"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, env = "LP_RIGIDITY_SEED", default_value_t = 0)]
    seed: u64,
    /// Prime modulus for randomized rank tests.
    #[arg(long, global = true, default_value_t = DEFAULT_MODULUS)]
    modulus: u64,
    /// Include wall-clock time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Combinatorial,
    Algebraic,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Combinatorial => Mode::Combinatorial,
            ModeArg::Algebraic => Mode::Algebraic,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generic local rigidity: rank test, plus the tree-packing test in the plane.
    CheckLocal {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        p: u32,
        /// Random configurations per rank test.
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Generic global rigidity with certificates.
    CheckGlobal {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        p: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// Random configurations per rank test.
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Self-stresses and coordinated-stress Laplacians of a framework.
    Stress {
        graph: PathBuf,
        /// Dimension of the random configuration (taken from --config otherwise).
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 4)]
        p: u32,
        /// Exact rational configuration, one line of coordinates per vertex.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Random graphs built from K5-minus and B1 by the inductive operations.
    Generate {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Directory for the graph files and manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hitting times of rigidity in the random graph process.
    Thresholds {
        #[arg(long, value_delimiter = ',', default_value = "20,40,80")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        p: u32,
        /// Random processes per n.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckLocal { .. } => "check-local",
            Command::CheckGlobal { .. } => "check-global",
            Command::Stress { .. } => "stress",
            Command::Generate { .. } => "generate",
            Command::Thresholds { .. } => "thresholds",
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<report::Report> {
    let ctx = Ctx {
        seed: cli.seed,
        field: PrimeField::new(cli.modulus)?,
    };
    match &cli.command {
        Command::CheckLocal {
            graph,
            dim,
            p,
            trials,
        } => commands::check_local(&ctx, graph, *dim, *p, *trials),
        Command::CheckGlobal {
            graph,
            dim,
            p,
            mode,
            trials,
        } => commands::check_global_cmd(&ctx, graph, *dim, *p, (*mode).into(), *trials),
        Command::Stress {
            graph,
            dim,
            p,
            config,
        } => commands::stress_cmd(&ctx, graph, *dim, *p, config.as_ref()),
        Command::Generate { count, max_n, out } => {
            commands::generate(&ctx, *count, *max_n, out.as_ref())
        }
        Command::Thresholds {
            n_list,
            dim,
            p,
            trials,
        } => commands::thresholds(&ctx, n_list, *dim, *p, *trials),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            match cli.format {
                Format::Json => emit(
                    &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"),
                ),
                Format::Text => emit(&report.render_text()),
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(err) => {
            match cli.format {
                Format::Json => {
                    let r = ErrorReport {
                        command: cli.command.name(),
                        outcome: "error",
                        exit_code: EXIT_ERROR,
                        error: format!("{err:#}"),
                    };
                    emit(&(serde_json::to_string_pretty(&r).expect("report serializes") + "\n"));
                }
                Format::Text => eprintln!("error: {err:#}"),
            }
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
