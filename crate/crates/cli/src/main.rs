//! `oscibound`: batch front-end.
//!
//! Exit status: 0 on success, 2 for an invalid config or problem, 3 when
//! some quadrature did not converge (outputs are still written, plus
//! `diagnostics.json`), 1 for anything else.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use output::{Diagnostics, OutDir};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    NonConvergence(usize),
    Other(anyhow::Error),
}

impl Failure {
    pub fn config(msg: impl Into<String>) -> Self {
        Failure::Config(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::NonConvergence(_) => 3,
            Failure::Other(_) => 1,
        }
    }
}

impl From<oscibound::Error> for Failure {
    fn from(e: oscibound::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::NonConvergence(n) => write!(f, "{n} point(s) did not converge; see diagnostics.json"),
            Failure::Other(e) => write!(f, "{e:#}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "oscibound",
    version,
    about = "Oscillatory integrals, explicit decay bounds and dispersive sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// RunConfig JSON document.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out` in the config (default `.`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; overrides `workers` in the config.
    #[arg(long)]
    workers: Option<usize>,
    /// Seed for random grids; overrides `seed` in the config (default 0).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// I(ω) on the ω grid, as CSV.
    Integrate(Common),
    /// Van der Corput certificates, as JSON.
    Bound(Common),
    /// Certificates checked against quadrature on the ω grid.
    Verify(Common),
    /// Envelope decay fit of |I(ω)|.
    Decay(Common),
    /// Solution values along rays x = vt.
    Propagate(Common),
    /// Cone localization report with ray sweeps.
    Localize(Common),
    /// Klein-Gordon light-cone experiment.
    KgDemo(Common),
}

type Runner = fn(&RunConfig, &mut commands::Ctx) -> Result<(), Failure>;

fn run(cli: Cli) -> Result<OutDir, Failure> {
    let (name, common, runner): (&'static str, Common, Runner) = match cli.command {
        Command::Integrate(c) => ("integrate", c, commands::integrate),
        Command::Bound(c) => ("bound", c, commands::bound),
        Command::Verify(c) => ("verify", c, commands::verify),
        Command::Decay(c) => ("decay", c, commands::decay),
        Command::Propagate(c) => ("propagate", c, commands::propagate),
        Command::Localize(c) => ("localize", c, commands::localize),
        Command::KgDemo(c) => ("kg-demo", c, commands::kg),
    };
    let cfg = RunConfig::load(&common.config)?;
    let workers = common.workers.or(cfg.workers).unwrap_or(0);
    let out = common
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let mut ctx = commands::Ctx {
        command: name,
        seed: common.seed.or(cfg.seed).unwrap_or(0),
        out: OutDir::create(&out)?,
        diag: Diagnostics::default(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::Other(e.into()))?;
    pool.install(|| runner(&cfg, &mut ctx))?;
    ctx.finish()
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            for p in &out.written {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("oscibound: {e}");
            ExitCode::from(e.code())
        }
    }
}
