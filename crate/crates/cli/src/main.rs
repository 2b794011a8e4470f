//! `permagic`: command-line driver for the permutation-gate magic pipeline.
//!
//! Reports go to stdout (or to files under `--out`); progress goes to stderr.

mod modes;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use output::{Failure, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// enumerate two-generator groups of magic permutation gates
    Search,
    /// eigenstates, orthogonality graph and pentagons of a group
    Classify,
    /// Wigner function of one state
    Wigner,
    /// negativity of the reference magic states against the bundled table
    Table2,
    /// pentagon census of a group's orthogonality graph
    Context,
    /// phase-point property checks
    Props,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
            Format::Text => "txt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionArg {
    Direct,
    Tensor,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NotationArg {
    OneLine,
    Cycle,
}

#[derive(Debug, Parser)]
#[command(name = "permagic", version, about = "Magic states and contextuality from permutation gates")]
pub struct Args {
    #[arg(long, value_enum)]
    pub mode: Mode,

    /// dimension(s); comma-separated where a mode accepts several
    #[arg(long, value_delimiter = ',')]
    pub dim: Vec<usize>,

    /// generators separated by ';', e.g. "2,3,1,4;1,3,4,2"
    #[arg(long, value_delimiter = ';')]
    pub generators: Vec<String>,

    #[arg(long, value_enum, default_value = "one-line")]
    pub notation: NotationArg,

    /// a bundled group by name, e.g. S3, A4
    #[arg(long)]
    pub group: Option<String>,

    /// a reference-state name or comma-separated amplitudes
    #[arg(long)]
    pub state: Option<String>,

    /// variable binding for amplitudes, e.g. w=E(6); repeatable
    #[arg(long = "var")]
    pub vars: Vec<String>,

    /// smallest commuting clique that contributes eigenstates
    #[arg(long, default_value_t = 1)]
    pub min_clique: usize,

    #[arg(long, default_value_t = permagic::gates::DEFAULT_ORDER_CAP)]
    pub order_cap: usize,

    #[arg(long, value_enum, default_value = "both")]
    pub construction: ConstructionArg,

    /// for d ≥ 5 keep only magic rays with amplitudes in {0, ±1}
    #[arg(long)]
    pub paper_restriction: bool,

    /// random states used by the reconstruction check
    #[arg(long, default_value_t = 20)]
    pub samples: usize,

    /// directory receiving one file per supported format
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,

    /// wall-clock limit for the computation
    #[arg(long)]
    pub budget_seconds: Option<f64>,

    /// where stabilizer sets are cached
    #[arg(long, env = "PERMAGIC_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

fn run(args: Args) -> Result<Report, Failure> {
    if let Some(dir) = &args.cache_dir {
        std::env::set_var(permagic::pauli::CACHE_ENV, dir);
    }
    if !output::supported(args.mode).contains(&args.format) {
        return Err(Failure::Config(format!("{} output is not available for this mode", args.format.extension())));
    }
    let budget = match args.budget_seconds {
        None => None,
        Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(Failure::Config(format!("invalid budget {s}"))),
    };
    let Some(budget) = budget else {
        return modes::dispatch(&args);
    };
    // the worker is abandoned on timeout; the process exits right after
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(modes::dispatch(&args));
    });
    match rx.recv_timeout(budget) {
        Ok(r) => r,
        Err(_) => Err(Failure::Compute(format!("budget of {:.1}s exceeded", budget.as_secs_f64()))),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (format, out) = (args.format, args.out.clone());
    let result = run(args).and_then(|report| {
        output::emit(&report, format, out.as_deref())?;
        Ok(report)
    });
    match &result {
        Ok(r) if r.mismatch => eprintln!("fixture mismatch"),
        Ok(_) => {}
        Err(f) => eprintln!("error: {f}"),
    }
    ExitCode::from(output::exit_code(&result))
}
