//! `crepant`: command-line front end. Every subcommand prints one JSON
//! document; the exit code is 0 when all checks pass, 1 when a check fails
//! and 2 on errors.

mod cache;
mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use crepant::givental::Pair;
use crepant::lg::Chart;
use crepant::ModelId;

use crate::cache::Cache;
use crate::config::{FileConfig, Settings};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] crepant::Error),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("json: {0}")]
    Json(String),
    #[error("cache directory {0} does not exist")]
    MissingCacheDir(PathBuf),
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser, Debug)]
#[command(name = "crepant", version, about = "Mirror-symmetry computations for P(1,1,2)/F2 and P(1,1,1,3)/F3")]
struct Cli {
    /// TOML file with order, precision, cache_dir and [barnes] sample points.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Truncation order of series.
    #[arg(long, global = true)]
    order: Option<i64>,
    /// Working precision in decimal digits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Cache directory; overrides CREPANT_CACHE_DIR and the config file.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Compact JSON instead of pretty-printed.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    F2,
    F3,
    P112,
    P1113,
}

impl From<ModelArg> for ModelId {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::F2 => ModelId::F2,
            ModelArg::F3 => ModelId::F3,
            ModelArg::P112 => ModelId::P112,
            ModelArg::P1113 => ModelId::P1113,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PairArg {
    #[value(name = "p1113-f3")]
    P1113F3,
    #[value(name = "p112-f2")]
    P112F2,
}

impl From<PairArg> for Pair {
    fn from(p: PairArg) -> Self {
        match p {
            PairArg::P1113F3 => Pair::P1113F3,
            PairArg::P112F2 => Pair::P112F2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChartArg {
    Large,
    Orbifold,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Cohomology rings of the four models.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// I-function coefficients (exact rationals).
    Ifun {
        #[arg(long, value_enum)]
        model: ModelArg,
    },
    /// Apply the Picard–Fuchs operators to the I-function.
    PfCheck {
        #[arg(long, value_enum)]
        model: ModelArg,
    },
    /// Mirror map q(y) and its inverse.
    MirrorMap {
        #[arg(long, value_enum)]
        model: ModelArg,
    },
    /// Continued resolution I-function at the orbifold point.
    Continue {
        #[arg(long, value_enum)]
        pair: PairArg,
        /// Compare the Barnes integral with both residue sums instead.
        #[arg(long)]
        barnes: bool,
        /// Tolerance for the numeric continuation identity.
        #[arg(long, default_value_t = 1e-20)]
        tol: f64,
    },
    /// The symplectic transformation U with its property checks.
    Umatrix {
        #[arg(long, value_enum)]
        pair: PairArg,
    },
    /// Landau–Ginzburg critical points, Gram check and ring relations.
    Lg {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Flat coordinates q (one per base variable).
        #[arg(long = "q", num_args = 1.., required = true)]
        q: Vec<f64>,
        #[arg(long, value_enum, default_value = "large")]
        chart: ChartArg,
    },
    /// The map Θ, optionally verified at q.
    Theta {
        #[arg(long, value_enum)]
        pair: PairArg,
        #[arg(long, default_value_t = 0.01)]
        q: f64,
        #[arg(long)]
        verify: bool,
    },
    /// Aggregate report of every verification.
    Report {
        /// Include the slow Barnes quadrature section.
        #[arg(long)]
        all: bool,
        /// Write the report to this file (atomically) as well as stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ModelsAction {
    List,
    Show {
        #[arg(value_enum)]
        model: ModelArg,
    },
}

fn run(cli: Cli) -> Result<commands::Output, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let s = Settings::resolve(file, cli.order, cli.precision, cli.cache_dir.clone())?;
    let cache = Cache::new(s.cache_dir.clone());
    match cli.cmd {
        Cmd::Models { action: ModelsAction::List } => Ok(commands::models_list()),
        Cmd::Models { action: ModelsAction::Show { model } } => Ok(commands::models_show(model.into())),
        Cmd::Ifun { model } => commands::ifun(model.into(), &s, &cache),
        Cmd::PfCheck { model } => commands::pf(model.into(), &s),
        Cmd::MirrorMap { model } => commands::mirror(model.into(), &s, &cache),
        Cmd::Continue { barnes: true, pair, .. } => {
            if Pair::from(pair) != Pair::P1113F3 {
                return Err(CliError::Usage("the Barnes comparison is implemented for p1113-f3".into()));
            }
            commands::barnes(&s)
        }
        Cmd::Continue { pair, tol, .. } => commands::continued(pair.into(), &s, tol),
        Cmd::Umatrix { pair } => commands::umatrix(pair.into()),
        Cmd::Lg { model, q, chart } => {
            let chart = match chart {
                ChartArg::Large => Chart::Large,
                ChartArg::Orbifold => Chart::Orbifold,
            };
            commands::lg(model.into(), &q, chart, &s)
        }
        Cmd::Theta { pair, q, verify } => commands::theta_cmd(pair.into(), q, verify, &s),
        Cmd::Report { all, out } => {
            let (v, ok) = report::build(&s, all)?;
            if let Some(path) = out {
                let text = report::render(&v);
                cache::write_atomic(&path, text.as_bytes())?;
            }
            Ok((v, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let compact = cli.compact;
    match run(cli) {
        Ok((v, ok)) => {
            let text = if compact { format!("{v}\n") } else { report::render(&v) };
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
