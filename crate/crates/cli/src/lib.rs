//! Command-line driver: classify vertex-labeled graphs by heat diffusion on
//! the clique complexes of their simplex-weighted super-graphs.

pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::{load_config_file, resolve, ConfigFile, RunFlags};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "dff",
    version,
    about = "Graph classification via heat diffusion on simplex-weighted super-graph complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// Directory holding datasets (default: $DFF_DATA_DIR, else ./data)
    #[arg(long)]
    pub dataset_dir: Option<PathBuf>,
    /// Dataset name, e.g. MUTAG
    #[arg(long)]
    pub dataset: Option<String>,
    /// Comma-separated subset of vertex-up, edge-down, edge-up, edge-both,
    /// triangle-down (default: all five)
    #[arg(long, value_delimiter = ',')]
    pub variants: Option<Vec<String>>,
    /// Comma-separated diffusion scales (default: 1 down to 1e-5 by decades)
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    /// Cross-validation folds (default: 10)
    #[arg(long)]
    pub folds: Option<usize>,
    /// Master seed for folds and forests (default: 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Seeded cross-validation repetitions to average (default: 1)
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Output directory (default: results)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// JSON config file with the same keys as the flags; flags override
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Write one feature CSV per (variant, t) cell
    Extract(RunArgs),
    /// Extract features, then cross-validate a seeded random forest per cell
    Classify {
        #[command(flatten)]
        args: RunArgs,
        /// Stop after writing the feature CSVs
        #[arg(long)]
        features_only: bool,
    },
    /// Merge computed results with transcribed baseline references into
    /// grouped-bar plot data
    Report {
        /// Directory holding *_results.json files (default: results)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reference CSV of baseline accuracies (dataset,method,accuracy)
        #[arg(long)]
        baselines: Option<PathBuf>,
        /// JSON config file (its `out` key applies here)
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print per-graph super-graph complex sizes
    Stats {
        #[command(flatten)]
        args: RunArgs,
    },
}

fn flags_of(args: RunArgs) -> (RunFlags, Option<PathBuf>) {
    (
        RunFlags {
            dataset_dir: args.dataset_dir,
            dataset: args.dataset,
            variants: args.variants,
            t: args.t,
            folds: args.folds,
            seed: args.seed,
            repeats: args.repeats,
            out: args.out,
            jobs: args.jobs,
        },
        args.config,
    )
}

fn config_file(path: Option<&PathBuf>) -> Result<ConfigFile, CliError> {
    path.map_or_else(|| Ok(ConfigFile::default()), |p| load_config_file(p))
}

/// Sizes the global worker pool; later calls on an already-built pool are
/// ignored, which only matters to in-process tests.
fn configure_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Extract(args) => {
            let (flags, config_path) = flags_of(args);
            let cfg = resolve(flags, config_file(config_path.as_ref())?)?;
            configure_jobs(cfg.jobs);
            commands::run_extract(&cfg)
        }
        Command::Classify {
            args,
            features_only,
        } => {
            let (flags, config_path) = flags_of(args);
            let cfg = resolve(flags, config_file(config_path.as_ref())?)?;
            configure_jobs(cfg.jobs);
            commands::run_classify(&cfg, features_only)
        }
        Command::Report {
            out,
            baselines,
            config,
        } => {
            let file = config_file(config.as_ref())?;
            let results_dir = out
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("results"));
            let path = commands::run_report(&results_dir, baselines.as_deref())?;
            println!("plot data written to {}", path.display());
            Ok(())
        }
        Command::Stats { args } => {
            let (flags, config_path) = flags_of(args);
            let cfg = resolve(flags, config_file(config_path.as_ref())?)?;
            configure_jobs(cfg.jobs);
            commands::run_stats(&cfg)
        }
    }
}

/// Parses `argv` and runs the requested command, returning the process exit
/// code: 0 success, 1 usage error, 2 data error, 3 numerical failure.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            return 1;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
