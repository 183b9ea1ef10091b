//! The `psrsched` command line.
//!
//! Every command reads a scenario file (see [`crate::scenario`]) and writes
//! CSV or JSON to standard output, or to `<out>/<command>.<ext>` with
//! `--out`. Command-line values override the file, which overrides the
//! built-in defaults. Exit codes: 0 on success, 2 for invalid input, 3 when
//! brute force refuses the instance size, 4 for runtime failures.

mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Result;
use crate::scenario::ScenarioFile;

pub use commands::{random_nontrivial, BenchOutput, BenchRow, ClassifyOutput, SolveOutput, SolvedOrder};
pub use output::{parse_f64_list, parse_usize_list, Aggregate, SimulateOutput, Stats, SweepCell, SweepOutput};

#[derive(Debug, Parser)]
#[command(
    name = "psrsched",
    version,
    about = "PSR-aware uplink scheduling for overlapping Wi-Fi BSSs"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Write `<command>.csv` or `<command>.json` into this directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Root seed; overrides the scenario file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Only log errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,
    /// More logging; repeat for debug output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverChoice {
    Greedy,
    Brute,
    Both,
}

/// Overrides shared by the commands that build a scenario.
#[derive(Debug, Default, Args)]
pub struct ScenarioOpts {
    /// Scenario file (JSON). Relative paths are also looked up in
    /// `$PSRSCHED_CONFIG_DIR`.
    pub scenario: PathBuf,
    /// Which random non-RTA placement to use.
    #[arg(long, default_value_t = 0)]
    pub placement: u64,
    /// Measurement rounds per pair that must all pass.
    #[arg(long)]
    pub window: Option<usize>,
    /// Favorability threshold on the expected PSR SINR, dB.
    #[arg(long)]
    pub sinr_threshold: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order the non-RTA uplinks of one placement.
    Solve {
        #[command(flatten)]
        scenario: ScenarioOpts,
        #[arg(long, value_enum, default_value_t = SolverChoice::Both)]
        solver: SolverChoice,
    },
    /// Expected PSR SINR and favorability for every station pair.
    Classify {
        #[command(flatten)]
        scenario: ScenarioOpts,
    },
    /// Simulate one policy over several seeds.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioOpts,
        /// baseline, brute or greedy.
        #[arg(long, default_value = "baseline")]
        policy: String,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// RTA packet period, ms.
        #[arg(long)]
        trta: Option<f64>,
        /// Traffic horizon, s.
        #[arg(long)]
        duration: Option<f64>,
    },
    /// RTA periods x placements x policies, one CSV row per cell and metric.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioOpts,
        /// RTA periods in ms: `5,10,20` or `start:end:step`.
        #[arg(long, default_value = "20")]
        trta: String,
        #[arg(long, default_value_t = 20)]
        placements: u64,
        #[arg(long, default_value = "baseline,brute,greedy")]
        policies: String,
        #[arg(long)]
        duration: Option<f64>,
    },
    /// Greedy against brute force on random matrices.
    Bench {
        /// Column counts: `4,6,8` or `4-8`.
        #[arg(long, default_value = "4-8")]
        n: String,
        /// Row counts, same syntax.
        #[arg(long, default_value = "2,4")]
        m: String,
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Classify { .. } => "classify",
            Command::Simulate { .. } => "simulate",
            Command::Sweep { .. } => "sweep",
            Command::Bench { .. } => "bench",
        }
    }
}

impl ScenarioOpts {
    /// Scenario file with the command-line overrides applied.
    fn load(&self, seed: Option<u64>) -> Result<ScenarioFile> {
        let mut file = ScenarioFile::load(&self.scenario)?;
        if let Some(s) = seed {
            file.seed = s;
        }
        if let Some(w) = self.window {
            file.simulation.window_depth = w;
        }
        if let Some(t) = self.sinr_threshold {
            file.radio.sinr_threshold_db = t;
        }
        file.validate()?;
        Ok(file)
    }
}

/// Runs a parsed command line, writing the result to `stdout` unless `--out`
/// is given.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let name = cli.command.name();
    match &cli.global.out {
        Some(dir) => {
            let path = dir.join(format!("{name}.{}", cli.global.format.extension()));
            std::fs::create_dir_all(dir).map_err(|source| crate::Error::Io {
                path: dir.clone(),
                source,
            })?;
            let file = std::fs::File::create(&path).map_err(|source| crate::Error::Io {
                path: path.clone(),
                source,
            })?;
            let mut w = std::io::BufWriter::new(file);
            commands::dispatch(cli, &mut w)?;
            w.flush().map_err(|source| crate::Error::Io {
                path: path.clone(),
                source,
            })?;
            log::info!("wrote {}", path.display());
            Ok(())
        }
        None => commands::dispatch(cli, stdout),
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let level = if cli.global.quiet {
        log::LevelFilter::Error
    } else {
        match cli.global.verbose {
            0 => log::LevelFilter::Warn,
            1 => log::LevelFilter::Info,
            _ => log::LevelFilter::Debug,
        }
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_target(false)
        .try_init();

    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            log::error!("{e}");
            e.exit_code()
        }
    }
}
