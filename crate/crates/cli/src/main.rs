use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use codec::campaign::{self, RunOptions, DEFAULT_ENUM_CAP};
use codec::config::ExperimentConfig;
use codec::report::Report;
use msrd::FieldTower;

const AFTER_HELP: &str = "\
CSV columns by campaign kind:
  reliability  t, rho, inside_radius, trials, successes, success_rate, mean_muls, min_muls
  secrecy      mu, wiretaps, sampled, max_leakage_formula, max_leakage_empirical, leaking_wiretaps, secure
  complexity   n, k, decode_muls, newton_muls, wall_time_s  (last row: fitted log-log slopes)
  bounds       t, rho, mu, capacity, achieved, k1, singleton_log_q, lifted_log_q, lifted_rate,
               gap, gap_bound, gap_certified
Floats carry 6 significant digits; NA marks values that were not computed.

Exit status: 0 success, 1 a guaranteed property failed, 2 configuration or I/O error.
CODEC_ENUM_CAP bounds exhaustive enumerations (default 6561).";

#[derive(Parser)]
#[command(name = "codec", version, about = "Linearized Reed-Solomon multishot network coding experiments", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the campaign described by a configuration file.
    Run {
        config: PathBuf,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path (default: the config's `out`, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        /// Write one JSON record per reliability trial to this path.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Parse and check a configuration file without running it.
    Validate { config: PathBuf },
    /// Multiplication-count sweep on GF(17^4) with width-4 shots at rate 1/2.
    Bench {
        #[arg(long, default_value_t = 64)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Config(String),
    Breach(Vec<String>),
}

fn enum_cap() -> Result<u64, Failure> {
    match std::env::var("CODEC_ENUM_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Config(format!("CODEC_ENUM_CAP must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    ExperimentConfig::parse(&text).map_err(|e| match e.line {
        0 => Failure::Config(format!("{}: {e}", path.display())),
        _ => Failure::Config(format!("{}:{e}", path.display())),
    })
}

fn emit(report: &Report, out: Option<&PathBuf>) -> Result<(), Failure> {
    let io_err = |e: csv::Error| Failure::Config(format!("writing report: {e}"));
    match out {
        Some(p) => report.write_csv(fs::File::create(p).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?).map_err(io_err)?,
        None => report.write_csv(io::stdout().lock()).map_err(io_err)?,
    }
    match report.breaches.is_empty() {
        true => Ok(()),
        false => Err(Failure::Breach(report.breaches.clone())),
    }
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, Failure> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Failure::Config("--workers must be at least 1".into()));
        }
        b = b.num_threads(w);
    }
    b.build().map_err(|e| Failure::Config(e.to_string()))
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { config, trials, seed, out, workers, transcript } => {
            let mut cfg = load(&config)?;
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let out = out.or_else(|| cfg.out.clone());
            let opts = RunOptions { enum_cap: enum_cap()?, transcript: transcript.as_deref() };
            let report = pool(workers)?
                .install(|| campaign::run(&cfg, &opts))
                .map_err(|e| Failure::Config(format!("transcript: {e}")))?;
            emit(&report, out.as_ref())
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            println!("ok: {}", cfg.summary());
            Ok(())
        }
        Command::Bench { max_n, trials, out } => {
            let t = FieldTower::new(17, 1, 4).map_err(|e| Failure::Config(e.to_string()))?;
            if max_n < 4 {
                return Err(Failure::Config("--max-n must be at least 4".into()));
            }
            emit(&campaign::run_complexity(&t, 4, 0.5, max_n, trials, 0), out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(io::stderr(), "error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Breach(list)) => {
            let mut err = io::stderr().lock();
            for b in list {
                let _ = writeln!(err, "guarantee violated: {b}");
            }
            ExitCode::from(1)
        }
    }
}
