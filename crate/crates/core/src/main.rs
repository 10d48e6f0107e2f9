use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fxvol::exec;
use fxvol::pipeline::{self, PairConfig, PipelineConfig, StageReport};
use fxvol::synthetic::{self, SyntheticConfig};

#[derive(Parser)]
#[command(name = "fxvol", version, about = "Exchange-rate volatility modeling and forecast backtesting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean prices, compute returns, statistics and the realized-vol proxy.
    Prepare(RunArgs),
    /// Fit the AIC/BIC lag-order grids on the in-sample returns.
    Grid(RunArgs),
    /// Produce out-of-sample forecasts for EWMA, GARCH-family and IV models.
    Backtest(RunArgs),
    /// Score forecasts on disk and write the comparison report.
    Evaluate(RunArgs),
    /// Run prepare, grid, backtest and evaluate in order.
    RunAll(RunArgs),
    /// Write the seeded synthetic price and implied-vol files.
    Synth(SynthArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Pipeline TOML file.
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long)]
    workers: Option<usize>,
    /// Disable data-parallel execution.
    #[arg(long)]
    sequential: bool,
    /// Override any config key, e.g. `--set forecast.refit_every=5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Run a single pair from this price CSV instead of the configured pairs.
    #[arg(long)]
    prices: Option<PathBuf>,
    /// Implied-vol CSV for `--prices`.
    #[arg(long, requires = "prices")]
    iv: Option<PathBuf>,
    /// Name for `--prices` (defaults to the file stem).
    #[arg(long, requires = "prices")]
    pair: Option<String>,
}

#[derive(Args)]
struct SynthArgs {
    /// Directory receiving synthetic_prices.csv and synthetic_iv.csv.
    #[arg(short, long, default_value = ".")]
    output_dir: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_returns: Option<usize>,
}

fn load_config(args: &RunArgs) -> fxvol::Result<PipelineConfig> {
    let mut cfg = match &args.config {
        Some(path) => PipelineConfig::load(path, &args.overrides)?,
        None => PipelineConfig::from_toml("", &args.overrides, Path::new("."))?,
    };
    if let Some(dir) = &args.output_dir {
        cfg.output_dir = dir.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(workers) = args.workers {
        cfg.workers = workers;
    }
    if args.sequential {
        cfg.parallel = false;
    }
    if let Some(prices) = &args.prices {
        let name = args.pair.clone().unwrap_or_else(|| {
            let stem = prices.file_stem().map_or_else(|| "pair".into(), |s| s.to_string_lossy().into_owned());
            pipeline::slug(&stem)
        });
        cfg.pairs = vec![PairConfig {
            name,
            prices: prices.clone(),
            iv: args.iv.clone(),
        }];
    }
    Ok(cfg)
}

fn run_stage(args: &RunArgs, stage: fn(&PipelineConfig) -> fxvol::Result<StageReport>) -> fxvol::Result<()> {
    let cfg = load_config(args)?;
    let report = exec::with_workers(cfg.workers, || stage(&cfg))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for path in &report.written {
        println!("{}", path.display());
    }
    Ok(())
}

fn synth(args: &SynthArgs) -> fxvol::Result<()> {
    let mut cfg = SyntheticConfig::default();
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(n) = args.n_returns {
        cfg.n_returns = n;
    }
    let data = synthetic::generate(&cfg)?;
    std::fs::create_dir_all(&args.output_dir)?;
    let prices = args.output_dir.join("synthetic_prices.csv");
    let iv = args.output_dir.join("synthetic_iv.csv");
    synthetic::write_prices_csv(&data.prices, std::fs::File::create(&prices)?)?;
    synthetic::write_iv_csv(&data.iv_dates, &data.iv, std::fs::File::create(&iv)?)?;
    println!("{}\n{}", prices.display(), iv.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Prepare(a) => run_stage(a, pipeline::prepare),
        Command::Grid(a) => run_stage(a, pipeline::grid),
        Command::Backtest(a) => run_stage(a, pipeline::backtest),
        Command::Evaluate(a) => run_stage(a, pipeline::evaluate),
        Command::RunAll(a) => run_stage(a, pipeline::run_all),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
