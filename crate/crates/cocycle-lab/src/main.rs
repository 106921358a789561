use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cocycle_lab::cli;
use cocycle_lab::config::*;
use cocycle_lab::error::{Error, Result};
use cocycle_lab::report::{golden_update, golden_verify, Report, Tolerances};

#[derive(Parser)]
#[command(
    name = "cocycle-lab",
    about = "Numerical laboratory for cocycles and Fourier multipliers on finite group algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file for the command.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Root seed; all randomness derives from it deterministically.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output directory for reports and CSV tables.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Compare against (or rewrite) a golden report.
    #[arg(long, global = true, value_enum)]
    golden: Option<GoldenMode>,

    /// Golden file path (default: <out>/golden/<command>.json).
    #[arg(long, global = true)]
    golden_path: Option<PathBuf>,

    /// Named tolerance overrides, e.g. --tol-overrides ks=1e-6.
    #[arg(long, global = true, num_args = 0.., value_name = "K=V")]
    tol_overrides: Vec<String>,

    /// Override the cocycle construction tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Copy, Clone, ValueEnum)]
enum GoldenMode {
    Verify,
    Update,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a length function: negativity eigendecomposition + Schoenberg grid.
    CheckLength,
    /// Build left/right cocycles and verify every defining identity.
    Cocycle,
    /// Semigroup BMO norms with Kadison-Schwarz positivity witnesses.
    Bmo,
    /// Multiplier symbols: exact L2 law, lower-bound searches, Schur residual.
    Multiplier,
    /// Finite-difference Mihlin smoothness estimates for a symbol expression.
    Mihlin,
    /// Littlewood-Paley square functions and reconstruction ratios.
    Lp,
    /// Dimension-free ratio experiments for the gradient form.
    Meyer,
    /// Gaussian Monte-Carlo crossed-product norms against the gradient form.
    Khintchine,
    /// FFT multiplier experiments on periodized grids.
    Fft,
    /// Merge reports produced by other commands.
    ReportMerge,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckLength => "check-length",
            Command::Cocycle => "cocycle",
            Command::Bmo => "bmo",
            Command::Multiplier => "multiplier",
            Command::Mihlin => "mihlin",
            Command::Lp => "lp",
            Command::Meyer => "meyer",
            Command::Khintchine => "khintchine",
            Command::Fft => "fft",
            Command::ReportMerge => "report-merge",
        }
    }
}

fn load_config<T: serde::de::DeserializeOwned>(path: &Option<PathBuf>) -> Result<T> {
    let Some(path) = path else {
        return Err(Error::Usage("--config is required for this command".into()));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Usage(format!("config schema violation: {e}")))
}

fn run(cli: &Cli) -> Result<Report> {
    let mut tols = Tolerances::default();
    tols.apply_overrides(&cli.tol_overrides)?;
    if let Some(t) = cli.tol {
        tols.apply_overrides(&[format!("cocycle={t}")])?;
    }
    let seed = cli.seed;
    let out = Some(cli.out.as_path());
    let started = std::time::Instant::now();
    let mut report = match &cli.command {
        Command::CheckLength => cli::run_check_length(&load_config(&cli.config)?, seed, &tols)?,
        Command::Cocycle => {
            let mut cfg: CocycleConfig = load_config(&cli.config)?;
            if let Some(t) = cli.tol {
                cfg.tol = t;
            }
            cli::run_cocycle(&cfg, seed, &tols, out)?
        }
        Command::Bmo => cli::run_bmo(&load_config(&cli.config)?, seed, &tols, out)?,
        Command::Multiplier => cli::run_multiplier(&load_config(&cli.config)?, seed, &tols, out)?,
        Command::Mihlin => cli::run_mihlin(&load_config(&cli.config)?, seed, &tols)?,
        Command::Lp => cli::run_lp(&load_config(&cli.config)?, seed, &tols, out)?,
        Command::Meyer => cli::run_meyer(&load_config(&cli.config)?, seed, &tols)?,
        Command::Khintchine => cli::run_khintchine(&load_config(&cli.config)?, seed, &tols)?,
        Command::Fft => cli::run_fft(&load_config(&cli.config)?, seed, &tols, out)?,
        Command::ReportMerge => cli::run_merge(&load_config(&cli.config)?, seed)?,
    };
    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let report_path = cli.out.join(format!("{}-report.json", cli.command.name()));
    if let Err(e) = report.write(&report_path) {
        eprintln!("error writing report: {e}");
        return ExitCode::from(1);
    }
    print!("{}", report.summary());
    println!("report: {}", report_path.display());

    let mut ok = report.passed;
    if let Some(mode) = cli.golden {
        let path = cli
            .golden_path
            .clone()
            .unwrap_or_else(|| cli.out.join("golden").join(format!("{}.json", cli.command.name())));
        match mode {
            GoldenMode::Update => {
                if let Err(e) = golden_update(&report, &path) {
                    eprintln!("error writing golden: {e}");
                    return ExitCode::from(1);
                }
                println!("golden updated: {}", path.display());
            }
            GoldenMode::Verify => match golden_verify(&report, &path) {
                Err(e) => {
                    eprintln!("error reading golden: {e}");
                    return ExitCode::from(1);
                }
                Ok(diffs) if diffs.is_empty() => println!("golden verify: PASS"),
                Ok(diffs) => {
                    ok = false;
                    println!("golden verify: FAIL ({} fields)", diffs.len());
                    for d in diffs {
                        println!(
                            "  {}: expected {:?}, got {:?} (tol {:.1e})",
                            d.field, d.expected, d.actual, d.tol
                        );
                    }
                }
            },
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
