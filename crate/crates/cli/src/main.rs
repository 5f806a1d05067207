//! Command-line front end: sampling, GGM computation, ensemble
//! experiments, and data export. All numerics live in the library; this
//! binary only parses arguments and moves bytes.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on numerical,
//! validation, or I/O failures.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gauss_ggm_core::{
    asymptotic_ggm, compute_ggm, compute_ggm_single_mode, gamma_equivalence_test, run_ensemble,
    run_ensemble_with_bin_width, sample_state, tail_probability, CovarianceMatrix, EnsembleSpec,
    EnsembleStats, GammaPolicy, GgmMode, RandomStateSpec, TailEstimate,
};

#[derive(Parser)]
#[command(
    name = "gauss-ggm",
    version,
    about = "Haar-random pure Gaussian states at fixed energy per mode and their genuine multimode entanglement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one random pure state and emit its covariance matrix as JSON.
    Sample(SampleArgs),
    /// Compute the GGM of a covariance matrix stored as JSON.
    Ggm(GgmArgs),
    /// Run a seeded ensemble and emit GGM statistics.
    Ensemble(EnsembleArgs),
    /// Print the closed-form large-n GGM average (nu_bar - 1)/(nu_bar + 1).
    Asymptotic(AsymptoticArgs),
    /// Estimate tail probabilities of the GGM around a reference value.
    Tail(TailArgs),
    /// Compare the GGM distributions of two squeezing spectra on one shell.
    GammaTest(GammaTestArgs),
    /// Run n = 3..6 at nu_bar = 2.6 and print a mean/stddev summary table.
    Table1(Table1Args),
}

#[derive(Args)]
struct StateArgs {
    /// Number of modes.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Average energy per mode; the vacuum shell is 1.
    #[arg(long = "nu-bar", default_value_t = 2.6)]
    nu_bar: f64,
    /// RNG seed. GAUSS_GGM_SEED overrides the default; --seed wins over both.
    #[arg(long, default_value_t = 42, env = "GAUSS_GGM_SEED")]
    seed: u64,
    /// Squeezing spectrum: "uniform" or a comma-separated list of z values.
    #[arg(long, default_value = "uniform", value_parser = parse_gamma)]
    gamma: GammaPolicy,
}

impl StateArgs {
    fn spec(&self) -> RandomStateSpec {
        RandomStateSpec::with_gamma(self.n, self.nu_bar, self.seed, self.gamma.clone())
    }
}

#[derive(Args)]
struct RunArgs {
    /// Number of states to draw.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Parallel workers; each consumes its own (seed, worker) sub-stream.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GgmModeArg {
    /// Exact enumeration over all bipartition sizes (n <= 24).
    Full,
    /// Single-mode reductions only.
    SingleMode,
}

impl From<GgmModeArg> for GgmMode {
    fn from(mode: GgmModeArg) -> Self {
        match mode {
            GgmModeArg::Full => GgmMode::Full,
            GgmModeArg::SingleMode => GgmMode::SingleMode,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GgmArgs {
    /// Covariance-matrix JSON file, or "-" for stdin.
    input: PathBuf,
    #[arg(long = "ggm-mode", value_enum, default_value_t = GgmModeArg::Full)]
    ggm_mode: GgmModeArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnsembleArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long = "ggm-mode", value_enum, default_value_t = GgmModeArg::Full)]
    ggm_mode: GgmModeArg,
    /// Histogram bin width.
    #[arg(long = "bins", default_value_t = 0.05)]
    bins: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json emits the full statistics; csv emits the histogram table.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Additionally write the histogram CSV to this path.
    #[arg(long = "histogram-csv")]
    histogram_csv: Option<PathBuf>,
}

#[derive(Args)]
struct AsymptoticArgs {
    #[arg(long = "nu-bar", default_value_t = 2.6)]
    nu_bar: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TailArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Tail probabilities default to the single-mode estimator, which is
    /// the regime the concentration statement addresses.
    #[arg(long = "ggm-mode", value_enum, default_value_t = GgmModeArg::SingleMode)]
    ggm_mode: GgmModeArg,
    /// Reference GGM; defaults to the asymptotic value for nu_bar.
    #[arg(long)]
    reference: Option<f64>,
    /// Comma-separated epsilon thresholds.
    #[arg(long, default_value = "0.0025,0.005,0.01,0.02,0.04", value_parser = parse_float_list)]
    epsilons: FloatList,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct GammaTestArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Squeezing spectrum of the second ensemble.
    #[arg(long = "gamma-b", default_value = "uniform", value_parser = parse_gamma)]
    gamma_b: GammaPolicy,
    /// Seed of the second ensemble; defaults to --seed.
    #[arg(long = "seed-b")]
    seed_b: Option<u64>,
    #[arg(long = "ggm-mode", value_enum, default_value_t = GgmModeArg::Full)]
    ggm_mode: GgmModeArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 42, env = "GAUSS_GGM_SEED")]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to an aligned text table; json and csv are also available.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone)]
struct FloatList(Vec<f64>);

fn parse_gamma(raw: &str) -> Result<GammaPolicy, String> {
    if raw == "uniform" {
        return Ok(GammaPolicy::Uniform);
    }
    let values = raw
        .split(',')
        .map(|item| item.trim().parse::<f64>().map_err(|e| format!("bad z value {item:?}: {e}")))
        .collect::<Result<Vec<f64>, String>>()?;
    Ok(GammaPolicy::Explicit(values))
}

fn parse_float_list(raw: &str) -> Result<FloatList, String> {
    let values = raw
        .split(',')
        .map(|item| item.trim().parse::<f64>().map_err(|e| format!("bad value {item:?}: {e}")))
        .collect::<Result<Vec<f64>, String>>()?;
    Ok(FloatList(values))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        std::process::exit(2);
    }
}

fn run(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    match command {
        Command::Sample(args) => {
            let spec = args.state.spec();
            let sigma = sample_state(&spec, &mut spec.rng())?;
            emit(args.out.as_deref(), &json_line(&sigma)?)
        }
        Command::Ggm(args) => {
            let sigma: CovarianceMatrix = serde_json::from_str(&read_input(&args.input)?)?;
            let result = match args.ggm_mode {
                GgmModeArg::Full => compute_ggm(&sigma)?,
                GgmModeArg::SingleMode => compute_ggm_single_mode(&sigma)?,
            };
            emit(args.out.as_deref(), &json_line(&result)?)
        }
        Command::Ensemble(args) => {
            let spec = EnsembleSpec {
                state_spec: args.state.spec(),
                samples: args.run.samples,
                ggm_mode: args.ggm_mode.into(),
                workers: args.run.workers,
            };
            let stats = run_ensemble_with_bin_width(&spec, args.bins)?;
            if let Some(path) = &args.histogram_csv {
                std::fs::write(path, stats.histogram.to_csv())?;
            }
            let rendered = match args.format {
                Format::Json => json_line(&stats)?,
                Format::Csv => stats.histogram.to_csv(),
            };
            emit(args.out.as_deref(), &rendered)
        }
        Command::Asymptotic(args) => {
            let value = asymptotic_ggm(args.nu_bar)?;
            emit(args.out.as_deref(), &format!("{value}\n"))
        }
        Command::Tail(args) => {
            let spec = EnsembleSpec {
                state_spec: args.state.spec(),
                samples: args.run.samples,
                ggm_mode: args.ggm_mode.into(),
                workers: args.run.workers,
            };
            let reference = match args.reference {
                Some(value) => value,
                None => asymptotic_ggm(args.state.nu_bar)?,
            };
            let estimate = tail_probability(&spec, reference, &args.epsilons.0)?;
            let rendered = match args.format {
                Format::Json => json_line(&estimate)?,
                Format::Csv => tail_csv(&estimate),
            };
            emit(args.out.as_deref(), &rendered)
        }
        Command::GammaTest(args) => {
            let spec_a = EnsembleSpec {
                state_spec: args.state.spec(),
                samples: args.run.samples,
                ggm_mode: args.ggm_mode.into(),
                workers: args.run.workers,
            };
            let mut state_b = args.state.spec();
            state_b.gamma = args.gamma_b.clone();
            state_b.seed = args.seed_b.unwrap_or(args.state.seed);
            let spec_b = EnsembleSpec {
                state_spec: state_b,
                samples: args.run.samples,
                ggm_mode: args.ggm_mode.into(),
                workers: args.run.workers,
            };
            let report = gamma_equivalence_test(&spec_a, &spec_b)?;
            emit(args.out.as_deref(), &json_line(&report)?)
        }
        Command::Table1(args) => {
            let mut rows = Vec::new();
            for n in 3..=6 {
                let spec = EnsembleSpec {
                    state_spec: RandomStateSpec::new(n, 2.6, args.seed),
                    samples: args.samples,
                    ggm_mode: GgmMode::Full,
                    workers: args.workers,
                };
                rows.push(run_ensemble(&spec)?);
            }
            emit(args.out.as_deref(), &render_table(&rows, args.format, args.samples)?)
        }
    }
}

fn render_table(
    rows: &[EnsembleStats],
    format: Option<Format>,
    samples: usize,
) -> Result<String, Box<dyn std::error::Error>> {
    match format {
        Some(Format::Json) => {
            let entries: Vec<serde_json::Value> = rows
                .iter()
                .map(|s| {
                    serde_json::json!({ "n": s.n, "mean": s.mean, "stddev": s.stddev })
                })
                .collect();
            Ok(format!("{}\n", serde_json::to_string(&entries)?))
        }
        Some(Format::Csv) => {
            let mut out = String::from("n,mean,stddev\n");
            for s in rows {
                writeln!(out, "{},{},{}", s.n, s.mean, s.stddev).expect("string write");
            }
            Ok(out)
        }
        None => {
            let mut out =
                format!("GGM over Haar-random pure states, nu_bar = 2.6, N = {samples}\n");
            out.push_str(" n      mean    stddev\n");
            for s in rows {
                writeln!(out, "{:2}    {:.4}    {:.4}", s.n, s.mean, s.stddev)
                    .expect("string write");
            }
            Ok(out)
        }
    }
}

fn tail_csv(estimate: &TailEstimate) -> String {
    let mut out = String::from("epsilon,probability\n");
    for (eps, p) in estimate.epsilon_grid.iter().zip(&estimate.probabilities) {
        writeln!(out, "{eps},{p}").expect("string write");
    }
    out
}

fn json_line<T: serde::Serialize>(value: &T) -> Result<String, Box<dyn std::error::Error>> {
    Ok(format!("{}\n", serde_json::to_string(value)?))
}

fn read_input(path: &Path) -> Result<String, Box<dyn std::error::Error>> {
    if path == Path::new("-") {
        let mut buffer = String::new();
        std::io::stdin().read_to_string(&mut buffer)?;
        Ok(buffer)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), Box<dyn std::error::Error>> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}
