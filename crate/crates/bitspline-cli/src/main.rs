//! `bitspline` — estimation, testing, simulation, and diagnostics for
//! regression from coarsely quantized samples on a regular grid.
//!
//! Exit codes: 0 on success, 2 on usage errors (unknown flags, malformed
//! values), 1 on runtime errors (bad files, invalid configurations).
//! Usage errors are rejected before any output file is touched, and all
//! outputs are assembled in memory and written whole.

mod dataset;

use std::error::Error;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use bitspline::estimator::{self, FitSource};
use bitspline::inference;
use bitspline::quantizer::{self, MarkRule, Quantizer};
use bitspline::simulation::{self, ExperimentConfig, Parallelism};
use bitspline::spectral;
use dataset::{ingest_csv, Dataset, Mapping};

#[derive(Parser)]
#[command(
    name = "bitspline",
    version,
    about = "Nonparametric estimation and testing from b-bit quantized samples",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a periodic smoothing spline and write the fitted curve
    Estimate(EstimateArgs),
    /// Test the regression function against a null (zero, linear, or a file)
    Test(TestArgs),
    /// Run a Monte Carlo experiment described by a JSON config
    Simulate(SimulateArgs),
    /// Print eigenvalues and test-calibration quantities for (n, m, lambda)
    Spectral(SpectralArgs),
    /// Report quantizer error terms, separation rate, and condition checks
    Diagnose(DiagnoseArgs),
}

/// Flags shared by the dataset-consuming subcommands.
#[derive(Args)]
struct DataArgs {
    /// Input CSV file
    #[arg(long)]
    input: PathBuf,
    /// Covariate column name
    #[arg(long, default_value = "x")]
    x_col: String,
    /// Response column name
    #[arg(long, default_value = "y")]
    y_col: String,
    /// Covariate-to-grid mapping
    #[arg(long, value_enum, default_value_t = Mapping::Rank)]
    mapping: Mapping,
    /// Subtract the response sample mean before analysis
    #[arg(long)]
    center_y: bool,
    /// Quantize the (possibly centered) response at this bit depth
    /// (range-spanning thresholds, empirically optimal marks)
    #[arg(long)]
    b: Option<u32>,
    /// Smoothness order
    #[arg(long, default_value_t = 2)]
    m: u32,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Penalty: a positive number, "gcv", or "gcv-log"
    #[arg(long, default_value = "gcv", value_parser = parse_lambda)]
    lambda: LambdaArg,
    /// Output CSV for the fitted curve; metadata goes to <output>.meta.json
    #[arg(long, default_value = "curve.csv")]
    output: PathBuf,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Penalty: a positive number, "gcv", or "gcv-log"
    #[arg(long, default_value = "gcv-log", value_parser = parse_lambda)]
    lambda: LambdaArg,
    /// Null hypothesis: "zero", "linear", or "file:<csv>" with one value
    /// per design point in its first column
    #[arg(long, default_value = "zero", value_parser = parse_null)]
    null: NullArg,
    /// Test level
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Output JSON file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment configuration (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; the configuration is copied to <output stem>.config.json
    #[arg(long)]
    output: PathBuf,
    /// Override the config's RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Run the replication loop single-threaded
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct SpectralArgs {
    /// Design size
    #[arg(long)]
    n: usize,
    /// Smoothness order
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Penalty
    #[arg(long)]
    lambda: f64,
    /// Output JSON file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DiagnoseArgs {
    /// Design size
    #[arg(long)]
    n: usize,
    /// Smoothness order
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Penalty
    #[arg(long)]
    lambda: f64,
    /// Noise standard deviation
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Explicit thresholds (comma-separated, midpoint marks); when omitted,
    /// the test-oriented quantizer for (sigma, n, m) is diagnosed
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    thresholds: Option<Vec<f64>>,
    /// Output JSON file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parsed `--lambda` argument.
#[derive(Debug, Clone, Copy, PartialEq)]
enum LambdaArg {
    Fixed(f64),
    Gcv,
    GcvLog,
}

impl fmt::Display for LambdaArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaArg::Fixed(_) => f.write_str("fixed"),
            LambdaArg::Gcv => f.write_str("gcv"),
            LambdaArg::GcvLog => f.write_str("gcv-log"),
        }
    }
}

fn parse_lambda(raw: &str) -> Result<LambdaArg, String> {
    match raw {
        "gcv" => Ok(LambdaArg::Gcv),
        "gcv-log" => Ok(LambdaArg::GcvLog),
        _ => raw
            .parse::<f64>()
            .map(LambdaArg::Fixed)
            .map_err(|_| format!("expected a number, \"gcv\", or \"gcv-log\", got '{raw}'")),
    }
}

/// Parsed `--null` argument.
#[derive(Debug, Clone, PartialEq)]
enum NullArg {
    Zero,
    Linear,
    File(PathBuf),
}

fn parse_null(raw: &str) -> Result<NullArg, String> {
    match raw {
        "zero" => Ok(NullArg::Zero),
        "linear" => Ok(NullArg::Linear),
        _ => raw
            .strip_prefix("file:")
            .filter(|p| !p.is_empty())
            .map(|p| NullArg::File(PathBuf::from(p)))
            .ok_or_else(|| {
                format!("expected \"zero\", \"linear\", or \"file:<csv>\", got '{raw}'")
            }),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn Error>> {
    match cli.command {
        Command::Estimate(args) => estimate_cmd(args),
        Command::Test(args) => test_cmd(args),
        Command::Simulate(args) => simulate_cmd(args),
        Command::Spectral(args) => spectral_cmd(args),
        Command::Diagnose(args) => diagnose_cmd(args),
    }
}

/// Loads the dataset and applies centering and quantization, returning the
/// analysis vector plus everything needed for metadata.
struct Prepared {
    dataset: Dataset,
    z: Vec<f64>,
    y_mean: f64,
    quantizer: Option<Quantizer>,
}

fn prepare(data: &DataArgs) -> Result<Prepared, Box<dyn Error>> {
    let dataset = ingest_csv(&data.input, &data.x_col, &data.y_col, data.mapping)?;
    let y_mean = dataset.y.iter().sum::<f64>() / dataset.y.len() as f64;
    let y: Vec<f64> = if data.center_y {
        dataset.y.iter().map(|&v| v - y_mean).collect()
    } else {
        dataset.y.clone()
    };
    let (z, quantizer) = match data.b {
        Some(bits) => {
            let q = Quantizer::from_data(&y, bits, MarkRule::EmpiricalOptimal)?;
            (q.apply(&y), Some(q))
        }
        None => (y, None),
    };
    Ok(Prepared {
        dataset,
        z,
        y_mean,
        quantizer,
    })
}

fn resolve_lambda(arg: LambdaArg, z: &[f64], m: u32) -> Result<f64, Box<dyn Error>> {
    Ok(match arg {
        LambdaArg::Fixed(v) => v,
        LambdaArg::Gcv => estimator::gcv_select(z, m, &estimator::default_lambda_grid())?.0,
        LambdaArg::GcvLog => estimator::gcv_log_scaled(z, m, &estimator::default_lambda_grid())?,
    })
}

fn estimate_cmd(args: EstimateArgs) -> Result<(), Box<dyn Error>> {
    let prepared = prepare(&args.data)?;
    let lambda = resolve_lambda(args.lambda, &prepared.z, args.data.m)?;
    let mut fit = estimator::fit(&prepared.z, args.data.m, lambda)?;
    if prepared.quantizer.is_some() {
        fit.source = FitSource::Quantized;
    }

    // Assemble both outputs fully in memory before touching the filesystem.
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["x", "fitted"])?;
    for (x, fitted) in prepared.dataset.x.iter().zip(&fit.fitted_grid) {
        writer.write_record([x.to_string(), fitted.to_string()])?;
    }
    let curve = writer.into_inner()?;

    let meta = json!({
        "n": fit.n,
        "m": fit.m,
        "lambda": fit.lambda,
        "lambda_rule": args.lambda.to_string(),
        "b": args.data.b,
        "source": serde_json::to_value(fit.source)?,
        "mapped_grid": prepared.dataset.mapped_grid,
        "center_y": args.data.center_y,
        "y_mean": prepared.y_mean,
        "quantizer": prepared.quantizer.as_ref().map(|q| q.summary()),
    });

    fs::write(&args.output, curve)?;
    let meta_path = meta_sidecar_path(&args.output);
    fs::write(meta_path, serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

fn meta_sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn test_cmd(args: TestArgs) -> Result<(), Box<dyn Error>> {
    let prepared = prepare(&args.data)?;
    let n = prepared.z.len();
    let lambda = resolve_lambda(args.lambda, &prepared.z, args.data.m)?;
    let mut result = match &args.null {
        NullArg::Zero => inference::quantization_test(
            &prepared.z,
            &vec![0.0; n],
            args.data.m,
            lambda,
            args.alpha,
        )?,
        NullArg::Linear => inference::linearity_test(&prepared.z, args.data.m, lambda, args.alpha)?,
        NullArg::File(path) => {
            let f_star = read_null_grid(path, n)?;
            inference::quantization_test(&prepared.z, &f_star, args.data.m, lambda, args.alpha)?
        }
    };
    if let Some(q) = &prepared.quantizer {
        result = result.with_quantizer(q.summary());
    }
    emit_json(&serde_json::to_value(&result)?, args.output.as_deref())
}

/// Reads a null-function grid: one value per design point from the first
/// column of a headed CSV.
fn read_null_grid(path: &Path, n: usize) -> Result<Vec<f64>, Box<dyn Error>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    let mut values = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let line = index + 2;
        let record = record.map_err(|e| format!("line {line}: {e}"))?;
        let raw = record
            .get(0)
            .ok_or_else(|| format!("line {line}: empty record"))?;
        let value: f64 = raw
            .trim()
            .parse()
            .map_err(|_| format!("line {line}: non-numeric value '{raw}'"))?;
        values.push(value);
    }
    if values.len() != n {
        return Err(format!(
            "null grid has {} values but the dataset has {n} design points",
            values.len()
        )
        .into());
    }
    Ok(values)
}

fn simulate_cmd(args: SimulateArgs) -> Result<(), Box<dyn Error>> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let mut config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| format!("invalid config {}: {e}", args.config.display()))?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let mode = if args.sequential {
        Parallelism::Sequential
    } else {
        Parallelism::default()
    };
    let rows = simulation::run(&config, mode)?;
    simulation::write_outputs(&config, &rows, &args.output)?;
    Ok(())
}

fn spectral_cmd(args: SpectralArgs) -> Result<(), Box<dyn Error>> {
    let sq = spectral::build_spectral(args.n, args.m, args.lambda)?;
    let value = json!({
        "n": sq.n,
        "m": sq.m,
        "lambda": sq.lambda,
        "trace_a": sq.trace_a,
        "trace_a2": sq.trace_a2,
        "s_n": sq.s_n,
        "h": sq.h,
        "lam_c": sq.lam_c,
        "lam_d": sq.lam_d,
    });
    emit_json(&value, args.output.as_deref())
}

fn diagnose_cmd(args: DiagnoseArgs) -> Result<(), Box<dyn Error>> {
    let quantizer = match &args.thresholds {
        Some(t) => {
            let marks = quantizer::midpoint_marks(t)?;
            Quantizer::from_parts(t.clone(), marks, "custom")?
        }
        None => quantizer::test_tuned(args.sigma, args.n, args.m)?,
    };
    // Error terms under the zero function; separation under pure noise,
    // where the variance proxy equals sigma^2.
    let f0 = vec![0.0; args.n];
    let bound = inference::quantization_error_terms(&f0, args.sigma, quantizer.thresholds())?;
    let sq = spectral::build_spectral(args.n, args.m, args.lambda)?;
    let rate = inference::separation_rate(&sq, args.sigma * args.sigma, quantizer.thresholds());
    let conditions =
        inference::check_conditions(&quantizer, args.sigma, args.n, args.lambda, args.m)?;
    let value = json!({
        "quantizer": quantizer.summary(),
        "error_bound": serde_json::to_value(bound)?,
        "separation_rate": rate,
        "conditions": serde_json::to_value(conditions)?,
    });
    emit_json(&value, args.output.as_deref())
}

fn emit_json(value: &serde_json::Value, output: Option<&Path>) -> Result<(), Box<dyn Error>> {
    use std::io::{self, Write};
    let text = serde_json::to_string_pretty(value)?;
    match output {
        Some(path) => fs::write(path, text + "\n")?,
        None => {
            // Tolerate a consumer (head, jq -e) closing the pipe early.
            let mut out = io::stdout().lock();
            if let Err(e) = writeln!(out, "{text}") {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}
