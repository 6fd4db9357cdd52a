//! Monte Carlo experiment driver: estimation error, test size/power, and
//! linearity-test studies over grids of design sizes and bit depths.
//!
//! # Scenarios
//!
//! All scenarios observe `y_i = f0(x_i) + noise_sd * eps_i` on the design
//! `x_i = i/n` with i.i.d. standard Gaussian noise, then quantize with a
//! data-driven quantizer (range-spanning thresholds at bit depth `b`,
//! empirically optimal marks). An unquantized baseline (`b` column
//! `"nonquant"`) is always emitted alongside the quantized variants.
//!
//! - `mse`: `f0(x) = sin(alpha_signal pi x)`; reports the mean squared error
//!   of the fit against `f0` on a fine grid (metric `"mse"`, the effective
//!   signal amplitude `1` is recorded in the `r` column), plus the
//!   smoother-relative squared distance (metric `"fit_distance_sq"`).
//! - `size` / `power`: `f0(x) = r sin(alpha_signal pi x)`; reports the
//!   rejection rate of the zero-function test (metrics `"size"`, `"power"`).
//! - `linearity-size` / `linearity-power`: `f0(x) = 3x + 2 + r q(x)` with
//!   the polynomial bump `q = beta_bump`; reports the rejection rate of the
//!   linearity test.
//!
//! # Reproducibility
//!
//! Replication `r` of a run draws from an independent, seekable RNG stream
//! (`rng_stream(seed, r)`), so results are bit-identical regardless of
//! thread count or [`Parallelism`] mode, and all variants (bit depths,
//! signal amplitudes) of a replication share the same noise draws (common
//! random numbers). Aggregation is sequential in replication order.

use std::fmt;
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::estimator::{
    default_lambda_grid, fit_with_eigs, gcv_select_with_eigs, FitSource,
};
use crate::inference::{linearity_test_with_spectral, test_with_spectral};
use crate::kernel::KernelSpec;
use crate::quantizer::{MarkRule, Quantizer};
use crate::spectral::{eigenvalues_from_series, SpectralQuantities, DEFAULT_NUM_TERMS};
use crate::{Error, Result};

/// Number of evaluation points for the fine-grid MSE metric.
pub const EVAL_POINTS: usize = 4096;

/// Independent RNG stream for one replication of a seeded run.
///
/// All replications share the master seed and differ only in stream number,
/// so any subset of replications can be reproduced independently.
pub fn rng_stream(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

/// Standard Gaussian draws via the Box-Muller transform.
///
/// Uniforms are built from the top 53 bits of each 64-bit word, shifted into
/// `(0, 1]` so the logarithm is always finite.
pub fn gaussian_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    const SCALE: f64 = 1.0 / 9007199254740992.0; // 2^-53
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let u1 = ((rng.next_u64() >> 11) + 1) as f64 * SCALE;
        let u2 = ((rng.next_u64() >> 11) + 1) as f64 * SCALE;
        let radius = (-2.0 * u1.ln()).sqrt();
        let (sin, cos) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        out.push(radius * cos);
        if out.len() < len {
            out.push(radius * sin);
        }
    }
    out
}

/// Smooth polynomial bump `858 x^10 (1 - x)^2` used as the nonlinear
/// component in the linearity scenarios. The normalizing coefficient is
/// computed through log-gamma so the same code extends to other exponents.
pub fn beta_bump(x: f64) -> f64 {
    let coeff = (ln_gamma(14.0) - ln_gamma(11.0) - ln_gamma(3.0)).exp();
    coeff * x.powi(10) * (1.0 - x) * (1.0 - x)
}

/// Experiment family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Estimation error against a sinusoidal truth.
    Mse,
    /// Null rejection rate of the zero-function test.
    Size,
    /// Alternative rejection rate of the zero-function test.
    Power,
    /// Null rejection rate of the linearity test (linear truth).
    LinearitySize,
    /// Alternative rejection rate of the linearity test (bump added).
    LinearityPower,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Scenario::Mse => "mse",
            Scenario::Size => "size",
            Scenario::Power => "power",
            Scenario::LinearitySize => "linearity-size",
            Scenario::LinearityPower => "linearity-power",
        };
        f.write_str(s)
    }
}

/// Penalty selection rule applied to each replication's (possibly
/// quantized) observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaRule {
    /// Generalized cross-validation over the default grid.
    Gcv,
    /// GCV selection divided by `log n` (the testing-oriented rule).
    GcvOverLogN,
    /// A fixed penalty.
    Fixed(f64),
}

/// Declarative description of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment family.
    pub scenario: Scenario,
    /// Design sizes (each even and at least 8).
    pub n_list: Vec<usize>,
    /// Quantizer bit depths (each in `1..=12`); may be empty for a
    /// baseline-only run. The unquantized baseline is always included.
    #[serde(default)]
    pub b_list: Vec<u32>,
    /// Signal amplitudes. Must be `[0]` for the size scenarios and strictly
    /// positive for the power scenarios; unused by `mse`.
    #[serde(default = "default_r_list")]
    pub r_list: Vec<f64>,
    /// Sine frequency multiplier of the signal (2 or 8); unused by the
    /// linearity scenarios.
    #[serde(default = "default_alpha_signal")]
    pub alpha_signal: u32,
    /// Noise standard deviation.
    #[serde(default = "default_noise_sd")]
    pub noise_sd: f64,
    /// Monte Carlo replications per cell.
    #[serde(default = "default_replications")]
    pub replications: usize,
    /// Master RNG seed.
    pub seed: u64,
    /// Test level for the rejection-rate scenarios.
    #[serde(default = "default_alpha_level")]
    pub alpha_level: f64,
    /// Smoothness order.
    #[serde(default = "default_m")]
    pub m: u32,
    /// Penalty selection rule.
    pub lambda_rule: LambdaRule,
}

fn default_r_list() -> Vec<f64> {
    vec![0.0]
}
fn default_alpha_signal() -> u32 {
    2
}
fn default_noise_sd() -> f64 {
    1.0
}
fn default_replications() -> usize {
    1000
}
fn default_alpha_level() -> f64 {
    0.1
}
fn default_m() -> u32 {
    2
}

impl ExperimentConfig {
    /// Validates the configuration; every run starts with this check.
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::InvalidConfig("n_list must be nonempty".into()));
        }
        for &n in &self.n_list {
            if n < 8 || n % 2 != 0 {
                return Err(Error::InvalidConfig(format!(
                    "design sizes must be even and at least 8, got {n}"
                )));
            }
        }
        for &b in &self.b_list {
            if !(1..=12).contains(&b) {
                return Err(Error::InvalidConfig(format!(
                    "bit depths must lie in 1..=12, got {b}"
                )));
            }
        }
        if self.r_list.is_empty() {
            return Err(Error::InvalidConfig("r_list must be nonempty".into()));
        }
        if self.r_list.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::InvalidConfig(
                "signal amplitudes must be finite and nonnegative".into(),
            ));
        }
        match self.scenario {
            Scenario::Size | Scenario::LinearitySize => {
                if self.r_list.iter().any(|&r| r != 0.0) {
                    return Err(Error::InvalidConfig(
                        "size scenarios require r = 0".into(),
                    ));
                }
            }
            Scenario::Power | Scenario::LinearityPower => {
                if self.r_list.contains(&0.0) {
                    return Err(Error::InvalidConfig(
                        "power scenarios require strictly positive r".into(),
                    ));
                }
            }
            Scenario::Mse => {}
        }
        if !matches!(self.alpha_signal, 2 | 8) {
            return Err(Error::InvalidConfig(format!(
                "alpha_signal must be 2 or 8, got {}",
                self.alpha_signal
            )));
        }
        if !self.noise_sd.is_finite() || self.noise_sd <= 0.0 {
            return Err(Error::InvalidSigma {
                sigma: self.noise_sd,
            });
        }
        if self.replications == 0 {
            return Err(Error::InvalidConfig(
                "at least one replication is required".into(),
            ));
        }
        if !(self.alpha_level > 0.0 && self.alpha_level < 1.0) {
            return Err(Error::InvalidAlpha {
                alpha: self.alpha_level,
            });
        }
        if !(1..=8).contains(&self.m) {
            return Err(Error::UnsupportedOrder {
                order: self.m,
                min: 1,
                max: 8,
            });
        }
        if let LambdaRule::Fixed(v) = self.lambda_rule {
            crate::spectral::validate_lambda(v)?;
        }
        Ok(())
    }
}

/// One aggregated result cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// Experiment family.
    pub scenario: Scenario,
    /// Design size.
    pub n: usize,
    /// Bit depth; `None` is the unquantized baseline.
    pub b: Option<u32>,
    /// Signal amplitude.
    pub r: f64,
    /// Noise standard deviation.
    pub noise_sd: f64,
    /// Sine frequency, absent for linearity scenarios.
    pub alpha_signal: Option<u32>,
    /// Metric name (`"mse"`, `"fit_distance_sq"`, `"size"`, `"power"`).
    pub metric: String,
    /// Monte Carlo mean of the metric.
    pub value: f64,
    /// Monte Carlo standard error (sample sd / sqrt(replications)).
    pub mc_stderr: f64,
    /// Number of replications aggregated.
    pub replications: usize,
    /// Master seed of the run.
    pub seed: u64,
}

/// Execution mode for the replication loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    /// Single-threaded replication loop.
    Sequential,
    /// Rayon data-parallel replication loop (bit-identical results).
    #[cfg(feature = "parallel")]
    Parallel,
}

// Not derivable: the default variant depends on whether the `parallel`
// feature is enabled, and `#[default]` cannot be cfg-switched.
#[allow(clippy::derivable_impls)]
impl Default for Parallelism {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Parallelism::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Parallelism::Sequential
        }
    }
}

/// Maps a closure over replication indices, sequentially or in parallel.
/// Output order always matches replication order.
fn map_reps<T, F>(reps: usize, mode: Parallelism, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match mode {
        Parallelism::Sequential => (0..reps as u64).map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            (0..reps as u64).into_par_iter().map(f).collect()
        }
    }
}

/// Mean and Monte Carlo standard error of a sample.
fn aggregate(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt() / n.sqrt())
}

/// Shared per-`n` tables for one scenario run.
struct DesignTables {
    n: usize,
    xs: Vec<f64>,
    lam_c: Vec<f64>,
    lam_d: Vec<f64>,
    grid: Vec<f64>,
}

impl DesignTables {
    fn build(n: usize, m: u32) -> Result<Self> {
        let (lam_c, lam_d) = eigenvalues_from_series(n, m, DEFAULT_NUM_TERMS)?;
        let xs = (1..=n).map(|i| i as f64 / n as f64).collect();
        Ok(DesignTables {
            n,
            xs,
            lam_c,
            lam_d,
            grid: default_lambda_grid(),
        })
    }

    fn select_lambda(&self, rule: LambdaRule, z: &[f64]) -> f64 {
        match rule {
            LambdaRule::Fixed(v) => v,
            LambdaRule::Gcv => gcv_select_with_eigs(z, &self.grid, &self.lam_c).0,
            LambdaRule::GcvOverLogN => {
                gcv_select_with_eigs(z, &self.grid, &self.lam_c).0 / (self.n as f64).ln()
            }
        }
    }

    fn spectral_at(&self, m: u32, lambda: f64) -> SpectralQuantities {
        SpectralQuantities::from_eigs(self.n, m, lambda, self.lam_c.clone(), self.lam_d.clone())
    }
}

/// Draws one replication's observations and quantizes them if requested.
fn observe(
    tables: &DesignTables,
    f0: &[f64],
    noise_sd: f64,
    seed: u64,
    rep: u64,
    b: Option<u32>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rng = rng_stream(seed, rep);
    let eps = gaussian_vector(&mut rng, tables.n);
    let y: Vec<f64> = f0
        .iter()
        .zip(&eps)
        .map(|(&f, &e)| f + noise_sd * e)
        .collect();
    let z = match b {
        None => y.clone(),
        Some(bits) => {
            let q = Quantizer::from_data(&y, bits, MarkRule::EmpiricalOptimal)?;
            q.apply(&y)
        }
    };
    Ok((y, z))
}

fn variants(b_list: &[u32]) -> Vec<Option<u32>> {
    std::iter::once(None)
        .chain(b_list.iter().map(|&b| Some(b)))
        .collect()
}

fn run_mse(config: &ExperimentConfig, mode: Parallelism) -> Result<Vec<Row>> {
    let spec = KernelSpec::new(config.m)?;
    let freq = config.alpha_signal as f64 * std::f64::consts::PI;
    let mut rows = Vec::new();
    for &n in &config.n_list {
        let tables = DesignTables::build(n, config.m)?;
        let f0: Vec<f64> = tables.xs.iter().map(|&x| (freq * x).sin()).collect();
        // Fine evaluation grid and the kernel cross-evaluation matrix
        // K(x_i, g_j), shared read-only across replications.
        let eval_xs: Vec<f64> = (1..=EVAL_POINTS)
            .map(|j| j as f64 / EVAL_POINTS as f64)
            .collect();
        let f0_eval: Vec<f64> = eval_xs.iter().map(|&x| (freq * x).sin()).collect();
        let mut eval_matrix = vec![0.0f64; EVAL_POINTS * n];
        for (j, &g) in eval_xs.iter().enumerate() {
            for (i, &x) in tables.xs.iter().enumerate() {
                eval_matrix[j * n + i] = spec.kernel_k(x, g);
            }
        }
        for b in variants(&config.b_list) {
            let source = if b.is_none() {
                FitSource::Raw
            } else {
                FitSource::Quantized
            };
            let samples: Vec<Result<(f64, f64)>> = map_reps(config.replications, mode, |rep| {
                let (_, z) = observe(&tables, &f0, config.noise_sd, config.seed, rep, b)?;
                let lambda = tables.select_lambda(config.lambda_rule, &z);
                let fit = fit_with_eigs(&z, config.m, lambda, &tables.lam_c, source);
                let mut err_sq = 0.0;
                for j in 0..EVAL_POINTS {
                    let row = &eval_matrix[j * n..(j + 1) * n];
                    let fhat: f64 = row.iter().zip(&fit.theta).map(|(&k, &t)| k * t).sum();
                    let d = fhat - f0_eval[j];
                    err_sq += d * d;
                }
                let mse = err_sq / EVAL_POINTS as f64;
                // Smoother-relative squared distance to the noiseless truth,
                // computed through the spectral quadratic form.
                let sq = tables.spectral_at(config.m, lambda);
                let w: Vec<f64> = z.iter().zip(&f0).map(|(&a, &t)| a - t).collect();
                let dist = crate::spectral::quadratic_form(&sq, &w)? / n as f64;
                Ok((mse, dist))
            });
            let samples: Vec<(f64, f64)> = samples.into_iter().collect::<Result<_>>()?;
            let mses: Vec<f64> = samples.iter().map(|s| s.0).collect();
            let dists: Vec<f64> = samples.iter().map(|s| s.1).collect();
            for (metric, data) in [("mse", &mses), ("fit_distance_sq", &dists)] {
                let (value, mc_stderr) = aggregate(data);
                rows.push(Row {
                    scenario: config.scenario,
                    n,
                    b,
                    r: 1.0, // effective amplitude of the sinusoidal truth
                    noise_sd: config.noise_sd,
                    alpha_signal: Some(config.alpha_signal),
                    metric: metric.to_string(),
                    value,
                    mc_stderr,
                    replications: config.replications,
                    seed: config.seed,
                });
            }
        }
    }
    Ok(rows)
}

fn run_rejection(config: &ExperimentConfig, mode: Parallelism) -> Result<Vec<Row>> {
    let linearity = matches!(
        config.scenario,
        Scenario::LinearitySize | Scenario::LinearityPower
    );
    let metric = match config.scenario {
        Scenario::Size | Scenario::LinearitySize => "size",
        _ => "power",
    };
    let freq = config.alpha_signal as f64 * std::f64::consts::PI;
    let mut rows = Vec::new();
    for &n in &config.n_list {
        let tables = DesignTables::build(n, config.m)?;
        let zeros = vec![0.0f64; n];
        for &r in &config.r_list {
            let f0: Vec<f64> = tables
                .xs
                .iter()
                .map(|&x| {
                    if linearity {
                        3.0 * x + 2.0 + r * beta_bump(x)
                    } else {
                        r * (freq * x).sin()
                    }
                })
                .collect();
            for b in variants(&config.b_list) {
                let samples: Vec<Result<f64>> = map_reps(config.replications, mode, |rep| {
                    let (_, z) = observe(&tables, &f0, config.noise_sd, config.seed, rep, b)?;
                    let lambda = tables.select_lambda(config.lambda_rule, &z);
                    let sq = tables.spectral_at(config.m, lambda);
                    let result = if linearity {
                        linearity_test_with_spectral(&sq, &z, config.alpha_level)?
                    } else {
                        test_with_spectral(&sq, &z, &zeros, config.alpha_level)?
                    };
                    Ok(if result.reject { 1.0 } else { 0.0 })
                });
                let samples: Vec<f64> = samples.into_iter().collect::<Result<_>>()?;
                let (value, mc_stderr) = aggregate(&samples);
                rows.push(Row {
                    scenario: config.scenario,
                    n,
                    b,
                    r,
                    noise_sd: config.noise_sd,
                    alpha_signal: if linearity {
                        None
                    } else {
                        Some(config.alpha_signal)
                    },
                    metric: metric.to_string(),
                    value,
                    mc_stderr,
                    replications: config.replications,
                    seed: config.seed,
                });
            }
        }
    }
    Ok(rows)
}

/// Sorts rows by the canonical key (scenario, metric, n, bit depth with the
/// baseline first, amplitude) so output order is stable regardless of how
/// the work was scheduled.
fn canonical_sort(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        (a.scenario.to_string(), &a.metric, a.n, b_key(a.b))
            .cmp(&(b.scenario.to_string(), &b.metric, b.n, b_key(b.b)))
            .then(a.r.total_cmp(&b.r))
    });
}

fn b_key(b: Option<u32>) -> i64 {
    b.map_or(-1, |v| v as i64)
}

/// Runs an experiment and returns its aggregated rows in canonical order.
pub fn run(config: &ExperimentConfig, mode: Parallelism) -> Result<Vec<Row>> {
    config.validate()?;
    let mut rows = match config.scenario {
        Scenario::Mse => run_mse(config, mode)?,
        _ => run_rejection(config, mode)?,
    };
    canonical_sort(&mut rows);
    Ok(rows)
}

/// [`run`] in the default execution mode (parallel when the `parallel`
/// feature is enabled).
pub fn run_default(config: &ExperimentConfig) -> Result<Vec<Row>> {
    run(config, Parallelism::default())
}

const CSV_HEADER: [&str; 11] = [
    "scenario",
    "n",
    "b",
    "r",
    "noise_sd",
    "alpha_signal",
    "metric",
    "value",
    "mc_stderr",
    "replications",
    "seed",
];

/// Writes aggregated rows as CSV with the stable column set.
pub fn write_csv<P: AsRef<Path>>(rows: &[Row], path: P) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record([
            row.scenario.to_string(),
            row.n.to_string(),
            row.b.map_or_else(|| "nonquant".to_string(), |b| b.to_string()),
            row.r.to_string(),
            row.noise_sd.to_string(),
            row.alpha_signal.map_or_else(String::new, |a| a.to_string()),
            row.metric.clone(),
            row.value.to_string(),
            row.mc_stderr.to_string(),
            row.replications.to_string(),
            row.seed.to_string(),
        ])?;
    }
    writer.flush().map_err(|e| Error::Output(e.to_string()))?;
    Ok(())
}

/// Writes the configuration next to a CSV output (`<stem>.config.json`) so
/// every results file carries its own provenance.
pub fn write_config_sidecar<P: AsRef<Path>>(config: &ExperimentConfig, csv_path: P) -> Result<()> {
    let sidecar = csv_path.as_ref().with_extension("config.json");
    let file = std::fs::File::create(sidecar)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), config)?;
    Ok(())
}

/// Writes both the CSV rows and the JSON config sidecar.
pub fn write_outputs<P: AsRef<Path>>(
    config: &ExperimentConfig,
    rows: &[Row],
    csv_path: P,
) -> Result<()> {
    write_csv(rows, csv_path.as_ref())?;
    write_config_sidecar(config, csv_path)
}
