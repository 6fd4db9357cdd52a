//! Hypothesis tests and diagnostics for quantized-data regression.
//!
//! The core statistic for testing `H0: f = f*` from observations `z` on the
//! regular design is the penalized quadratic form
//!
//! ```text
//! n T = w' A w,   w = z - f*,   A = (Sigma + lambda I)^{-1} Omega (Sigma + lambda I)^{-1},
//! ```
//!
//! standardized by its null mean and scale:
//!
//! ```text
//! standardized = (n T - trace(A) tau_hat^2) / (s_n tau_hat^2),
//! ```
//!
//! where `tau_hat^2` is the raw second-moment variance proxy computed from
//! `z` itself (not from the residual `w`), and `s_n^2 = 2 (trace(A^2) -
//! trace(A)^2 / n)`. Under the null the standardized statistic is
//! asymptotically standard normal; the test is two-sided.

use serde::{Deserialize, Serialize};

use crate::gauss;
use crate::quantizer::{self, Quantizer, QuantizerSummary};
use crate::spectral::{build_spectral, quadratic_form, SpectralQuantities};
use crate::{Error, Result};

/// Outcome of a quadratic-form test.
///
/// Serializes with the stable key set `{"n_T", "tau_sq_hat", "standardized",
/// "p_value", "reject", "alpha", "lambda"}` (plus `"quantizer_summary"` when
/// one was attached).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    /// Value of the quadratic-form statistic `n T`.
    #[serde(rename = "n_T")]
    pub n_t: f64,
    /// Variance proxy `tau_hat^2` computed from the observations.
    pub tau_sq_hat: f64,
    /// Standardized statistic, asymptotically `Normal(0,1)` under the null.
    pub standardized: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    /// Decision at level `alpha`: `p_value < alpha`.
    pub reject: bool,
    /// Nominal test level.
    pub alpha: f64,
    /// Penalty the statistic was computed at.
    pub lambda: f64,
    /// Snapshot of the quantizer that produced the data, when known.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quantizer_summary: Option<QuantizerSummary>,
}

impl TestResult {
    /// Attaches a quantizer snapshot to the result record.
    pub fn with_quantizer(mut self, summary: QuantizerSummary) -> Self {
        self.quantizer_summary = Some(summary);
        self
    }
}

/// Additive error-bound terms for testing from quantized data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantizationErrorBound {
    /// Squared mesh of the interior threshold grid.
    pub c_k_sq: f64,
    /// Mean clipped second moment below the lowest threshold.
    pub g1: f64,
    /// Mean clipped second moment above the highest threshold.
    pub g2: f64,
    /// Total: `c_k_sq + g1 + g2`.
    pub g_total: f64,
}

/// Diagnostic report on the regularity conditions a quantizer must satisfy
/// for the quantized-data test to inherit its guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionsReport {
    /// Containment: every mark lies inside its own cell.
    pub condition_b: bool,
    /// Centering residual `sum_j mu_j P(sigma eps in R_j)` under pure noise.
    pub centering_residual: f64,
    /// Centering: `|centering_residual| <= 1e-10`.
    pub condition_c: bool,
    /// Edge growth: `min(t_1^2, t_{k-1}^2) > 8 sigma^2 log n`.
    pub condition_r2: bool,
    /// Left-hand side of the edge-growth condition.
    pub min_edge_sq: f64,
    /// Right-hand side of the edge-growth condition.
    pub r2_threshold: f64,
    /// Bandwidth-penalty product `n lambda^{1/m}` (should grow with `n`).
    pub bandwidth_product: f64,
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha { alpha });
    }
    Ok(())
}

/// Raw variance proxy: the uncentered sample variance of the observations,
/// `n^{-1} sum z_i^2 - (n^{-1} sum z_i)^2`, computed in its numerically
/// stable centered form.
fn tau_sq_from(z: &[f64]) -> f64 {
    let n = z.len() as f64;
    let mean = z.iter().sum::<f64>() / n;
    z.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// Tests `H0: f = f*` from observations `z` on the regular design.
///
/// The variance proxy is computed from `z` directly — not from the residual
/// `z - f*` — so that signal energy inflates the denominator only through
/// the observations themselves. Rejects when the two-sided p-value falls
/// below `alpha`.
pub fn quantization_test(
    z: &[f64],
    f_star: &[f64],
    m: u32,
    lambda: f64,
    alpha: f64,
) -> Result<TestResult> {
    let sq = build_spectral(z.len(), m, lambda)?;
    test_with_spectral(&sq, z, f_star, alpha)
}

/// Test evaluation against precomputed spectral quantities (hot path for
/// simulations, where the eigenvalue tables are shared across replications).
pub(crate) fn test_with_spectral(
    sq: &SpectralQuantities,
    z: &[f64],
    f_star: &[f64],
    alpha: f64,
) -> Result<TestResult> {
    let n = z.len();
    if f_star.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f_star.len(),
        });
    }
    if z.iter().chain(f_star.iter()).any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig(
            "observations and null function must be finite".into(),
        ));
    }
    validate_alpha(alpha)?;
    if z.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::DegenerateVariance);
    }
    let tau_sq = tau_sq_from(z);
    if tau_sq <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let w: Vec<f64> = z.iter().zip(f_star).map(|(&zi, &fi)| zi - fi).collect();
    let n_t = quadratic_form(sq, &w)?;
    let lambda = sq.lambda;
    let standardized = (n_t - sq.trace_a * tau_sq) / (sq.s_n * tau_sq);
    let p_value = (2.0 * (1.0 - gauss::norm_cdf(standardized.abs()))).clamp(0.0, 1.0);
    Ok(TestResult {
        n_t,
        tau_sq_hat: tau_sq,
        standardized,
        p_value,
        reject: p_value < alpha,
        alpha,
        lambda,
        quantizer_summary: None,
    })
}

/// Least-squares line `a + b x` fitted to `z` on the design `x_i = i/n`,
/// evaluated at the design points.
fn ols_line(z: &[f64]) -> Result<Vec<f64>> {
    let n = z.len();
    if n < 3 {
        return Err(Error::TooFewPoints { n, min: 3 });
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig("observations must be finite".into()));
    }
    let n_f = n as f64;
    let xs: Vec<f64> = (1..=n).map(|i| i as f64 / n_f).collect();
    let x_bar = xs.iter().sum::<f64>() / n_f;
    let z_bar = z.iter().sum::<f64>() / n_f;
    let sxx: f64 = xs.iter().map(|&x| (x - x_bar) * (x - x_bar)).sum();
    let sxz: f64 = xs
        .iter()
        .zip(z)
        .map(|(&x, &v)| (x - x_bar) * (v - z_bar))
        .sum();
    let slope = sxz / sxx;
    let intercept = z_bar - slope * x_bar;
    Ok(xs.iter().map(|&x| intercept + slope * x).collect())
}

/// Tests whether the regression function is linear: fits `z ~ a + b x` by
/// least squares on the design `x_i = i/n` and tests against that line.
pub fn linearity_test(z: &[f64], m: u32, lambda: f64, alpha: f64) -> Result<TestResult> {
    let line = ols_line(z)?;
    quantization_test(z, &line, m, lambda, alpha)
}

/// Linearity test against precomputed spectral quantities.
pub(crate) fn linearity_test_with_spectral(
    sq: &SpectralQuantities,
    z: &[f64],
    alpha: f64,
) -> Result<TestResult> {
    let line = ols_line(z)?;
    test_with_spectral(sq, z, &line, alpha)
}

/// Additive error-bound terms for a threshold grid `t` when the regression
/// function takes values `f0_grid` and the noise is `Normal(0, sigma^2)`:
/// the squared interior mesh plus the design-averaged clipped second moments
/// beyond the two extreme thresholds.
pub fn quantization_error_terms(
    f0_grid: &[f64],
    sigma: f64,
    t: &[f64],
) -> Result<QuantizationErrorBound> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidSigma { sigma });
    }
    if t.is_empty() {
        return Err(Error::InvalidQuantizer {
            detail: "error terms need at least one threshold".into(),
        });
    }
    if t.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidQuantizer {
            detail: "thresholds must be strictly increasing".into(),
        });
    }
    if f0_grid.is_empty() {
        return Err(Error::TooFewPoints { n: 0, min: 1 });
    }
    if f0_grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig("function values must be finite".into()));
    }
    let n_f = f0_grid.len() as f64;
    let lo = t[0];
    let hi = *t.last().unwrap();
    let g1 = f0_grid
        .iter()
        .map(|&f| gauss::second_moment_below(f, sigma, lo))
        .sum::<f64>()
        / n_f;
    let g2 = f0_grid
        .iter()
        .map(|&f| gauss::second_moment_above(f, sigma, hi))
        .sum::<f64>()
        / n_f;
    let mesh = quantizer::mesh(t);
    let c_k_sq = mesh * mesh;
    Ok(QuantizationErrorBound {
        c_k_sq,
        g1,
        g2,
        g_total: c_k_sq + g1 + g2,
    })
}

/// Detectable-separation scale for the quantized-data test:
/// `sqrt(s_n tau^2 / n + lambda + n^{-2m} + mesh(t)^2)`. Alternatives
/// separated from the null by a multiple of this scale are rejected with
/// high probability.
pub fn separation_rate(sq: &SpectralQuantities, tau_sq: f64, t: &[f64]) -> f64 {
    let n_f = sq.n as f64;
    let mesh = quantizer::mesh(t);
    let variance_term = sq.s_n * tau_sq / n_f;
    let bias_term = n_f.powi(-2 * sq.m as i32);
    (variance_term + sq.lambda + bias_term + mesh * mesh).sqrt()
}

/// Checks the regularity conditions linking a quantizer to the test's
/// asymptotic guarantees at noise level `sigma`, design size `n`, and
/// penalty `lambda`.
pub fn check_conditions(
    q: &Quantizer,
    sigma: f64,
    n: usize,
    lambda: f64,
    m: u32,
) -> Result<ConditionsReport> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidSigma { sigma });
    }
    if n < 2 {
        return Err(Error::TooFewPoints { n, min: 2 });
    }
    crate::spectral::validate_lambda(lambda)?;
    if !(1..=8).contains(&m) {
        return Err(Error::UnsupportedOrder {
            order: m,
            min: 1,
            max: 8,
        });
    }
    let t = q.thresholds();
    let mu = q.marks();
    let k = mu.len();
    // Containment: mark j must lie in its own (left-open, right-closed) cell.
    let mut condition_b = true;
    let mut centering_residual = 0.0;
    for j in 0..k {
        let a = if j == 0 { f64::NEG_INFINITY } else { t[j - 1] };
        let b = if j == k - 1 { f64::INFINITY } else { t[j] };
        if !(mu[j] > a && mu[j] <= b) {
            condition_b = false;
        }
        centering_residual += mu[j] * gauss::cell_prob(0.0, sigma, a, b);
    }
    let condition_c = centering_residual.abs() <= 1e-10;
    let min_edge_sq = (t[0] * t[0]).min(t[t.len() - 1] * t[t.len() - 1]);
    let r2_threshold = 8.0 * sigma * sigma * (n as f64).ln();
    Ok(ConditionsReport {
        condition_b,
        centering_residual,
        condition_c,
        condition_r2: min_edge_sq > r2_threshold,
        min_edge_sq,
        r2_threshold,
        bandwidth_product: n as f64 * lambda.powf(1.0 / m as f64),
    })
}
