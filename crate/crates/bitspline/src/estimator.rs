//! Periodic smoothing-spline estimation on the regular design, with
//! generalized cross-validation for penalty selection.
//!
//! All operations run in the Fourier basis: the design Gram matrix is a
//! circulant, so the penalized least-squares solve diagonalizes under the
//! DFT. For input vector `v` with spectrum `F = FFT(v)` (unnormalized) and
//! Gram eigenvalues `c_l`,
//!
//! ```text
//! theta       = IFFT(F_l / (lambda + c_l)) / n^2
//! fitted_grid = IFFT(F_l c_l / (lambda + c_l)) / n
//! ```
//!
//! which realize `theta = (Sigma + lambda I)^{-1} v / n` and
//! `fitted = Sigma (Sigma + lambda I)^{-1} v` without forming any matrix.

use serde::{Deserialize, Serialize};

use crate::fft::{fft_forward_real, fft_inverse_inplace};
use crate::kernel::KernelSpec;
use crate::spectral::{self, build_spectral, quadratic_form, DEFAULT_NUM_TERMS};
use crate::{Error, Result};

/// Provenance of the data a fit was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitSource {
    /// Unquantized observations.
    Raw,
    /// Observations passed through a scalar quantizer.
    Quantized,
}

/// A fitted periodic smoothing spline.
///
/// `theta` are the kernel-basis coefficients, `fitted_grid` the fitted values
/// at the design points `x_i = i/n`. The input vector is retained (privately)
/// so that distances and diagnostics can be computed after the fact.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// Kernel coefficient vector (length `n`).
    pub theta: Vec<f64>,
    /// Fitted values at the design points (length `n`).
    pub fitted_grid: Vec<f64>,
    /// Penalty the fit was computed at.
    pub lambda: f64,
    /// Design size.
    pub n: usize,
    /// Smoothness order.
    pub m: u32,
    /// Whether the inputs were raw or quantized observations.
    pub source: FitSource,
    values: Vec<f64>,
}

impl FitResult {
    /// The input vector the fit was computed from.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Evaluates the fitted function at arbitrary points via the kernel
    /// expansion `f(x) = sum_i theta_i K(x_i, x)`. The result is periodic
    /// with period 1 in each coordinate of `xs`.
    pub fn evaluate(&self, xs: &[f64]) -> Vec<f64> {
        let spec = KernelSpec::new(self.m).expect("order was validated at fit time");
        let n = self.n as f64;
        xs.iter()
            .map(|&x| {
                self.theta
                    .iter()
                    .enumerate()
                    .map(|(i, &th)| th * spec.kernel_k((i + 1) as f64 / n, x))
                    .sum()
            })
            .collect()
    }
}

fn validate_values(values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig(
            "input values must be finite".into(),
        ));
    }
    Ok(())
}

/// Fits a periodic smoothing spline of order `m` at penalty `lambda` to
/// observations on the regular design `x_i = i/n`.
pub fn fit(values: &[f64], m: u32, lambda: f64) -> Result<FitResult> {
    let n = values.len();
    if n < 4 {
        return Err(Error::TooFewPoints { n, min: 4 });
    }
    validate_values(values)?;
    spectral::validate_lambda(lambda)?;
    let (lam_c, _) = spectral::eigenvalues_from_series(n, m, DEFAULT_NUM_TERMS)?;
    Ok(fit_with_eigs(values, m, lambda, &lam_c, FitSource::Raw))
}

/// Fit with precomputed Gram eigenvalues (hot path for simulations, where
/// the eigenvalue table is shared across replications).
pub(crate) fn fit_with_eigs(
    values: &[f64],
    m: u32,
    lambda: f64,
    lam_c: &[f64],
    source: FitSource,
) -> FitResult {
    let n = values.len();
    debug_assert_eq!(lam_c.len(), n);
    let spectrum = fft_forward_real(values);
    let mut theta_spec = spectrum.clone();
    let mut fitted_spec = spectrum;
    for l in 0..n {
        let denom = lambda + lam_c[l];
        theta_spec[l] /= denom;
        fitted_spec[l] *= lam_c[l] / denom;
    }
    fft_inverse_inplace(&mut theta_spec);
    fft_inverse_inplace(&mut fitted_spec);
    let n_f = n as f64;
    let theta = theta_spec.iter().map(|c| c.re / (n_f * n_f)).collect();
    let fitted_grid = fitted_spec.iter().map(|c| c.re / n_f).collect();
    FitResult {
        theta,
        fitted_grid,
        lambda,
        n,
        m,
        source,
        values: values.to_vec(),
    }
}

/// The default penalty grid: 40 logarithmically spaced points covering
/// `[1e-8, 1e2]`. The floor keeps the spectral solve well conditioned;
/// candidates below it are permitted in user-supplied grids but are not
/// explored by default.
pub fn default_lambda_grid() -> Vec<f64> {
    (0..40)
        .map(|j| 10f64.powf(-8.0 + 10.0 * j as f64 / 39.0))
        .collect()
}

/// Generalized cross-validation over a candidate grid.
///
/// Returns the selected penalty together with the score of every candidate
/// (in grid order). The score of candidate `lambda` is
/// `n ||(I - S_lambda) v||^2 / (n - trace S_lambda)^2`, evaluated spectrally.
/// Ties prefer the larger penalty; a degenerate trace (`trace >= n`) scores
/// `+inf` so such candidates are never selected.
pub fn gcv_select(values: &[f64], m: u32, grid: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = values.len();
    if n < 4 {
        return Err(Error::TooFewPoints { n, min: 4 });
    }
    validate_values(values)?;
    if grid.is_empty() {
        return Err(Error::InvalidConfig("empty penalty grid".into()));
    }
    for &lambda in grid {
        spectral::validate_lambda(lambda)?;
    }
    let (lam_c, _) = spectral::eigenvalues_from_series(n, m, DEFAULT_NUM_TERMS)?;
    Ok(gcv_select_with_eigs(values, grid, &lam_c))
}

/// GCV with precomputed Gram eigenvalues (hot path for simulations).
pub(crate) fn gcv_select_with_eigs(
    values: &[f64],
    grid: &[f64],
    lam_c: &[f64],
) -> (f64, Vec<f64>) {
    let n = values.len();
    let n_f = n as f64;
    let spectrum = fft_forward_real(values);
    // |unitary DFT coefficient|^2, so that the residual sums to ||(I-S)v||^2.
    let power: Vec<f64> = spectrum.iter().map(|c| c.norm_sqr() / n_f).collect();
    let mut scores = Vec::with_capacity(grid.len());
    let mut best_lambda = grid[0];
    let mut best_score = f64::INFINITY;
    for &lambda in grid {
        let mut resid = 0.0;
        let mut trace = 0.0;
        for l in 0..n {
            let shrink = lambda / (lambda + lam_c[l]);
            resid += shrink * shrink * power[l];
            trace += lam_c[l] / (lambda + lam_c[l]);
        }
        let dof = n_f - trace;
        let score = if dof > 0.0 {
            n_f * resid / (dof * dof)
        } else {
            f64::INFINITY
        };
        if score < best_score || (score == best_score && lambda > best_lambda) {
            best_score = score;
            best_lambda = lambda;
        }
        scores.push(score);
    }
    (best_lambda, scores)
}

/// GCV followed by the testing-oriented rescaling `lambda_hat / log n`.
pub fn gcv_log_scaled(values: &[f64], m: u32, grid: &[f64]) -> Result<f64> {
    let (lambda_hat, _) = gcv_select(values, m, grid)?;
    Ok(lambda_hat / (values.len() as f64).ln())
}

/// Squared distance functional between a fit and a reference function
/// sampled on the design grid.
///
/// With `A = (Sigma + lambda I)^{-1} Omega (Sigma + lambda I)^{-1}` this is
/// `(v - f*)' A (v - f*) / n`, the squared integrated distance between the
/// fit of `v` and the fit the same smoother would produce from `f*`.
/// `target = None` compares against the zero function.
pub fn l2_distance_sq(fit: &FitResult, target: Option<&[f64]>) -> Result<f64> {
    let n = fit.n;
    let w: Vec<f64> = match target {
        Some(t) => {
            if t.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: t.len(),
                });
            }
            fit.values.iter().zip(t).map(|(&v, &f)| v - f).collect()
        }
        None => fit.values.clone(),
    };
    let sq = build_spectral(n, fit.m, fit.lambda)?;
    Ok(quadratic_form(&sq, &w)? / n as f64)
}

/// Distance/error pair behind the quantization stability guarantee.
///
/// `fit_q` must be the fit of quantized data `z` and `fit_raw` the fit of the
/// underlying raw data `y`, both at the same `(n, m, lambda)`. Returns
/// `(lhs, rhs)` where `lhs = ||f_q - f_raw||^2` (squared integrated distance
/// between the two fits) and `rhs = n^{-1} sum_i (z_i - y_i)^2` (mean squared
/// quantization perturbation). The guarantee is `lhs <= rhs` for every input.
pub fn quantization_gap_bound(
    fit_q: &FitResult,
    fit_raw: &FitResult,
    y: &[f64],
    z: &[f64],
) -> Result<(f64, f64)> {
    if fit_q.n != fit_raw.n || fit_q.m != fit_raw.m {
        return Err(Error::MismatchedFits {
            detail: format!(
                "(n, m) = ({}, {}) vs ({}, {})",
                fit_q.n, fit_q.m, fit_raw.n, fit_raw.m
            ),
        });
    }
    if fit_q.lambda != fit_raw.lambda {
        return Err(Error::MismatchedFits {
            detail: format!("penalties differ: {} vs {}", fit_q.lambda, fit_raw.lambda),
        });
    }
    let n = fit_q.n;
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: y.len(),
        });
    }
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: z.len(),
        });
    }
    let diff: Vec<f64> = fit_q
        .values
        .iter()
        .zip(&fit_raw.values)
        .map(|(&a, &b)| a - b)
        .collect();
    let sq = build_spectral(n, fit_q.m, fit_q.lambda)?;
    let lhs = quadratic_form(&sq, &diff)? / n as f64;
    let rhs = y
        .iter()
        .zip(z)
        .map(|(&yi, &zi)| (zi - yi) * (zi - yi))
        .sum::<f64>()
        / n as f64;
    Ok((lhs, rhs))
}
