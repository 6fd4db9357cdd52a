//! Scalar quantizers: threshold grids, representative marks, and the
//! mesh functional used by the inference diagnostics.
//!
//! A quantizer with `k` cells is a strictly increasing threshold vector
//! `t = (t_1, ..., t_{k-1})` together with one representative mark per cell.
//! Cells are left-open and right-closed,
//!
//! ```text
//! R_1 = (-inf, t_1],  R_j = (t_{j-1}, t_j],  R_k = (t_{k-1}, inf),
//! ```
//!
//! so a value exactly on a threshold maps to the cell on its left.
//! Quantizing replaces each input by the mark of the cell containing it;
//! out-of-range data land in the two unbounded extreme cells.

use serde::{Deserialize, Serialize};

use crate::gauss;
use crate::{Error, Result};

/// Largest supported bit depth for data-range threshold construction
/// (`2^b - 1` thresholds are materialized, so the cap keeps allocations sane).
pub const MAX_BITS: u32 = 24;

/// A scalar quantizer: strictly increasing thresholds plus one mark per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantizer {
    t: Vec<f64>,
    mu: Vec<f64>,
    b: Option<u32>,
    scheme: String,
}

/// Serializable snapshot of a quantizer for inclusion in result records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizerSummary {
    /// Bit depth when the cell count is a power of two, otherwise absent.
    pub b: Option<u32>,
    /// Threshold vector.
    pub t: Vec<f64>,
    /// Mark vector (one entry per cell).
    pub mu: Vec<f64>,
    /// Construction recipe, e.g. `"data-range+midpoint"`.
    pub scheme: String,
}

/// Rule for choosing cell marks in the convenience constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkRule {
    /// Cell midpoints, with the two unbounded cells pinned to their finite edge.
    Midpoint,
    /// Per-cell sample means of the data used to build the quantizer.
    EmpiricalOptimal,
}

impl Quantizer {
    /// Builds a quantizer from explicit parts.
    ///
    /// Requires at least one threshold, strictly increasing finite
    /// thresholds, finite marks, and exactly one mark per cell
    /// (`mu.len() == t.len() + 1`). The bit depth is derived: it is
    /// `log2(k)` when the cell count `k` is a power of two and absent
    /// otherwise.
    pub fn from_parts(t: Vec<f64>, mu: Vec<f64>, scheme: impl Into<String>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::InvalidQuantizer {
                detail: "at least one threshold is required".into(),
            });
        }
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidQuantizer {
                detail: "thresholds must be finite".into(),
            });
        }
        if t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidQuantizer {
                detail: "thresholds must be strictly increasing".into(),
            });
        }
        if mu.len() != t.len() + 1 {
            return Err(Error::InvalidQuantizer {
                detail: format!(
                    "expected {} marks for {} thresholds, got {}",
                    t.len() + 1,
                    t.len(),
                    mu.len()
                ),
            });
        }
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidQuantizer {
                detail: "marks must be finite".into(),
            });
        }
        let k = mu.len();
        let b = if k.is_power_of_two() {
            Some(k.trailing_zeros())
        } else {
            None
        };
        Ok(Self {
            t,
            mu,
            b,
            scheme: scheme.into(),
        })
    }

    /// Data-driven constructor: thresholds spanning the sample range of `y`
    /// at bit depth `b`, with marks chosen by `rule`.
    pub fn from_data(y: &[f64], b: u32, rule: MarkRule) -> Result<Self> {
        let t = data_range_thresholds(y, b)?;
        let (mu, scheme) = match rule {
            MarkRule::Midpoint => (midpoint_marks(&t)?, "data-range+midpoint"),
            MarkRule::EmpiricalOptimal => (empirical_optimal_marks(y, &t)?, "data-range+empirical"),
        };
        Self::from_parts(t, mu, scheme)
    }

    /// Number of cells `k`.
    pub fn cells(&self) -> usize {
        self.mu.len()
    }

    /// Bit depth when the cell count is a power of two.
    pub fn bits(&self) -> Option<u32> {
        self.b
    }

    /// Threshold vector `t_1 < ... < t_{k-1}`.
    pub fn thresholds(&self) -> &[f64] {
        &self.t
    }

    /// Mark vector, one per cell.
    pub fn marks(&self) -> &[f64] {
        &self.mu
    }

    /// Construction recipe tag.
    pub fn scheme(&self) -> &str {
        &self.scheme
    }

    /// Zero-based index of the cell containing `y` (ties map left).
    pub fn cell_index(&self, y: f64) -> usize {
        self.t.partition_point(|&ti| ti < y)
    }

    /// Quantizes every value: each input is replaced by its cell's mark.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        y.iter().map(|&v| self.mu[self.cell_index(v)]).collect()
    }

    /// Largest gap between consecutive interior thresholds (`0` when `k = 2`).
    pub fn mesh(&self) -> f64 {
        mesh(&self.t)
    }

    /// Serializable snapshot for result records.
    pub fn summary(&self) -> QuantizerSummary {
        QuantizerSummary {
            b: self.b,
            t: self.t.clone(),
            mu: self.mu.clone(),
            scheme: self.scheme.clone(),
        }
    }
}

/// Equally spaced thresholds spanning the sample range of `y` at bit depth `b`.
///
/// For `b = 1` the single threshold sits at the midrange; for `b >= 2` the
/// `2^b - 1` thresholds run from `min(y)` to `max(y)` inclusive. Requires
/// `1 <= b <= MAX_BITS`, at least two samples, finite data, and a
/// nondegenerate range.
pub fn data_range_thresholds(y: &[f64], b: u32) -> Result<Vec<f64>> {
    if !(1..=MAX_BITS).contains(&b) {
        return Err(Error::InvalidConfig(format!(
            "bit depth must be in 1..={MAX_BITS}, got {b}"
        )));
    }
    if y.len() < 2 {
        return Err(Error::TooFewPoints { n: y.len(), min: 2 });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig(
            "data for threshold construction must be finite".into(),
        ));
    }
    let lo = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // Finiteness was checked above, so a plain comparison is NaN-safe here.
    if hi <= lo {
        return Err(Error::DegenerateRange { value: lo });
    }
    if b == 1 {
        return Ok(vec![0.5 * (lo + hi)]);
    }
    let count = (1usize << b) - 1;
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                hi // pin the endpoint so rounding cannot overshoot the range
            } else {
                lo + step * i as f64
            }
        })
        .collect())
}

/// Midpoint marks: interior cells use threshold midpoints; the two unbounded
/// cells are pinned to their finite edge (`mu_1 = t_1`, `mu_k = t_{k-1}`).
pub fn midpoint_marks(t: &[f64]) -> Result<Vec<f64>> {
    if t.is_empty() {
        return Err(Error::InvalidQuantizer {
            detail: "midpoint marks need at least one threshold".into(),
        });
    }
    let k = t.len() + 1;
    let mut mu = Vec::with_capacity(k);
    mu.push(t[0]);
    for w in t.windows(2) {
        mu.push(0.5 * (w[0] + w[1]));
    }
    mu.push(t[t.len() - 1]);
    Ok(mu)
}

/// Empirically optimal marks: the sample mean of `y` within each cell,
/// with `0` for empty cells.
pub fn empirical_optimal_marks(y: &[f64], t: &[f64]) -> Result<Vec<f64>> {
    if t.is_empty() {
        return Err(Error::InvalidQuantizer {
            detail: "empirical marks need at least one threshold".into(),
        });
    }
    if t.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidQuantizer {
            detail: "thresholds must be strictly increasing".into(),
        });
    }
    let k = t.len() + 1;
    let mut sums = vec![0.0f64; k];
    let mut counts = vec![0usize; k];
    for &v in y {
        let cell = t.partition_point(|&ti| ti < v);
        sums[cell] += v;
        counts[cell] += 1;
    }
    Ok(sums
        .iter()
        .zip(&counts)
        .map(|(&s, &c)| if c == 0 { 0.0 } else { s / c as f64 })
        .collect())
}

/// Population-optimal marks under Gaussian noise: conditional means of
/// `X_i ~ Normal(f_i, sigma^2)` averaged over the design, cell by cell.
///
/// For cell `R_j = (a, b]` the mark is
/// `sum_i E[X_i 1(X_i in R_j)] / sum_i P(X_i in R_j)`, with `0` for cells
/// of negligible total probability. Gaussian is the only supported noise
/// family.
pub fn population_optimal_marks(f_grid: &[f64], sigma: f64, t: &[f64]) -> Result<Vec<f64>> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidSigma { sigma });
    }
    if t.is_empty() {
        return Err(Error::InvalidQuantizer {
            detail: "population marks need at least one threshold".into(),
        });
    }
    if t.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidQuantizer {
            detail: "thresholds must be strictly increasing".into(),
        });
    }
    if f_grid.is_empty() {
        return Err(Error::TooFewPoints { n: 0, min: 1 });
    }
    let k = t.len() + 1;
    let mut mu = Vec::with_capacity(k);
    for j in 0..k {
        let a = if j == 0 { f64::NEG_INFINITY } else { t[j - 1] };
        let b = if j == k - 1 { f64::INFINITY } else { t[j] };
        let mut mass = 0.0;
        let mut moment = 0.0;
        for &f in f_grid {
            mass += gauss::cell_prob(f, sigma, a, b);
            moment += gauss::cell_first_moment(f, sigma, a, b);
        }
        mu.push(if mass < 1e-300 { 0.0 } else { moment / mass });
    }
    Ok(mu)
}

/// Symmetric uniform quantizer: thresholds `(-l c, ..., -c, 0, c, ..., l c)`
/// with spacing `c > 0`, giving `k = 2(l + 1)` cells, and midpoint marks.
pub fn symmetric_uniform(c: f64, l: u32) -> Result<Quantizer> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "threshold spacing must be positive and finite, got {c}"
        )));
    }
    let t: Vec<f64> = (-(l as i64)..=l as i64).map(|i| i as f64 * c).collect();
    let mu = midpoint_marks(&t)?;
    Quantizer::from_parts(t, mu, "symmetric-uniform")
}

/// Test-oriented quantizer for noise level `sigma`, design size `n`, and
/// smoothness order `m`: edge thresholds at `+- 4 sigma sqrt(log n)`, interior
/// spacing at most `n^{-2m/(4m+1)}`, and the cell count rounded up to the next
/// power of two. Marks are midpoints.
pub fn test_tuned(sigma: f64, n: usize, m: u32) -> Result<Quantizer> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidSigma { sigma });
    }
    if n < 2 {
        return Err(Error::TooFewPoints { n, min: 2 });
    }
    if !(1..=8).contains(&m) {
        return Err(Error::UnsupportedOrder {
            order: m,
            min: 1,
            max: 8,
        });
    }
    let edge = 4.0 * sigma * (n as f64).ln().sqrt();
    let target_mesh = (n as f64).powf(-2.0 * m as f64 / (4.0 * m as f64 + 1.0));
    // k - 2 interior cells of width <= target_mesh must cover (-edge, edge).
    let interior = (2.0 * edge / target_mesh).ceil() as usize;
    let k = (interior + 2).next_power_of_two();
    let count = k - 1;
    let step = 2.0 * edge / (count - 1) as f64;
    let t: Vec<f64> = (0..count)
        .map(|i| {
            if i + 1 == count {
                edge
            } else {
                -edge + step * i as f64
            }
        })
        .collect();
    let mu = midpoint_marks(&t)?;
    Quantizer::from_parts(t, mu, "test-tuned")
}

/// Mesh functional: the largest gap between consecutive thresholds,
/// or `0` when there are fewer than two thresholds (`k = 2`).
pub fn mesh(t: &[f64]) -> f64 {
    t.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}
