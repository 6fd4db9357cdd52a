//! Closed-form Gaussian cell moments shared by the quantizer's
//! population-optimal marks and the inference diagnostics.
//!
//! All formulas are the classical truncated-normal identities for
//! `X ~ Normal(f, sigma^2)` with standardized endpoints `alpha = (a-f)/sigma`,
//! `beta = (b-f)/sigma`:
//!
//! ```text
//! P(a < X <= b)        = Phi(beta) - Phi(alpha)
//! E[X 1(a < X <= b)]   = f (Phi(beta) - Phi(alpha)) - sigma (phi(beta) - phi(alpha))
//! E[X^2 1(X <= a)]     = (f^2 + sigma^2) Phi(alpha) - sigma (f + a) phi(alpha)
//! E[X^2 1(X > a)]      = (f^2 + sigma^2) (1 - Phi(alpha)) + sigma (f + a) phi(alpha)
//! ```
//!
//! Infinite endpoints are handled by the limits `Phi(-inf) = 0`,
//! `Phi(inf) = 1`, `phi(+-inf) = 0` (and `a * phi(a) -> 0`).

use std::sync::OnceLock;

use statrs::distribution::{Continuous, ContinuousCDF, Normal};

pub(crate) fn std_normal() -> &'static Normal {
    static N: OnceLock<Normal> = OnceLock::new();
    N.get_or_init(|| Normal::new(0.0, 1.0).expect("standard normal"))
}

/// Standard normal CDF with infinite-endpoint conventions.
pub(crate) fn norm_cdf(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else if x == f64::INFINITY {
        1.0
    } else {
        std_normal().cdf(x)
    }
}

/// Standard normal density, zero at infinite arguments.
pub(crate) fn norm_pdf(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        std_normal().pdf(x)
    }
}

/// Two-sided standard normal quantile `z_{1-alpha/2}` (test support).
#[cfg(test)]
pub(crate) fn two_sided_critical(alpha: f64) -> f64 {
    std_normal().inverse_cdf(1.0 - alpha / 2.0)
}

/// `P(a < X <= b)` for `X ~ Normal(f, sigma^2)`.
pub(crate) fn cell_prob(f: f64, sigma: f64, a: f64, b: f64) -> f64 {
    norm_cdf((b - f) / sigma) - norm_cdf((a - f) / sigma)
}

/// `E[X 1(a < X <= b)]` for `X ~ Normal(f, sigma^2)`.
pub(crate) fn cell_first_moment(f: f64, sigma: f64, a: f64, b: f64) -> f64 {
    let alpha = (a - f) / sigma;
    let beta = (b - f) / sigma;
    f * (norm_cdf(beta) - norm_cdf(alpha)) - sigma * (norm_pdf(beta) - norm_pdf(alpha))
}

/// `E[X^2 1(X <= a)]` for `X ~ Normal(f, sigma^2)`.
pub(crate) fn second_moment_below(f: f64, sigma: f64, a: f64) -> f64 {
    let alpha = (a - f) / sigma;
    let edge = if alpha.is_infinite() {
        0.0
    } else {
        sigma * (f + a) * norm_pdf(alpha)
    };
    (f * f + sigma * sigma) * norm_cdf(alpha) - edge
}

/// `E[X^2 1(X > a)]` for `X ~ Normal(f, sigma^2)`.
pub(crate) fn second_moment_above(f: f64, sigma: f64, a: f64) -> f64 {
    let alpha = (a - f) / sigma;
    let edge = if alpha.is_infinite() {
        0.0
    } else {
        sigma * (f + a) * norm_pdf(alpha)
    };
    (f * f + sigma * sigma) * (1.0 - norm_cdf(alpha)) + edge
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn half_second_moment_at_zero() {
        // E[Z^2 1(Z <= 0)] = 1/2 for a standard normal: half of E[Z^2] = 1.
        assert_relative_eq!(second_moment_below(0.0, 1.0, 0.0), 0.5, max_relative = 1e-14);
        assert_relative_eq!(second_moment_above(0.0, 1.0, 0.0), 0.5, max_relative = 1e-14);
    }

    #[test]
    #[allow(clippy::excessive_precision)] // oracle digits kept verbatim
    fn second_moment_frozen_values() {
        // Frozen 60-digit values of Phi(a) - a phi(a). The tolerance is set
        // by the normal-CDF implementation, which is accurate to roughly
        // 1e-10 relative (the pdf term is fully accurate).
        assert_relative_eq!(
            second_moment_below(0.0, 1.0, -1.0),
            0.4006259784506004012125976473035227323508,
            max_relative = 1e-8
        );
        assert_relative_eq!(
            second_moment_below(0.0, 1.0, -3.0),
            0.01464544326744411605345887285595801110734,
            max_relative = 1e-8
        );
    }

    #[test]
    fn split_moments_rebuild_the_total() {
        // Below + between + above = f^2 + sigma^2 for any split point.
        for (f, sigma, a) in [(0.3, 1.2, -0.7), (-1.0, 0.5, 0.4), (2.0, 2.0, 2.0)] {
            let below = second_moment_below(f, sigma, a);
            let above = second_moment_above(f, sigma, a);
            assert_relative_eq!(below + above, f * f + sigma * sigma, max_relative = 1e-12);
        }
    }

    #[test]
    fn first_moment_total_mass() {
        // E[X 1(-inf < X <= inf)] = f.
        let m = cell_first_moment(1.3, 0.8, f64::NEG_INFINITY, f64::INFINITY);
        assert_relative_eq!(m, 1.3, max_relative = 1e-14);
        let p = cell_prob(1.3, 0.8, f64::NEG_INFINITY, f64::INFINITY);
        assert_relative_eq!(p, 1.0, max_relative = 1e-14);
    }
}
