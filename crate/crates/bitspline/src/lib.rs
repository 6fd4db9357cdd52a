//! Nonparametric estimation and hypothesis testing from coarsely quantized
//! samples on a uniform grid, using periodic smoothing splines.
//!
//! The pipeline: raw samples `y_i = f(i/n) + ε_i` are reduced to b-bit values
//! `z_i = Q(y_i)` by a scalar [`quantizer`], a periodic smoothing spline is
//! fitted to `z` in O(n log n) through the circulant [`spectral`]
//! decomposition of the kernel Gram matrices ([`estimator`]), and a
//! goodness-of-fit test with Gaussian null calibration is computed from a
//! spectral quadratic form ([`inference`]). The [`simulation`] module drives
//! seeded, reproducible Monte Carlo studies of estimation error, test size,
//! and test power.
//!
//! # Conventions
//!
//! * Design points are `x_i = i/n` for `i = 1..=n`; all functions live on the
//!   unit circle (period 1).
//! * The discrete Fourier transform is the unitary one (forward scaled by
//!   `1/sqrt(n)`), so Parseval holds without extra factors. Every spectral
//!   routine documents its use of this single convention.
//! * Smoothing penalties are written `lambda`; the equivalent bandwidth is
//!   `h = lambda^(1/(2m))` where `m` is the spline order.

pub mod dense;
pub mod error;
pub mod estimator;
pub mod inference;
pub mod kernel;
pub mod quantizer;
pub mod simulation;
pub mod spectral;

mod dd;
mod fft;
mod gauss;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
