//! Thread-local FFT planning.
//!
//! rustfft transforms are unnormalized in both directions; every caller in
//! this crate applies the crate-wide unitary convention (forward scaled by
//! `1/sqrt(n)`) explicitly at the point of use, usually fused into another
//! scale factor. The planner memoizes plans per length, and one planner per
//! thread keeps the Monte Carlo drivers contention-free.

use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan_forward(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

fn plan_inverse(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// Unnormalized forward DFT of a real vector.
pub(crate) fn fft_forward_real(v: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = v.iter().map(|&x| Complex::new(x, 0.0)).collect();
    plan_forward(buf.len()).process(&mut buf);
    buf
}

/// Unnormalized inverse DFT, in place.
pub(crate) fn fft_inverse_inplace(buf: &mut [Complex<f64>]) {
    plan_inverse(buf.len()).process(buf);
}
