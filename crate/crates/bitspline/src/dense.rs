//! Dense linear-algebra reference implementations.
//!
//! Everything in this module materializes the design Gram matrices and runs
//! O(n^3) factorizations. It exists as an independent route to the same
//! quantities the spectral fast path computes — fits, GCV scores, quadratic
//! forms, traces — so the two can be checked against each other. It is not
//! meant for production sizes; `MAX_DENSE_N` caps the design size.

use nalgebra::DMatrix;

use crate::kernel::KernelSpec;
use crate::{Error, Result};

/// Largest design size the dense route accepts.
pub const MAX_DENSE_N: usize = 256;

/// Trace and scale quantities computed densely from the standardizing
/// matrix `A = (Sigma + lambda I)^{-1} Omega (Sigma + lambda I)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseSummary {
    /// `trace(A)`.
    pub trace_a: f64,
    /// `trace(A^2)` (the squared Frobenius norm, as `A` is symmetric).
    pub trace_a2: f64,
    /// `s_n^2 = 2 (trace(A^2) - trace(A)^2 / n)`.
    pub s_n_sq: f64,
}

fn check_n(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::TooFewPoints { n, min: 4 });
    }
    if n > MAX_DENSE_N {
        return Err(Error::InvalidConfig(format!(
            "dense route supports n <= {MAX_DENSE_N}, got {n}"
        )));
    }
    Ok(())
}

fn kernel_matrix(n: usize, spec: &KernelSpec, tensor: bool) -> DMatrix<f64> {
    let n_f = n as f64;
    DMatrix::from_fn(n, n, |i, j| {
        let xi = (i + 1) as f64 / n_f;
        let xj = (j + 1) as f64 / n_f;
        let k = if tensor {
            spec.kernel_k2(xi, xj)
        } else {
            spec.kernel_k(xi, xj)
        };
        k / n_f
    })
}

/// The scaled Gram matrix `Sigma = [K(x_i, x_j) / n]`.
pub fn sigma_matrix(n: usize, m: u32) -> Result<DMatrix<f64>> {
    check_n(n)?;
    let spec = KernelSpec::new(m)?;
    Ok(kernel_matrix(n, &spec, false))
}

/// The scaled tensor Gram matrix `Omega = [K2(x_i, x_j) / n]`.
pub fn omega_matrix(n: usize, m: u32) -> Result<DMatrix<f64>> {
    check_n(n)?;
    let spec = KernelSpec::new(m)?;
    Ok(kernel_matrix(n, &spec, true))
}

fn solve(
    lu: &nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    rhs: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    lu.solve(rhs)
        .ok_or_else(|| Error::InvalidConfig("dense solve failed: singular system".into()))
}

/// Dense penalized least-squares fit. Returns `(theta, fitted_grid)` with
/// `theta = (Sigma + lambda I)^{-1} v / n` and `fitted = Sigma (Sigma +
/// lambda I)^{-1} v`, computed by LU factorization.
pub fn dense_fit(values: &[f64], m: u32, lambda: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = values.len();
    check_n(n)?;
    crate::spectral::validate_lambda(lambda)?;
    let sigma = sigma_matrix(n, m)?;
    let mut system = sigma.clone();
    for i in 0..n {
        system[(i, i)] += lambda;
    }
    let lu = nalgebra::linalg::LU::new(system);
    let v = DMatrix::from_column_slice(n, 1, values);
    let hv = solve(&lu, &v)?; // (Sigma + lambda I)^{-1} v
    let fitted = &sigma * &hv;
    let theta: Vec<f64> = hv.iter().map(|&x| x / n as f64).collect();
    Ok((theta, fitted.iter().cloned().collect()))
}

/// Dense GCV score `n ||(I - S) v||^2 / (n - trace S)^2` with the smoother
/// `S = Sigma (Sigma + lambda I)^{-1}` formed explicitly.
pub fn dense_gcv_score(values: &[f64], m: u32, lambda: f64) -> Result<f64> {
    let n = values.len();
    check_n(n)?;
    crate::spectral::validate_lambda(lambda)?;
    let sigma = sigma_matrix(n, m)?;
    let mut system = sigma.clone();
    for i in 0..n {
        system[(i, i)] += lambda;
    }
    let lu = nalgebra::linalg::LU::new(system);
    let v = DMatrix::from_column_slice(n, 1, values);
    let fitted = &sigma * solve(&lu, &v)?;
    let resid_sq: f64 = values
        .iter()
        .zip(fitted.iter())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    // trace S = trace((Sigma + lambda I)^{-1} Sigma) by cyclicity.
    let trace = solve(&lu, &sigma)?.trace();
    let dof = n as f64 - trace;
    Ok(n as f64 * resid_sq / (dof * dof))
}

/// The standardizing matrix `A = (Sigma + lambda I)^{-1} Omega
/// (Sigma + lambda I)^{-1}`, formed explicitly.
pub fn dense_a_matrix(n: usize, m: u32, lambda: f64) -> Result<DMatrix<f64>> {
    check_n(n)?;
    crate::spectral::validate_lambda(lambda)?;
    let sigma = sigma_matrix(n, m)?;
    let omega = omega_matrix(n, m)?;
    let mut system = sigma;
    for i in 0..n {
        system[(i, i)] += lambda;
    }
    let lu = nalgebra::linalg::LU::new(system);
    let half = solve(&lu, &omega)?; // (Sigma + lambda I)^{-1} Omega
    // Both factors are symmetric, so half' = Omega (Sigma + lambda I)^{-1}.
    solve(&lu, &half.transpose())
}

/// Dense evaluation of the quadratic form `v' A v`.
pub fn dense_quadratic_form(v: &[f64], m: u32, lambda: f64) -> Result<f64> {
    let n = v.len();
    let a = dense_a_matrix(n, m, lambda)?;
    let x = DMatrix::from_column_slice(n, 1, v);
    Ok((x.transpose() * a * x)[(0, 0)])
}

/// Dense traces and scale of the standardizing matrix.
pub fn dense_spectral_summary(n: usize, m: u32, lambda: f64) -> Result<DenseSummary> {
    let a = dense_a_matrix(n, m, lambda)?;
    let trace_a = a.trace();
    let trace_a2: f64 = a.iter().map(|&x| x * x).sum();
    let s_n_sq = 2.0 * (trace_a2 - trace_a * trace_a / n as f64);
    Ok(DenseSummary {
        trace_a,
        trace_a2,
        s_n_sq,
    })
}
