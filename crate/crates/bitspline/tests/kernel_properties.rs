//! Structural properties of the periodic kernels that the spectral and
//! dense paths both rely on: the tensor kernel really is the composition
//! of the base kernel with itself, the kernel integrates to zero over a
//! period, and the induced Gram matrices are positive semidefinite.

use bitspline::kernel::{bernoulli_poly, KernelSpec};
use nalgebra::DMatrix;

/// Periodic rectangle rule with `points` nodes. For 1-periodic integrands
/// this coincides with the trapezoid rule.
fn periodic_quadrature(points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..points {
        acc += f(j as f64 / points as f64);
    }
    acc / points as f64
}

#[test]
fn tensor_kernel_is_the_composition_of_the_base_kernel() {
    // The integrand has derivative kinks at u = x and u = y, so the
    // rectangle rule converges at O(points^-2); 2e4 nodes leave ~1e-10,
    // well inside the 1e-8 budget.
    const POINTS: usize = 20_000;
    const TOL: f64 = 1e-8;
    for m in [1u32, 2] {
        let spec = KernelSpec::new(m).unwrap();
        for (x, y) in [(0.3, 0.3), (0.1, 0.7), (0.55, 0.2)] {
            let composed =
                periodic_quadrature(POINTS, |u| spec.kernel_k(x, u) * spec.kernel_k(u, y));
            let direct = spec.kernel_k2(x, y);
            assert!(
                (composed - direct).abs() <= TOL,
                "m={m} (x,y)=({x},{y}): quadrature {composed} vs tensor {direct}"
            );
        }
    }
}

#[test]
fn kernel_has_zero_mean_over_a_period() {
    // The quadrature error of the periodic rectangle rule applied to a
    // Bernoulli polynomial is exactly points^-(2m) * B_2m({points*x})/(2m)!
    // (multiplication theorem), below 2e-11 at 1e5 nodes even for m=1.
    const POINTS: usize = 100_000;
    const TOL: f64 = 1e-10;
    for m in [1u32, 2] {
        let spec = KernelSpec::new(m).unwrap();
        for x in [0.0, 0.37, 0.81] {
            let mean = periodic_quadrature(POINTS, |u| spec.kernel_k(x, u));
            assert!(mean.abs() <= TOL, "m={m} x={x}: mean {mean}");
        }
    }
}

#[test]
fn kernel_is_symmetric_periodic_and_constant_on_the_diagonal() {
    for m in [1u32, 2, 3] {
        let spec = KernelSpec::new(m).unwrap();
        let diag = spec.kernel_k(0.0, 0.0);
        for (x, y) in [(0.2, 0.9), (0.11, 0.48), (0.75, 0.3)] {
            let k = spec.kernel_k(x, y);
            // Swapping arguments evaluates the polynomial at the reflected
            // point, so agreement is to roundoff rather than bit-exact.
            assert!(
                (k - spec.kernel_k(y, x)).abs() <= 1e-15,
                "symmetry at ({x},{y})"
            );
            assert!(
                (k - spec.kernel_k(x + 1.0, y)).abs() <= 1e-12,
                "periodicity at ({x},{y})"
            );
            assert!(
                (spec.kernel_k(x, x) - diag).abs() <= 1e-15,
                "diagonal constancy at {x}"
            );
        }
        // The diagonal value is B_2m(0)/(2m)! up to the alternating sign,
        // i.e. positive for every order.
        let bern0 = bernoulli_poly(2 * m, 0.0).unwrap();
        assert!(diag > 0.0);
        assert!((diag.abs() - bern0.abs() / factorial(2 * m)).abs() <= 1e-15);
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

#[test]
fn gram_matrices_are_positive_semidefinite() {
    const FLOOR: f64 = -1e-12;
    for m in [1u32, 2] {
        let spec = KernelSpec::new(m).unwrap();
        for n in [16usize, 64] {
            for tensor in [false, true] {
                let gram = DMatrix::from_fn(n, n, |i, j| {
                    let x = (i + 1) as f64 / n as f64;
                    let y = (j + 1) as f64 / n as f64;
                    if tensor {
                        spec.kernel_k2(x, y) / n as f64
                    } else {
                        spec.kernel_k(x, y) / n as f64
                    }
                });
                let min_eig = gram
                    .symmetric_eigen()
                    .eigenvalues
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::min);
                assert!(
                    min_eig >= FLOOR,
                    "m={m} n={n} tensor={tensor}: min eigenvalue {min_eig}"
                );
            }
        }
    }
}
