//! Bernoulli polynomials and the periodic Sobolev reproducing kernel.
//!
//! The order-`m` periodic Sobolev space on the unit circle has reproducing
//! kernel
//!
//! ```text
//! K(x, y)  = (-1)^(m-1) * B_{2m}((x - y) mod 1) / (2m)!
//! ```
//!
//! and its tensor (the kernel of the squared integral operator) is
//!
//! ```text
//! K2(x, y) = (-1)^(2m-1) * B_{4m}((x - y) mod 1) / (4m)!
//! ```
//!
//! where `B_k` is the k-th Bernoulli polynomial. Coefficients are generated
//! once from the exact rational recurrence and cached; evaluation is a
//! floating-point Horner pass over those coefficients. Exact rational
//! evaluation is also exposed crate-internally so the spectral oracle can
//! avoid all rounding in its inputs.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Largest order accepted by the public [`bernoulli_poly`] entry point.
pub const MAX_PUBLIC_ORDER: u32 = 16;

/// Largest order kept in the internal table: the tensor kernel of the
/// largest supported spline order (`m = 8`) evaluates `B_{32}`.
pub(crate) const MAX_INTERNAL_ORDER: u32 = 32;

/// Largest supported spline order. Higher orders are numerically useless
/// here: the kernel eigenvalues decay like `(2 pi l)^(-2m)` and vanish below
/// f64 resolution almost immediately.
pub const MAX_SPLINE_ORDER: u32 = 8;

/// Exact polynomial coefficient tables, `tables()[order][power]`.
fn tables() -> &'static Vec<Vec<BigRational>> {
    static TABLES: OnceLock<Vec<Vec<BigRational>>> = OnceLock::new();
    TABLES.get_or_init(build_tables)
}

/// The same tables rounded to f64 once, for the fast Horner path.
fn tables_f64() -> &'static Vec<Vec<f64>> {
    static TABLES_F64: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLES_F64.get_or_init(|| {
        tables()
            .iter()
            .map(|poly| {
                poly.iter()
                    .map(|c| c.to_f64().expect("coefficient fits in f64"))
                    .collect()
            })
            .collect()
    })
}

/// Bernoulli numbers `B_0..=B_max` (convention `B_1 = -1/2`), then the
/// polynomial coefficients `coeff(order, k) = C(order, k) * B_{order-k}`.
fn build_tables() -> Vec<Vec<BigRational>> {
    let max = MAX_INTERNAL_ORDER as usize;

    // Pascal's triangle up to row max+1, exact.
    let mut binom: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for row in 1..=max + 1 {
        let prev = &binom[row - 1];
        let mut cur = vec![BigInt::one()];
        for k in 1..row {
            cur.push(&prev[k - 1] + &prev[k]);
        }
        cur.push(BigInt::one());
        binom.push(cur);
    }

    // Recurrence: sum_{k=0}^{mm} C(mm+1, k) B_k = 0 for mm >= 1.
    let mut numbers: Vec<BigRational> = vec![BigRational::one()];
    for mm in 1..=max {
        let mut acc = BigRational::zero();
        for (k, b) in numbers.iter().enumerate() {
            acc += BigRational::from_integer(binom[mm + 1][k].clone()) * b;
        }
        let denom = BigRational::from_integer(BigInt::from(mm as u64 + 1));
        numbers.push(-acc / denom);
    }

    (0..=max)
        .map(|order| {
            (0..=order)
                .map(|k| {
                    BigRational::from_integer(binom[order][k].clone()) * &numbers[order - k]
                })
                .collect()
        })
        .collect()
}

/// Horner evaluation of the order-`order` Bernoulli polynomial in f64.
fn horner_f64(order: usize, x: f64) -> f64 {
    let coeffs = &tables_f64()[order];
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Evaluate the Bernoulli polynomial `B_order(x)`.
///
/// The intended domain is `0 <= x < 1` (kernel callers reduce their argument
/// first); the polynomial itself is evaluated as given for any finite `x`.
///
/// # Errors
/// [`Error::UnsupportedOrder`] when `order > 16`. Internally the crate keeps
/// coefficients up to order 32 (the tensor kernel of the largest spline
/// order needs them) but the public surface stops where the guaranteed
/// accuracy of a plain f64 Horner pass does.
pub fn bernoulli_poly(order: u32, x: f64) -> Result<f64> {
    if order > MAX_PUBLIC_ORDER {
        return Err(Error::UnsupportedOrder {
            order,
            min: 0,
            max: MAX_PUBLIC_ORDER,
        });
    }
    Ok(horner_f64(order as usize, x))
}

/// Exact rational evaluation of `B_order(x)` for the spectral row oracle.
pub(crate) fn bernoulli_poly_exact(order: u32, x: &BigRational) -> BigRational {
    assert!(order <= MAX_INTERNAL_ORDER, "order out of internal range");
    let coeffs = &tables()[order as usize];
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Reduce `t` into `[0, 1)`, mapping exact integers to 0.
///
/// The kernel is continuous on the circle, so the boundary choice is inert
/// mathematically, but a deterministic convention keeps oracle comparisons
/// exact. `t - floor(t)` can round to 1.0 for tiny negative `t`; that case is
/// folded back to 0.
pub(crate) fn frac_unit(t: f64) -> f64 {
    let f = t - t.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Spline order plus the two exact factorial scales of the kernel pair.
///
/// `factorial_scale_k = (-1)^(m-1) / (2m)!` and
/// `factorial_scale_k2 = (-1)^(2m-1) / (4m)!` are stored as f64 for the fast
/// path; the exact rationals are available crate-internally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    /// Spline order (number of penalized derivatives), `1..=8`.
    pub m: u32,
    /// `(-1)^(m-1) / (2m)!`, the scale of the reproducing kernel.
    pub factorial_scale_k: f64,
    /// `(-1)^(2m-1) / (4m)! = -1 / (4m)!`, the scale of the tensor kernel.
    pub factorial_scale_k2: f64,
}

impl KernelSpec {
    /// Build the kernel pair for spline order `m`.
    ///
    /// # Errors
    /// [`Error::UnsupportedOrder`] unless `1 <= m <= 8`.
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=MAX_SPLINE_ORDER).contains(&m) {
            return Err(Error::UnsupportedOrder {
                order: m,
                min: 1,
                max: MAX_SPLINE_ORDER,
            });
        }
        Ok(KernelSpec {
            m,
            factorial_scale_k: Self::scale_k_exact(m)
                .to_f64()
                .expect("scale fits in f64"),
            factorial_scale_k2: Self::scale_k2_exact(m)
                .to_f64()
                .expect("scale fits in f64"),
        })
    }

    fn factorial(k: u32) -> BigInt {
        (1..=k as u64).map(BigInt::from).product::<BigInt>().max(BigInt::one())
    }

    /// Exact `(-1)^(m-1) / (2m)!`.
    pub(crate) fn scale_k_exact(m: u32) -> BigRational {
        let sign = if m % 2 == 1 { 1 } else { -1 };
        BigRational::new(BigInt::from(sign), Self::factorial(2 * m))
    }

    /// Exact `-1 / (4m)!`.
    pub(crate) fn scale_k2_exact(m: u32) -> BigRational {
        BigRational::new(BigInt::from(-1), Self::factorial(4 * m))
    }

    /// The reproducing kernel `K(x, y)`; symmetric and 1-periodic in each
    /// argument.
    pub fn kernel_k(&self, x: f64, y: f64) -> f64 {
        self.factorial_scale_k * horner_f64(2 * self.m as usize, frac_unit(x - y))
    }

    /// The tensor kernel `K2(x, y) = ∫ K(x,u) K(u,y) du`; symmetric and
    /// 1-periodic in each argument.
    pub fn kernel_k2(&self, x: f64, y: f64) -> f64 {
        self.factorial_scale_k2 * horner_f64(4 * self.m as usize, frac_unit(x - y))
    }

    /// Exact kernel row entry `K(0, j/n)` as a rational, for the spectral
    /// row oracle.
    pub(crate) fn kernel_k_exact(&self, j: u64, n: u64) -> BigRational {
        let x = BigRational::new(BigInt::from(j), BigInt::from(n));
        Self::scale_k_exact(self.m) * bernoulli_poly_exact(2 * self.m, &x)
    }

    /// Exact tensor row entry `K2(0, j/n)` as a rational.
    pub(crate) fn kernel_k2_exact(&self, j: u64, n: u64) -> BigRational {
        let x = BigRational::new(BigInt::from(j), BigInt::from(n));
        Self::scale_k2_exact(self.m) * bernoulli_poly_exact(4 * self.m, &x)
    }
}

/// Convert an exact rational into an (hi, lo) double-double pair with
/// relative error ~2^-106.
pub(crate) fn rational_to_f64_pair(r: &BigRational) -> (f64, f64) {
    let hi = r.to_f64().unwrap_or(0.0);
    if hi == 0.0 || !hi.is_finite() {
        return (hi, 0.0);
    }
    let hi_rat = BigRational::from_float(hi).expect("finite");
    let rem = r - hi_rat;
    let lo = rem.to_f64().unwrap_or(0.0);
    (hi, lo)
}

/// Signed magnitude helper used by tests comparing rationals.
#[allow(dead_code)]
pub(crate) fn rational_abs(r: &BigRational) -> BigRational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bernoulli_number_values_at_zero() {
        // B_n(0) is the n-th Bernoulli number.
        assert_relative_eq!(bernoulli_poly(4, 0.0).unwrap(), -1.0 / 30.0, max_relative = 1e-15);
        assert_relative_eq!(bernoulli_poly(1, 0.0).unwrap(), -0.5, max_relative = 1e-15);
        assert_relative_eq!(bernoulli_poly(8, 0.0).unwrap(), -1.0 / 30.0, max_relative = 1e-15);
        assert_eq!(bernoulli_poly(0, 0.37).unwrap(), 1.0);
    }

    #[test]
    fn bernoulli_half_argument_values() {
        // B_4(x) = x^4 - 2x^3 + x^2 - 1/30 at x = 1/2 gives 7/240.
        assert_relative_eq!(bernoulli_poly(4, 0.5).unwrap(), 7.0 / 240.0, max_relative = 1e-14);
        // B_8(1/2) = 127/3840 (half-argument identity (2^(1-n)-1) B_n).
        assert_relative_eq!(
            bernoulli_poly(8, 0.5).unwrap(),
            127.0 / 3840.0,
            max_relative = 1e-14
        );
    }

    #[test]
    #[allow(clippy::excessive_precision)] // oracle digits kept verbatim
    fn bernoulli_higher_order_frozen_values() {
        // Frozen from exact rational arithmetic (sympy):
        //   B_16(1/3) = 25949996501/7317942570
        //   B_12(3/7) = 1230513089867/5398102008390
        assert_relative_eq!(
            bernoulli_poly(16, 1.0 / 3.0).unwrap(),
            3.546078184240246094196937651015208773359,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            bernoulli_poly(12, 3.0 / 7.0).unwrap(),
            0.2279529152940190905401898353102270542030,
            max_relative = 1e-12
        );
    }

    #[test]
    fn bernoulli_order_cap() {
        assert!(bernoulli_poly(16, 0.25).is_ok());
        let err = bernoulli_poly(17, 0.25).unwrap_err();
        assert!(matches!(err, Error::UnsupportedOrder { order: 17, .. }));
    }

    #[test]
    fn internal_table_reaches_order_32() {
        // B_32(0) = -7709321041217/510, frozen from the exact recurrence.
        let b32 = tables_f64()[32][0];
        assert_relative_eq!(b32, -15116315767.092157, max_relative = 1e-12);
    }

    #[test]
    fn spline_order_validation() {
        assert!(KernelSpec::new(0).is_err());
        assert!(KernelSpec::new(9).is_err());
        for m in 1..=8 {
            assert!(KernelSpec::new(m).is_ok());
        }
    }

    #[test]
    fn kernel_diagonal_and_half_offset_values() {
        let spec = KernelSpec::new(2).unwrap();
        // K(x, x) = -B_4(0)/4! = 1/720 for m = 2.
        assert_relative_eq!(spec.kernel_k(0.3, 0.3), 1.0 / 720.0, max_relative = 1e-14);
        // K(1/4, 3/4) = -B_4(1/2)/4! = -7/5760.
        assert_relative_eq!(spec.kernel_k(0.25, 0.75), -7.0 / 5760.0, max_relative = 1e-14);
    }

    #[test]
    fn tensor_kernel_values() {
        let spec = KernelSpec::new(2).unwrap();
        // K2(x, x) = -B_8(0)/8! = 1/1209600 for m = 2.
        assert_relative_eq!(spec.kernel_k2(0.1, 0.1), 1.0 / 1209600.0, max_relative = 1e-14);
        // K2(0, 1/2) = -B_8(1/2)/8! = -127/154828800.
        assert_relative_eq!(
            spec.kernel_k2(0.0, 0.5),
            -127.0 / 154_828_800.0,
            max_relative = 1e-14
        );
        // The tensor of the order-1 kernel carries the order-2 scale on the
        // diagonal: K2(x, x) = -B_4(0)/4! = 1/720 for m = 1.
        let spec1 = KernelSpec::new(1).unwrap();
        assert_relative_eq!(spec1.kernel_k2(0.4, 0.4), 1.0 / 720.0, max_relative = 1e-14);
    }

    #[test]
    fn kernel_symmetry_and_periodicity() {
        let spec = KernelSpec::new(2).unwrap();
        let pairs = [(0.1, 0.7), (0.33, 0.91), (0.5, 0.5), (0.05, 0.95)];
        for &(x, y) in &pairs {
            assert_relative_eq!(spec.kernel_k(x, y), spec.kernel_k(y, x), max_relative = 1e-13);
            assert_relative_eq!(
                spec.kernel_k(x, y),
                spec.kernel_k(x, y + 1.0),
                max_relative = 1e-13
            );
            assert_relative_eq!(
                spec.kernel_k2(x, y),
                spec.kernel_k2(y, x),
                max_relative = 1e-13
            );
        }
        assert_relative_eq!(
            spec.kernel_k(0.3, 1.3),
            spec.kernel_k(0.3, 0.3),
            max_relative = 1e-13
        );
    }

    #[test]
    fn exact_and_float_paths_agree() {
        let spec = KernelSpec::new(2).unwrap();
        for j in 0..16u64 {
            let exact = spec.kernel_k_exact(j, 16).to_f64().unwrap();
            let float = spec.kernel_k(0.0, j as f64 / 16.0);
            assert_relative_eq!(exact, float, max_relative = 1e-12);
        }
    }

    #[test]
    fn frac_unit_conventions() {
        assert_eq!(frac_unit(0.0), 0.0);
        assert_eq!(frac_unit(1.0), 0.0);
        assert_eq!(frac_unit(-1.0), 0.0);
        assert_eq!(frac_unit(2.25), 0.25);
        assert_eq!(frac_unit(-0.25), 0.75);
        // Tiny negative arguments must not land on 1.0.
        let f = frac_unit(-1e-18);
        assert!((0.0..1.0).contains(&f));
    }

    #[test]
    fn rational_pair_roundtrip() {
        let r = BigRational::new(BigInt::from(-127), BigInt::from(154_828_800u64));
        let (hi, lo) = rational_to_f64_pair(&r);
        let back = hi + lo;
        assert_relative_eq!(back, -127.0 / 154_828_800.0, max_relative = 1e-15);
        assert!(lo.abs() <= hi.abs() * 1e-15);
    }
}
