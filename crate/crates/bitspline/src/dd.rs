//! Minimal double-double (~106-bit) arithmetic for the spectral row oracle.
//!
//! The eigenvalue row oracle computes cosine transforms of kernel rows whose
//! outputs can be as small as 1e-26 while the row entries are ~1e-9: plain
//! f64 cancellation noise (~1e-25) would swamp the result entirely. The
//! error-free transforms below (Knuth two-sum, FMA two-product) give ~32
//! significant digits, which leaves several orders of magnitude of headroom
//! for the 1e-10 relative agreement the oracle must certify.
//!
//! Only the operations the oracle needs are implemented: add, sub, mul, div,
//! a pairwise sum, and `cos2pi(num, den) = cos(2*pi*num/den)` with *exact*
//! integer phase reduction (the phases are rationals, so quadrant/octant
//! folding is integer arithmetic and introduces no rounding at all).

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum of two arbitrary doubles (Knuth).
#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

/// Error-free sum assuming `|a| >= |b|` (Dekker).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let err = b - (s - a);
    Dd { hi: s, lo: err }
}

/// Error-free product via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let err = a.mul_add(b, -p);
    Dd { hi: p, lo: err }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Quotient of two exactly representable nonnegative integers.
    ///
    /// The FMA residual `num - q0*den` is computed with a single rounding of
    /// the exact value, so the pair carries `num/den` to ~2^-106 relative.
    pub fn ratio(num: u64, den: u64) -> Dd {
        debug_assert!(den > 0 && num < (1u64 << 52) && den < (1u64 << 52));
        let (nf, df) = (num as f64, den as f64);
        let q0 = nf / df;
        let r = (-q0).mul_add(df, nf);
        quick_two_sum(q0, r / df)
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let s = two_sum(self.hi, rhs.hi);
        let t = two_sum(self.lo, rhs.lo);
        let mut r = quick_two_sum(s.hi, s.lo + t.hi);
        r = quick_two_sum(r.hi, r.lo + t.lo);
        r
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let mut p = two_prod(self.hi, rhs.hi);
        p.lo += self.hi * rhs.lo + self.lo * rhs.hi;
        quick_two_sum(p.hi, p.lo)
    }
}

impl Dd {
    /// Full double-double quotient (three Newton-style correction steps).
    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r1 = self - rhs * Dd::from_f64(q1);
        let q2 = r1.hi / rhs.hi;
        let r2 = r1 - rhs * Dd::from_f64(q2);
        let q3 = r2.hi / rhs.hi;
        let q = quick_two_sum(q1, q2);
        quick_two_sum(q.hi, q.lo + q3)
    }
}

/// Pairwise (tree) summation: rounding error grows with log2(len) instead of
/// len, which the row oracle's error budget relies on.
pub(crate) fn pairwise_sum(xs: &[Dd]) -> Dd {
    match xs.len() {
        0 => Dd::ZERO,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// 2*pi as a double-double (relative error ~1e-33).
const TWO_PI: Dd = Dd {
    hi: std::f64::consts::TAU,
    lo: 2.4492935982947064e-16,
};

/// Number of Taylor terms: the truncation tail at |x| <= pi/4 is below
/// (pi/4)^34/34! ~ 1e-44, far under the double-double noise floor.
const TAYLOR_TERMS: usize = 17;

/// Coefficient tables (-1)^k/(2k)! and (-1)^k/(2k+1)!; factorials up to 33!
/// fit in u128 and convert to double-double with a single split.
fn taylor_tables() -> &'static (Vec<Dd>, Vec<Dd>) {
    static TABLES: OnceLock<(Vec<Dd>, Vec<Dd>)> = OnceLock::new();
    TABLES.get_or_init(|| {
        let dd_from_u128 = |x: u128| -> Dd {
            let hi = x as f64;
            let back = hi as u128; // hi is integral and in range, conversion exact
            let lo = if back >= x {
                -((back - x) as f64)
            } else {
                (x - back) as f64
            };
            quick_two_sum(hi, lo)
        };
        let mut fact = vec![1u128; 34];
        for k in 1..34 {
            fact[k] = fact[k - 1] * k as u128;
        }
        let one = Dd::from_f64(1.0);
        let cos: Vec<Dd> = (0..TAYLOR_TERMS)
            .map(|k| {
                let c = one.div(dd_from_u128(fact[2 * k]));
                if k.is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let sin: Vec<Dd> = (0..TAYLOR_TERMS)
            .map(|k| {
                let c = one.div(dd_from_u128(fact[2 * k + 1]));
                if k.is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            })
            .collect();
        (cos, sin)
    })
}

/// cos(x) for 0 <= x <= pi/4 by the Taylor series in x^2.
fn cos_taylor(x: Dd) -> Dd {
    let (cos, _) = taylor_tables();
    let u = x * x;
    let mut acc = cos[TAYLOR_TERMS - 1];
    for k in (0..TAYLOR_TERMS - 1).rev() {
        acc = acc * u + cos[k];
    }
    acc
}

/// sin(x) for 0 <= x <= pi/4 by the Taylor series in x^2, times x.
fn sin_taylor(x: Dd) -> Dd {
    let (_, sin) = taylor_tables();
    let u = x * x;
    let mut acc = sin[TAYLOR_TERMS - 1];
    for k in (0..TAYLOR_TERMS - 1).rev() {
        acc = acc * u + sin[k];
    }
    acc * x
}

/// cos(2*pi*num/den) with exact integer phase reduction; requires
/// `0 <= num < den`.
///
/// Reduction chain (all integer-exact):
///   [0,1) -> [0,1/2]   by cos(2*pi*(1-q)) = cos(2*pi*q)
///   [0,1/2] -> [0,1/4] by cos(2*pi*q) = -cos(2*pi*(1/2-q))
///   [0,1/4] -> octant  by cos(2*pi*q) = sin(2*pi*(1/4-q)) when q > 1/8
pub(crate) fn cos2pi(num: u64, den: u64) -> Dd {
    debug_assert!(num < den && den <= 1 << 40);
    let num = if 2 * num > den { den - num } else { num };
    let (negate, num, den) = if 4 * num > den {
        (true, den - 2 * num, 2 * den)
    } else {
        (false, num, den)
    };
    let v = if num == 0 {
        Dd::from_f64(1.0)
    } else if 8 * num <= den {
        cos_taylor(TWO_PI * Dd::ratio(num, den))
    } else {
        sin_taylor(TWO_PI * Dd::ratio(den - 4 * num, 4 * den))
    };
    if negate {
        -v
    } else {
        v
    }
}
