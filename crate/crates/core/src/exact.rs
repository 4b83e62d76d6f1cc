//! Exact integer and rational arithmetic plus the combinatorial primitives
//! used throughout the crate.
//!
//! Integers and rationals are backed by `num-bigint` / `num-rational`; the
//! binomial and falling-factorial routines live here so that every caller
//! shares the same conventions (out-of-range binomials are zero).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type ExactInt = BigInt;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactRatio = BigRational;

/// Largest index for which exact arithmetic is mandatory. Above this the
/// float routines switch to the log domain.
pub const EXACT_LIMIT: u64 = 200;

/// `n` choose `k`, zero when `k < 0` or `k > n`.
///
/// Uses the multiplicative formula over the shorter side; each partial
/// product is itself a binomial coefficient so the division is exact and
/// intermediates never exceed the result by more than a factor `n`.
pub fn binomial(n: u64, k: i64) -> ExactInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `j! / (j - l)!`, the product `j (j-1) ... (j-l+1)`.
pub fn falling_factorial(j: u64, l: u64) -> Result<ExactInt> {
    if l > j {
        return Err(Error::UnsupportedRange(format!(
            "falling factorial needs l <= j, got j={j}, l={l}"
        )));
    }
    Ok((0..l).fold(BigInt::one(), |acc, i| acc * (j - i)))
}

/// Natural log of `n` choose `k` via log-gamma.
pub fn log_binomial(n: u64, k: i64) -> Result<f64> {
    if k < 0 || k as u64 > n {
        return Err(Error::InvalidArgument(format!(
            "log_binomial needs 0 <= k <= n, got n={n}, k={k}"
        )));
    }
    let k = k as u64;
    if k == 0 || k == n {
        return Ok(0.0);
    }
    let ln_fact = |x: u64| libm::lgamma(x as f64 + 1.0);
    Ok(ln_fact(n) - ln_fact(k) - ln_fact(n - k))
}

/// `2^exp` as an exact integer.
pub fn pow2(exp: u64) -> ExactInt {
    BigInt::one() << exp
}

/// `base^exp` for a small unsigned base.
pub fn upow(base: u64, exp: u32) -> ExactInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Nearest-float conversion of an exact rational.
pub fn ratio_to_f64(value: &ExactRatio) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    if let Some(v) = value.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fallback for magnitudes `to_f64` cannot place: scale by bit lengths.
    let sign = if value.is_negative() { -1.0 } else { 1.0 };
    let num = value.numer().abs();
    let den = value.denom().clone();
    let shift = num.bits() as i64 - den.bits() as i64;
    let scaled = if shift >= 0 {
        BigRational::new(num, den << shift as u64)
    } else {
        BigRational::new(num << (-shift) as u64, den)
    };
    sign * scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Nearest-float conversion of an exact integer.
pub fn int_to_f64(value: &ExactInt) -> f64 {
    value.to_f64().unwrap_or(if value.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::default();
    values.into_iter().for_each(|v| acc.add(v));
    acc.value()
}
