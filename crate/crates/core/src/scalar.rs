//! Exact rational scalars.
//!
//! `Scalar` is an arbitrary-precision rational number: the coefficient
//! field for every polynomial and rational expression in the crate.
//! `num_rational::BigRational` already maintains the invariants we need
//! (coprime numerator/denominator, positive denominator, zero as 0/1).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Scalar = BigRational;

/// Scalar from an integer.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Scalar from a numerator/denominator pair; panics on zero denominator.
pub fn frac(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Render in the canonical text form: `-3/2`, `5`.
pub fn scalar_to_string(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parse the canonical form produced by [`scalar_to_string`].
pub fn scalar_from_str(text: &str) -> Option<Scalar> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => {
            let n: BigInt = text.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// Closest `f64` to the exact rational, via 200-bit fixed-point division.
pub fn scalar_to_f64(s: &Scalar) -> f64 {
    // num-rational's ToPrimitive can overflow for huge numer/denom pairs of
    // comparable size; do a scaled integer division instead.
    if s.is_zero() {
        return 0.0;
    }
    let num = s.numer();
    let den = s.denom();
    let shift = 200usize;
    let scaled = (num << shift) / den;
    let sign = if scaled.is_negative() { -1.0 } else { 1.0 };
    let mag = scaled.magnitude();
    let bits = mag.bits();
    if bits <= 1024 {
        let mut value = 0.0f64;
        for (i, limb) in mag.iter_u64_digits().enumerate() {
            value += (limb as f64) * 2f64.powi(64 * i as i32);
        }
        sign * value * 2f64.powi(-(shift as i32))
    } else {
        // Far outside f64 range anyway.
        sign * f64::INFINITY
    }
}
