//! Scalar abstraction shared by every numeric module.
//!
//! All analysis code is written against [`Real`], implemented for `f32` and
//! `f64`. Parsers and report writers work in `f64` and convert at the edges.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Never fails for finite inputs.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("float to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for `T::lit(v)`.
#[inline]
pub(crate) fn c<T: Real>(v: f64) -> T {
    T::lit(v)
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros
/// trimmed, exponent form outside `1e-4 ..< 1e17`. Parses back to the
/// identical `f64`.
pub fn fmt_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{v:.*}", (16 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g17_matches_c_printf() {
        // Reference strings from printf("%.17g").
        let cases = [
            (0.5, "0.5"),
            (0.1, "0.10000000000000001"),
            (100.0, "100"),
            (-2.5e-7, "-2.4999999999999999e-07"),
            (1e17, "1e+17"),
            (123456789012345678.0, "1.2345678901234568e+17"),
            (0.0001, "0.0001"),
            (1.0 / 3.0, "0.33333333333333331"),
            (-0.0, "-0"),
            (300.0, "300"),
        ];
        for (v, want) in cases {
            assert_eq!(fmt_g17(v), want, "{v}");
        }
    }

    proptest! {
        #[test]
        fn g17_round_trips(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            prop_assert_eq!(fmt_g17(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}
