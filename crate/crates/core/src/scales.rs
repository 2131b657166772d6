//! Hertz ↔ Bark conversion using Traunmüller's analytic formula
//! `Z = 26.81 / (1 + 1960 / f) − 0.53`.

use crate::error::{Error, Result};
use crate::num::{c, Real};

/// Lower asymptote of the Bark curve as f → 0⁺.
pub const BARK_MIN: f64 = -0.53;
/// Upper asymptote as f → ∞.
pub const BARK_MAX: f64 = 26.28;

const SCALE: f64 = 26.81;
const KNEE_HZ: f64 = 1960.0;

/// A strictly positive, finite frequency in Hz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Hz<T>(T);

/// A Bark value inside the open interval (−0.53, 26.28).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bark<T>(T);

impl<T: Real> Hz<T> {
    pub fn new(value: T) -> Result<Self> {
        check_hz(value)?;
        Ok(Self(value))
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn to_bark(self) -> Bark<T> {
        Bark(bark_unchecked(self.0))
    }
}

impl<T: Real> Bark<T> {
    pub fn new(value: T) -> Result<Self> {
        check_bark(value)?;
        Ok(Self(value))
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn to_hz(self) -> Hz<T> {
        Hz(hz_unchecked(self.0))
    }
}

fn check_hz<T: Real>(f: T) -> Result<()> {
    if !f.is_finite() || f <= T::zero() {
        return Err(Error::Domain(format!("frequency must be positive and finite, got {f}")));
    }
    Ok(())
}

fn check_bark<T: Real>(z: T) -> Result<()> {
    if !z.is_finite() || z <= c(BARK_MIN) || z >= c(BARK_MAX) {
        return Err(Error::Domain(format!(
            "Bark value must lie in ({BARK_MIN}, {BARK_MAX}), got {z}"
        )));
    }
    Ok(())
}

#[inline]
fn bark_unchecked<T: Real>(f: T) -> T {
    c::<T>(SCALE) / (T::one() + c::<T>(KNEE_HZ) / f) - c(0.53)
}

#[inline]
fn hz_unchecked<T: Real>(z: T) -> T {
    c::<T>(KNEE_HZ) * (z + c(0.53)) / (c::<T>(BARK_MAX) - z)
}

/// Converts a frequency in Hz to Bark. Rejects zero, negative and non-finite input.
pub fn hz_to_bark<T: Real>(f: T) -> Result<T> {
    check_hz(f)?;
    Ok(bark_unchecked(f))
}

/// Algebraic inverse of [`hz_to_bark`], defined on (−0.53, 26.28).
pub fn bark_to_hz<T: Real>(z: T) -> Result<T> {
    check_bark(z)?;
    Ok(hz_unchecked(z))
}
