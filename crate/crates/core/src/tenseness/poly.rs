//! Polynomial models of a Bark trajectory `Z(t)` and their derivatives.
//!
//! `t` is measured in deciseconds from the start of the fit window, which
//! keeps the normal equations well conditioned.

use crate::error::{Error, Result};
use crate::ingest::{Channel, FormantTrack};
use crate::linalg::least_squares;
use crate::num::{c, Real};
use crate::scales::hz_to_bark;

use super::MS_PER_DS;

pub const MAX_DEGREE: usize = 6;

/// `Z(t) = Σ cᵢ tⁱ` fitted over `window_ms`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyModel<T = f64> {
    /// `c₀ … c_n`, lowest order first.
    pub coefficients: Vec<T>,
    pub window_ms: (T, T),
    pub residual_rms: T,
    pub n_points: usize,
}

impl<T: Real> PolyModel<T> {
    /// Builds a model directly from coefficients (no fit residual).
    pub fn from_coefficients(coefficients: Vec<T>, window_ms: (T, T)) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::Fit("a model needs degree >= 1".into()));
        }
        if !(window_ms.0 < window_ms.1) {
            return Err(Error::Fit(format!("degenerate window [{}, {}]", window_ms.0, window_ms.1)));
        }
        Ok(Self { coefficients, window_ms, residual_rms: T::zero(), n_points: 0 })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Window length in deciseconds.
    pub fn span_ds(&self) -> T {
        (self.window_ms.1 - self.window_ms.0) / c(MS_PER_DS)
    }

    /// Converts an absolute time in ms to model time in ds.
    pub fn to_model_time(&self, t_ms: T) -> T {
        (t_ms - self.window_ms.0) / c(MS_PER_DS)
    }

    pub fn eval(&self, t_ds: T) -> T {
        self.nth_derivative(0, t_ds)
    }

    /// `k`-th analytic derivative at `t_ds` (no window check).
    pub fn nth_derivative(&self, k: usize, t_ds: T) -> T {
        let mut acc = T::zero();
        for i in (k..self.coefficients.len()).rev() {
            let falling: f64 = ((i - k + 1)..=i).map(|j| j as f64).product();
            acc = acc * t_ds + self.coefficients[i] * c(falling);
        }
        acc
    }

    fn check_inside(&self, t_ds: T) -> Result<()> {
        let span = self.span_ds();
        let slack = span * T::epsilon() * c(16.0);
        if !t_ds.is_finite() || t_ds < -slack || t_ds > span + slack {
            return Err(Error::Extrapolation { t: t_ds.as_f64(), span: span.as_f64() });
        }
        Ok(())
    }
}

/// Fits samples `(t_ds, z)` with a degree-`degree` polynomial. `window_ms` is
/// recorded on the model; `times_ds` must already be relative to its start.
pub fn fit_samples<T: Real>(times_ds: &[T], values: &[T], degree: usize, window_ms: (T, T)) -> Result<PolyModel<T>> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::Fit(format!("degree must be in 1..={MAX_DEGREE}, got {degree}")));
    }
    if !(window_ms.0 < window_ms.1) {
        return Err(Error::Fit(format!("degenerate window [{}, {}]", window_ms.0, window_ms.1)));
    }
    let n = times_ds.len();
    assert_eq!(n, values.len());
    if n < degree + 2 {
        return Err(Error::Fit(format!("{n} points cannot support a degree-{degree} fit (need {})", degree + 2)));
    }
    let cols = degree + 1;
    let mut design = Vec::with_capacity(n * cols);
    for &t in times_ds {
        let mut p = T::one();
        for _ in 0..cols {
            design.push(p);
            p *= t;
        }
    }
    let sol = least_squares(&design, n, cols, values)?;
    Ok(PolyModel {
        coefficients: sol.coefficients,
        window_ms,
        residual_rms: (sol.rss / T::from_usize_lossy(n)).sqrt(),
        n_points: n,
    })
}

/// Least-squares fit of Bark-converted F1 inside `window_ms` (inclusive).
pub fn fit_poly<T: Real>(track: &FormantTrack<T>, window_ms: (T, T), degree: usize) -> Result<PolyModel<T>> {
    fit_poly_channel(track, window_ms, degree, Channel::F1)
}

pub fn fit_poly_channel<T: Real>(
    track: &FormantTrack<T>,
    window_ms: (T, T),
    degree: usize,
    channel: Channel,
) -> Result<PolyModel<T>> {
    let (start, end) = window_ms;
    let mut ts = Vec::new();
    let mut zs = Vec::new();
    for fr in track.frames().iter().filter(|f| f.time_ms >= start && f.time_ms <= end) {
        if let Some(hz) = fr.get(channel) {
            ts.push((fr.time_ms - start) / c(MS_PER_DS));
            zs.push(hz_to_bark(hz)?);
        }
    }
    fit_samples(&ts, &zs, degree, window_ms)
}

/// `dZ/dt` in Bark per decisecond.
pub fn z_derivative<T: Real>(model: &PolyModel<T>, t_ds: T) -> Result<T> {
    model.check_inside(t_ds)?;
    Ok(model.nth_derivative(1, t_ds))
}

/// Angle of the trajectory at `t_ds`: the Δt → 0 limit, `arctan(dZ/dt)`.
pub fn instantaneous_theta<T: Real>(model: &PolyModel<T>, t_ds: T) -> Result<T> {
    Ok(z_derivative(model, t_ds)?.atan())
}

/// Finite-difference angle `arctan((Z(t+Δt) − Z(t)) / Δt)`.
pub fn instantaneous_theta_finite<T: Real>(model: &PolyModel<T>, t_ds: T, dt_ds: T) -> Result<T> {
    model.check_inside(t_ds)?;
    model.check_inside(t_ds + dt_ds)?;
    Ok(((model.eval(t_ds + dt_ds) - model.eval(t_ds)) / dt_ds).atan())
}

/// Second derivative of `Z`, the acceleration of tenseness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Acceleration<T> {
    /// Bark per decisecond².
    pub value: T,
    /// Set when the model degree is below 2; `value` is then zero.
    pub degenerate_degree: bool,
}

/// `d²Z/dt²`; for a cubic this is `6·c₃·t + 2·c₂`.
pub fn a_tense<T: Real>(model: &PolyModel<T>, t_ds: T) -> Result<Acceleration<T>> {
    model.check_inside(t_ds)?;
    if model.degree() < 2 {
        return Ok(Acceleration { value: T::zero(), degenerate_degree: true });
    }
    Ok(Acceleration { value: model.nth_derivative(2, t_ds), degenerate_degree: false })
}
