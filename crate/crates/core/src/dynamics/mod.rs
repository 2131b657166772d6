//! Force of tenseness, Helmholtz resonance, and the mass-point simulators.
//!
//! The force law is `F = m·k·a`, where `a = d²Z/dt²` is the Bark-space
//! acceleration of the first formant and `k` maps Bark to displacement.
//! Units are relative; `m = k = 1` unless a caller says otherwise.

mod sim;

pub use sim::{
    add_bark_noise, oscillator_energy, simulate_x, simulate_y_oscillator, synth_track, OscillatorParams,
    SimState, XSample, YSample,
};

use crate::error::{Error, Result};
use crate::num::{c, Real};
use crate::tenseness::{a_tense, PolyModel};

/// Speed of sound in moist air at body temperature, cm/s.
pub const DEFAULT_SPEED_OF_SOUND: f64 = 35000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceConstants<T = f64> {
    pub mass_m: T,
    pub coeff_k: T,
}

impl<T: Real> ForceConstants<T> {
    pub fn new(mass_m: T, coeff_k: T) -> Result<Self> {
        for (name, v) in [("mass m", mass_m), ("coefficient k", coeff_k)] {
            if !v.is_finite() || v <= T::zero() {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self { mass_m, coeff_k })
    }

    pub fn unit() -> Self {
        Self { mass_m: T::one(), coeff_k: T::one() }
    }
}

/// `m · k · a_tense`.
pub fn f_tense<T: Real>(constants: &ForceConstants<T>, a_tense_value: T) -> T {
    constants.mass_m * constants.coeff_k * a_tense_value
}

/// Sampled acceleration and force over a fit window.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceProfile<T = f64> {
    /// Deciseconds from the window start.
    pub times_ds: Vec<T>,
    pub a_tense: Vec<T>,
    pub f_tense: Vec<T>,
    pub constants: ForceConstants<T>,
    pub degree: usize,
    /// Model degree < 2: the profile is identically zero.
    pub degenerate_degree: bool,
}

impl<T: Real> ForceProfile<T> {
    pub fn mean_abs_force(&self) -> T {
        let n = T::from_usize_lossy(self.f_tense.len());
        self.f_tense.iter().map(|f| f.abs()).sum::<T>() / n
    }
}

/// Evaluates `a_tense` and `F_tense` on `n_samples` evenly spaced points
/// covering the model window, endpoints included.
pub fn force_profile<T: Real>(
    model: &PolyModel<T>,
    constants: &ForceConstants<T>,
    n_samples: usize,
) -> Result<ForceProfile<T>> {
    if n_samples < 2 {
        return Err(Error::Config(format!("need at least 2 samples, got {n_samples}")));
    }
    let span = model.span_ds();
    let last = T::from_usize_lossy(n_samples - 1);
    let mut times = Vec::with_capacity(n_samples);
    let mut accel = Vec::with_capacity(n_samples);
    let mut force = Vec::with_capacity(n_samples);
    let mut degenerate = false;
    for i in 0..n_samples {
        let t = if i == n_samples - 1 { span } else { span * T::from_usize_lossy(i) / last };
        let a = a_tense(model, t)?;
        degenerate |= a.degenerate_degree;
        times.push(t);
        accel.push(a.value);
        force.push(f_tense(constants, a.value));
    }
    Ok(ForceProfile {
        times_ds: times,
        a_tense: accel,
        f_tense: force,
        constants: *constants,
        degree: model.degree(),
        degenerate_degree: degenerate,
    })
}

/// Oral cavity (back volume) plus constriction (neck) geometry, CGS units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry<T = f64> {
    pub speed_of_sound: T,
    pub area_constriction: T,
    pub area_back: T,
    pub len_back: T,
    pub len_constriction: T,
    pub diam_constriction: Option<T>,
    pub diam_back: Option<T>,
}

impl<T: Real> CavityGeometry<T> {
    pub fn from_areas(speed_of_sound: T, area_constriction: T, area_back: T, len_back: T, len_constriction: T) -> Self {
        Self {
            speed_of_sound,
            area_constriction,
            area_back,
            len_back,
            len_constriction,
            diam_constriction: None,
            diam_back: None,
        }
    }

    /// Circular cross-sections: `A = π (d/2)²`.
    pub fn from_diameters(speed_of_sound: T, diam_constriction: T, diam_back: T, len_back: T, len_constriction: T) -> Self {
        let area = |d: T| T::PI() * (d / c(2.0)).powi(2);
        Self {
            speed_of_sound,
            area_constriction: area(diam_constriction),
            area_back: area(diam_back),
            len_back,
            len_constriction,
            diam_constriction: Some(diam_constriction),
            diam_back: Some(diam_back),
        }
    }

    fn validate(&self) -> Result<()> {
        let fields = [
            ("speed of sound", self.speed_of_sound),
            ("constriction area", self.area_constriction),
            ("back area", self.area_back),
            ("back length", self.len_back),
            ("constriction length", self.len_constriction),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= T::zero() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, d, a) in [
            ("constriction", self.diam_constriction, self.area_constriction),
            ("back", self.diam_back, self.area_back),
        ] {
            if let Some(d) = d {
                if !(d > T::zero()) {
                    return Err(Error::Domain(format!("{name} diameter must be positive, got {d}")));
                }
                let implied = T::PI() * (d / c(2.0)).powi(2);
                if ((implied - a) / a).abs() > c(1e-9) {
                    return Err(Error::Domain(format!(
                        "{name} diameter {d} implies area {implied}, inconsistent with {a}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Helmholtz resonance `(c / 2π) · √(A_c / (A_b · l_b · l_c))` in Hz.
pub fn helmholtz_frequency<T: Real>(g: &CavityGeometry<T>) -> Result<T> {
    g.validate()?;
    Ok(g.speed_of_sound / (c::<T>(2.0) * T::PI())
        * (g.area_constriction / (g.area_back * g.len_back * g.len_constriction)).sqrt())
}

/// Diameter form `d · c / (2π D √(l_b · l_c))`.
pub fn helmholtz_frequency_diameters<T: Real>(
    speed_of_sound: T,
    diam_constriction: T,
    diam_back: T,
    len_back: T,
    len_constriction: T,
) -> Result<T> {
    CavityGeometry::from_diameters(speed_of_sound, diam_constriction, diam_back, len_back, len_constriction).validate()?;
    Ok(diam_constriction * speed_of_sound
        / (c::<T>(2.0) * T::PI() * diam_back * (len_back * len_constriction).sqrt()))
}
