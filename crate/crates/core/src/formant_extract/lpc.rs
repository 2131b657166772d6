use crate::error::{Error, Result};
use crate::linalg::monic_roots;
use crate::num::{c, Real};

use super::ExtractionConfig;

/// All-pole model `x[n] ≈ Σ a_k·x[n−k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpcModel<T = f64> {
    /// `a_1..a_p`.
    pub coefficients: Vec<T>,
    /// Square root of the final prediction-error power.
    pub gain: T,
    /// Zero-lag autocorrelation of the analysed frame.
    pub energy: T,
}

impl<T: Real> LpcModel<T> {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// Frame energy over residual energy; about 1 for unpredictable input.
    pub fn prediction_gain(&self) -> T {
        self.energy / (self.gain * self.gain)
    }

    /// `1 / |A(e^{jω})|` at `freq_hz`, with `A(z) = 1 − Σ a_k z^{−k}`.
    pub fn envelope(&self, freq_hz: T, sample_rate_hz: T) -> T {
        let w = T::TAU() * freq_hz / sample_rate_hz;
        let (mut re, mut im) = (T::one(), T::zero());
        for (k, a) in self.coefficients.iter().enumerate() {
            let ang = w * T::from_usize_lossy(k + 1);
            re -= *a * ang.cos();
            im += *a * ang.sin();
        }
        T::one() / (re * re + im * im).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormantCandidate<T = f64> {
    pub frequency_hz: T,
    pub bandwidth_hz: T,
}

/// Levinson-Durbin on the biased autocorrelation of `frame`.
///
/// Returns `Ok(None)` for a zero-energy frame.
pub fn lpc_coefficients<T: Real>(frame: &[T], order: usize) -> Result<Option<LpcModel<T>>> {
    if order < 2 {
        return Err(Error::Config(format!("LPC order must be >= 2, got {order}")));
    }
    if frame.len() <= order {
        return Err(Error::Config(format!("frame of {} samples is too short for order {order}", frame.len())));
    }
    if frame.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite sample in LPC frame".into()));
    }
    let r: Vec<T> = (0..=order)
        .map(|lag| frame[lag..].iter().zip(frame).map(|(a, b)| *a * *b).sum())
        .collect();
    if r[0] <= T::min_positive_value() {
        return Ok(None);
    }
    let limit = T::one() - c::<T>(2.0) * T::epsilon().sqrt();
    let mut a = vec![T::zero(); order];
    let mut prev = vec![T::zero(); order];
    let mut err = r[0];
    for i in 0..order {
        let mut acc = r[i + 1];
        for j in 0..i {
            acc -= a[j] * r[i - j];
        }
        let k = (acc / err).max(-limit).min(limit);
        prev[..i].copy_from_slice(&a[..i]);
        a[i] = k;
        for j in 0..i {
            a[j] = prev[j] - k * prev[i - 1 - j];
        }
        err *= T::one() - k * k;
    }
    Ok(Some(LpcModel { coefficients: a, gain: err.max(T::zero()).sqrt(), energy: r[0] }))
}

/// Resonances of the model, ascending by frequency, filtered by the
/// configured ceiling and bandwidth cut.
pub fn formants_from_lpc<T: Real>(
    model: &LpcModel<T>,
    sample_rate_hz: T,
    config: &ExtractionConfig<T>,
) -> Result<Vec<FormantCandidate<T>>> {
    let tail: Vec<T> = model.coefficients.iter().map(|a| -*a).collect();
    let roots = monic_roots(&tail)?;
    let mut out: Vec<FormantCandidate<T>> = roots
        .into_iter()
        .filter(|(_, im)| *im > T::zero())
        .map(|(re, im)| {
            let radius = (re * re + im * im).sqrt();
            FormantCandidate {
                frequency_hz: im.atan2(re) * sample_rate_hz / T::TAU(),
                bandwidth_hz: -radius.ln() * sample_rate_hz / T::PI(),
            }
        })
        .filter(|f| {
            f.frequency_hz > c(50.0) && f.frequency_hz < config.max_formant_hz && f.bandwidth_hz < config.bandwidth_max_hz
        })
        .collect();
    out.sort_by(|a, b| a.frequency_hz.partial_cmp(&b.frequency_hz).expect("finite roots"));
    Ok(out)
}
