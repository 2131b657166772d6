use crate::error::{Error, Result};
use crate::ingest::{Channel, FormantTrack};
use crate::num::{c, Real};
use crate::scales::hz_to_bark;

use super::{sample_at, theta_f1_hz, theta_n, SegmentLabels, VowelSegment};

/// F1 of a uniform-tube neutral vocal tract.
pub const DEFAULT_F_NEU_HZ: f64 = 500.0;

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorConfig<T = f64> {
    pub f_neu_hz: T,
}

impl<T: Real> Default for IndicatorConfig<T> {
    fn default() -> Self {
        Self { f_neu_hz: c(DEFAULT_F_NEU_HZ) }
    }
}

/// Per-vowel tenseness indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct TensenessRecord<T = f64> {
    pub theta1_rad: T,
    pub theta_f1_rad: T,
    pub f1_33_hz: T,
    pub z1_33_bark: T,
    pub f0_33_hz: Option<T>,
    pub f0_66_hz: Option<T>,
    /// `F0_66 − F0_33`; present only when both landmarks carry pitch.
    pub delta_f0_hz: Option<T>,
    pub d_ds: T,
    /// `|F1_33 − F_neu|`.
    pub deviation_hz: T,
    pub labels: SegmentLabels,
}

/// Distance of F1 from the neutral position. Larger means relatively more tense.
pub fn deviation_index<T: Real>(f1_hz: T, f_neu_hz: T) -> T {
    (f1_hz - f_neu_hz).abs()
}

/// Assembles the indicator bundle for one vowel segment.
pub fn indicators<T: Real>(
    track: &FormantTrack<T>,
    seg: &VowelSegment<T>,
    config: &IndicatorConfig<T>,
) -> Result<TensenessRecord<T>> {
    if !(config.f_neu_hz > T::zero()) {
        return Err(Error::Config(format!("F_neu must be positive, got {}", config.f_neu_hz)));
    }
    let theta1 = theta_n(track, seg, 1)?;
    let theta_f1 = theta_f1_hz(track, seg)?;
    let f1_33 = sample_at(track, seg.t33_ms, Channel::F1)?
        .ok_or_else(|| Error::Indicator("F1 missing at the 33% landmark".into()))?;
    let f0_33 = sample_at(track, seg.t33_ms, Channel::F0)?;
    let f0_66 = sample_at(track, seg.t66_ms, Channel::F0)?;
    let delta_f0 = match (f0_33, f0_66) {
        (Some(a), Some(b)) => Some(b - a),
        _ => None,
    };
    Ok(TensenessRecord {
        theta1_rad: theta1,
        theta_f1_rad: theta_f1,
        f1_33_hz: f1_33,
        z1_33_bark: hz_to_bark(f1_33)?,
        f0_33_hz: f0_33,
        f0_66_hz: f0_66,
        delta_f0_hz: delta_f0,
        d_ds: seg.d_ds,
        deviation_hz: deviation_index(f1_33, config.f_neu_hz),
        labels: seg.labels.clone(),
    })
}
