//! Tenseness indicators over the 33–66 % window of a vowel.
//!
//! Times enter in milliseconds; slopes are expressed per decisecond, so the
//! window duration is `(t66 − t33) / 100`.

mod poly;
mod record;

pub use poly::{
    a_tense, fit_poly, fit_poly_channel, fit_samples, instantaneous_theta, instantaneous_theta_finite,
    z_derivative, Acceleration, PolyModel, MAX_DEGREE,
};
pub use record::{deviation_index, indicators, IndicatorConfig, TensenessRecord, DEFAULT_F_NEU_HZ};

use crate::error::{Error, Result};
use crate::ingest::{Channel, FormantTrack};
use crate::num::{c, Real};
use crate::scales::hz_to_bark;

pub const LANDMARK_START: f64 = 0.33;
pub const LANDMARK_END: f64 = 0.66;
/// Milliseconds per decisecond.
pub const MS_PER_DS: f64 = 100.0;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SegmentLabels {
    pub vowel: String,
    pub class: String,
    pub language: String,
    pub source: String,
}

/// A labelled vowel interval and its 33 % / 66 % landmarks.
#[derive(Debug, Clone, PartialEq)]
pub struct VowelSegment<T = f64> {
    pub onset_ms: T,
    pub offset_ms: T,
    pub t33_ms: T,
    pub t66_ms: T,
    /// Duration of the 33–66 % window in deciseconds.
    pub d_ds: T,
    pub labels: SegmentLabels,
}

impl<T: Real> VowelSegment<T> {
    pub fn with_labels(mut self, labels: SegmentLabels) -> Self {
        self.labels = labels;
        self
    }
}

/// Computes the 33 % and 66 % landmarks of `[onset, offset]`.
pub fn landmarks<T: Real>(onset_ms: T, offset_ms: T) -> Result<VowelSegment<T>> {
    if !onset_ms.is_finite() || !offset_ms.is_finite() || onset_ms >= offset_ms {
        return Err(Error::Domain(format!("onset {onset_ms} must precede offset {offset_ms}")));
    }
    let dur = offset_ms - onset_ms;
    let t33 = onset_ms + c::<T>(LANDMARK_START) * dur;
    let t66 = onset_ms + c::<T>(LANDMARK_END) * dur;
    let d_ds = (t66 - t33) / c(MS_PER_DS);
    if !(d_ds > T::zero()) {
        return Err(Error::Domain(format!("window [{onset_ms}, {offset_ms}] too short to resolve")));
    }
    Ok(VowelSegment { onset_ms, offset_ms, t33_ms: t33, t66_ms: t66, d_ds, labels: SegmentLabels::default() })
}

/// Linearly interpolates `channel` at `t_ms`. A missing neighbour yields `None`;
/// a time exactly on a frame returns that frame's value.
pub fn sample_at<T: Real>(track: &FormantTrack<T>, t_ms: T, channel: Channel) -> Result<Option<T>> {
    let frames = track.frames();
    if !(t_ms >= track.start_ms() && t_ms <= track.end_ms()) {
        return Err(Error::Domain(format!(
            "t = {t_ms} ms outside track span [{}, {}]",
            track.start_ms(),
            track.end_ms()
        )));
    }
    let hi = frames.partition_point(|f| f.time_ms < t_ms);
    if frames[hi].time_ms == t_ms {
        return Ok(frames[hi].get(channel));
    }
    let (a, b) = (&frames[hi - 1], &frames[hi]);
    match (a.get(channel), b.get(channel)) {
        (Some(va), Some(vb)) => {
            let w = (t_ms - a.time_ms) / (b.time_ms - a.time_ms);
            Ok(Some(va + (vb - va) * w))
        }
        _ => Ok(None),
    }
}

fn landmark_pair<T: Real>(track: &FormantTrack<T>, seg: &VowelSegment<T>, channel: Channel) -> Result<(T, T)> {
    let get = |t: T, tag: &str| -> Result<T> {
        sample_at(track, t, channel)?
            .ok_or_else(|| Error::Indicator(format!("{channel:?} missing at the {tag} landmark (t = {t} ms)")))
    };
    Ok((get(seg.t33_ms, "33%")?, get(seg.t66_ms, "66%")?))
}

/// Formant angle on the Bark scale: `arctan((Z66 − Z33) / d)`.
pub fn theta_n<T: Real>(track: &FormantTrack<T>, seg: &VowelSegment<T>, n: usize) -> Result<T> {
    let (f33, f66) = landmark_pair(track, seg, Channel::formant(n)?)?;
    let (z33, z66) = (hz_to_bark(f33)?, hz_to_bark(f66)?);
    Ok(((z66 - z33) / seg.d_ds).atan())
}

/// Hertz variant of the formant angle for F1: `arctan((F1_66 − F1_33) / d)`.
pub fn theta_f1_hz<T: Real>(track: &FormantTrack<T>, seg: &VowelSegment<T>) -> Result<T> {
    let (f33, f66) = landmark_pair(track, seg, Channel::F1)?;
    Ok(((f66 - f33) / seg.d_ds).atan())
}
