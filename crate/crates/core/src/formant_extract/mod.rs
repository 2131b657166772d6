//! Formant and F0 estimation from audio.
//!
//! Per-frame analysis only: Hamming window, pre-emphasis, autocorrelation
//! LPC, polynomial roots. There is no inter-frame continuity tracking.

mod lpc;
mod pitch;
pub mod synth;

pub use lpc::{formants_from_lpc, lpc_coefficients, FormantCandidate, LpcModel};
pub use pitch::estimate_f0;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{AudioBuffer, Channel, FormantTrack, Frame};
use crate::num::{c, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractionConfig<T: Real = f64> {
    pub frame_ms: T,
    pub hop_ms: T,
    pub preemphasis: T,
    /// `None` selects `2 + round(fs / 1000)`.
    pub lpc_order: Option<usize>,
    pub max_formant_hz: T,
    pub bandwidth_max_hz: T,
    pub f0_min_hz: T,
    pub f0_max_hz: T,
    /// Minimum normalized autocorrelation peak for a voiced frame.
    pub voicing_threshold: T,
}

impl<T: Real> Default for ExtractionConfig<T> {
    fn default() -> Self {
        Self {
            frame_ms: c(25.0),
            hop_ms: c(10.0),
            preemphasis: c(0.97),
            lpc_order: None,
            max_formant_hz: c(5500.0),
            bandwidth_max_hz: c(400.0),
            f0_min_hz: c(60.0),
            f0_max_hz: c(400.0),
            voicing_threshold: c(0.3),
        }
    }
}

/// Frame geometry in samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Framing {
    pub frame_len: usize,
    pub hop: usize,
}

impl<T: Real> ExtractionConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let finite = [
            self.frame_ms,
            self.hop_ms,
            self.preemphasis,
            self.max_formant_hz,
            self.bandwidth_max_hz,
            self.f0_min_hz,
            self.f0_max_hz,
            self.voicing_threshold,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad("extraction parameters must be finite".into());
        }
        if !(self.hop_ms > T::zero() && self.frame_ms > self.hop_ms) {
            return bad(format!("need frame_ms > hop_ms > 0 (got {} and {})", self.frame_ms, self.hop_ms));
        }
        if !(self.preemphasis >= T::zero() && self.preemphasis < T::one()) {
            return bad(format!("preemphasis must lie in [0, 1), got {}", self.preemphasis));
        }
        if let Some(p) = self.lpc_order {
            if p < 2 {
                return bad(format!("lpc_order must be >= 2, got {p}"));
            }
        }
        if !(self.max_formant_hz > T::zero() && self.bandwidth_max_hz > T::zero()) {
            return bad("max_formant_hz and bandwidth_max_hz must be positive".into());
        }
        if !(self.f0_min_hz > T::zero() && self.f0_min_hz < self.f0_max_hz) {
            return bad(format!("need 0 < f0_min_hz < f0_max_hz (got {} and {})", self.f0_min_hz, self.f0_max_hz));
        }
        if !(self.voicing_threshold > T::zero() && self.voicing_threshold < T::one()) {
            return bad(format!("voicing_threshold must lie in (0, 1), got {}", self.voicing_threshold));
        }
        Ok(())
    }

    pub fn order_for(&self, sample_rate_hz: u32) -> usize {
        self.lpc_order.unwrap_or(2 + (sample_rate_hz as f64 / 1000.0).round() as usize)
    }

    pub fn framing(&self, sample_rate_hz: u32) -> Result<Framing> {
        self.validate()?;
        let fs = T::from_u32(sample_rate_hz).expect("u32 representable");
        let to_samples = |ms: T| (ms * fs / c(1000.0)).round().to_usize().unwrap_or(0);
        let (frame_len, hop) = (to_samples(self.frame_ms), to_samples(self.hop_ms));
        let order = self.order_for(sample_rate_hz);
        if hop == 0 || frame_len <= order {
            return Err(Error::Config(format!(
                "{} ms frames at {sample_rate_hz} Hz give {frame_len} samples (hop {hop}), too short for order {order}",
                self.frame_ms
            )));
        }
        Ok(Framing { frame_len, hop })
    }
}

impl Framing {
    /// `⌊(n − frame_len) / hop⌋ + 1` frames, or none when the signal is shorter than one frame.
    pub fn count(&self, n_samples: usize) -> usize {
        if n_samples < self.frame_len {
            0
        } else {
            (n_samples - self.frame_len) / self.hop + 1
        }
    }

    pub fn start(&self, index: usize) -> usize {
        index * self.hop
    }

    /// Window-center time of frame `index`, in ms.
    pub fn center_ms<T: Real>(&self, index: usize, sample_rate_hz: u32) -> T {
        let centre = self.start(index) as f64 + self.frame_len as f64 / 2.0;
        T::lit(centre * 1000.0 / sample_rate_hz as f64)
    }
}

pub fn hamming<T: Real>(n: usize) -> Vec<T> {
    if n == 1 {
        return vec![T::one()];
    }
    let denom = T::from_usize_lossy(n - 1);
    (0..n)
        .map(|i| c::<T>(0.54) - c::<T>(0.46) * (T::TAU() * T::from_usize_lossy(i) / denom).cos())
        .collect()
}

fn preemphasize<T: Real>(x: &[T], alpha: T) -> Vec<T> {
    let mut out = Vec::with_capacity(x.len());
    let mut prev = T::zero();
    for &v in x {
        out.push(v - alpha * prev);
        prev = v;
    }
    out
}

fn frame_count_checked(n: usize, framing: Framing) -> Result<usize> {
    match framing.count(n) {
        k if k >= 2 => Ok(k),
        k => Err(Error::Extraction(format!(
            "{n} samples yield {k} analysis frame(s) of {} samples; at least 2 are needed",
            framing.frame_len
        ))),
    }
}

/// Per-hop F1..F3 estimates. Frames whose analysis fails or finds too few
/// candidates carry missing values.
pub fn track_formants<T: Real>(audio: &AudioBuffer<T>, config: &ExtractionConfig<T>) -> Result<FormantTrack<T>> {
    let fs = audio.sample_rate_hz();
    let framing = config.framing(fs)?;
    let n_frames = frame_count_checked(audio.len(), framing)?;
    let order = config.order_for(fs);
    let window = hamming::<T>(framing.frame_len);
    let emphasized = preemphasize(audio.samples(), config.preemphasis);
    let fs_t = T::from_u32(fs).expect("u32 representable");

    let mut frames = Vec::with_capacity(n_frames);
    let mut block = vec![T::zero(); framing.frame_len];
    for i in 0..n_frames {
        let start = framing.start(i);
        for (k, slot) in block.iter_mut().enumerate() {
            *slot = emphasized[start + k] * window[k];
        }
        let mut frame = Frame::new(framing.center_ms::<T>(i, fs));
        if let Ok(Some(model)) = lpc_coefficients(&block, order) {
            if let Ok(cands) = formants_from_lpc(&model, fs_t, config) {
                let mut last = T::zero();
                let mut n = 1;
                for cand in cands {
                    if n > 3 {
                        break;
                    }
                    if cand.frequency_hz > last {
                        frame.set(Channel::formant(n).expect("1..=3"), Some(cand.frequency_hz));
                        last = cand.frequency_hz;
                        n += 1;
                    }
                }
            }
        }
        frames.push(frame);
    }
    FormantTrack::new(frames, "audio")
}

/// Formants and F0 on the shared frame grid.
pub fn track_formants_with_f0<T: Real>(audio: &AudioBuffer<T>, config: &ExtractionConfig<T>) -> Result<FormantTrack<T>> {
    let track = track_formants(audio, config)?;
    let f0 = estimate_f0(audio, config)?;
    let frames = track
        .frames()
        .iter()
        .zip(&f0)
        .map(|(fr, (_, f))| Frame { f0_hz: *f, ..*fr })
        .collect();
    FormantTrack::new(frames, track.source_id())
}
