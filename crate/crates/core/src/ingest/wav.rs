//! Minimal RIFF/WAVE reader for 16-bit PCM mono.

use crate::error::{Error, Result};
use crate::num::Real;

pub const MIN_SAMPLE_RATE: u32 = 8000;

const FORMAT_PCM: u16 = 1;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

/// Mono audio with samples in [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer<T = f64> {
    samples: Vec<T>,
    sample_rate_hz: u32,
}

impl<T: Real> AudioBuffer<T> {
    pub fn new(samples: Vec<T>, sample_rate_hz: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Format("audio buffer is empty".into()));
        }
        if sample_rate_hz < MIN_SAMPLE_RATE {
            return Err(Error::Format(format!(
                "sample rate {sample_rate_hz} Hz is below the supported minimum of {MIN_SAMPLE_RATE} Hz"
            )));
        }
        if let Some(s) = samples.iter().find(|s| !s.is_finite() || s.abs() > T::one()) {
            return Err(Error::Format(format!("sample {s} outside [-1, 1]")));
        }
        Ok(Self { samples, sample_rate_hz })
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_ms(&self) -> f64 {
        self.samples.len() as f64 * 1000.0 / self.sample_rate_hz as f64
    }
}

fn u16_at(b: &[u8], i: usize) -> u16 {
    u16::from_le_bytes([b[i], b[i + 1]])
}

fn u32_at(b: &[u8], i: usize) -> u32 {
    u32::from_le_bytes([b[i], b[i + 1], b[i + 2], b[i + 3]])
}

/// Decodes a RIFF/WAVE byte stream. Only PCM 16-bit mono is accepted;
/// samples are scaled by 1/32768.
pub fn read_wav<T: Real>(bytes: &[u8]) -> Result<AudioBuffer<T>> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::Format("not a RIFF/WAVE file".into()));
    }
    let mut pos = 12;
    let mut fmt: Option<(u16, u16, u32, u16)> = None;
    let mut data: Option<&[u8]> = None;

    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let body_end = body_start
            .checked_add(size)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| {
                Error::Format(format!(
                    "truncated `{}` chunk: declares {size} bytes, {} available",
                    String::from_utf8_lossy(id),
                    bytes.len() - body_start
                ))
            })?;
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(Error::Format("fmt chunk shorter than 16 bytes".into()));
                }
                let mut tag = u16_at(body, 0);
                if tag == FORMAT_EXTENSIBLE && body.len() >= 26 {
                    tag = u16_at(body, 24);
                }
                fmt = Some((tag, u16_at(body, 2), u32_at(body, 4), u16_at(body, 14)));
            }
            b"data" => data = Some(body),
            _ => {}
        }
        pos = body_end + (size & 1);
    }

    let (tag, channels, rate, bits) = fmt.ok_or_else(|| Error::Format("missing fmt chunk".into()))?;
    if tag != FORMAT_PCM {
        return Err(Error::Format(format!(
            "unsupported codec (format tag {tag}); convert to 16-bit PCM first"
        )));
    }
    if channels != 1 {
        return Err(Error::Format(format!(
            "{channels} channels; only mono is supported, mix down to one channel first"
        )));
    }
    if bits != 16 {
        return Err(Error::Format(format!("{bits}-bit samples; only 16-bit PCM is supported")));
    }
    let data = data.ok_or_else(|| Error::Format("missing data chunk".into()))?;
    if data.len() % 2 != 0 {
        return Err(Error::Format("data chunk has an odd byte count".into()));
    }
    let scale = T::lit(32768.0);
    let samples = data
        .chunks_exact(2)
        .map(|b| T::lit(i16::from_le_bytes([b[0], b[1]]) as f64) / scale)
        .collect();
    AudioBuffer::new(samples, rate)
}

/// Encodes samples as a 16-bit PCM mono WAV file (values clamped to the i16 range).
pub fn encode_wav_pcm16<T: Real>(samples: &[T], sample_rate_hz: u32) -> Vec<u8> {
    let data_len = (samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&sample_rate_hz.to_le_bytes());
    out.extend_from_slice(&(sample_rate_hz * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for s in samples {
        let v = (s.as_f64() * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}
