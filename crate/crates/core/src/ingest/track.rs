use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::num::{fmt_g17, Real};

pub const TRACK_HEADER: [&str; 5] = ["time_ms", "f1_hz", "f2_hz", "f3_hz", "f0_hz"];

/// Which value of a frame to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    F1,
    F2,
    F3,
    F0,
}

impl Channel {
    /// Formant channel for `n` in 1..=3.
    pub fn formant(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Channel::F1),
            2 => Ok(Channel::F2),
            3 => Ok(Channel::F3),
            _ => Err(Error::Domain(format!("formant index must be 1..=3, got {n}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Frame<T = f64> {
    pub time_ms: T,
    pub f1_hz: Option<T>,
    pub f2_hz: Option<T>,
    pub f3_hz: Option<T>,
    pub f0_hz: Option<T>,
}

impl<T: Real> Frame<T> {
    pub fn new(time_ms: T) -> Self {
        Self { time_ms, f1_hz: None, f2_hz: None, f3_hz: None, f0_hz: None }
    }

    pub fn get(&self, channel: Channel) -> Option<T> {
        match channel {
            Channel::F1 => self.f1_hz,
            Channel::F2 => self.f2_hz,
            Channel::F3 => self.f3_hz,
            Channel::F0 => self.f0_hz,
        }
    }

    pub fn set(&mut self, channel: Channel, value: Option<T>) {
        let slot = match channel {
            Channel::F1 => &mut self.f1_hz,
            Channel::F2 => &mut self.f2_hz,
            Channel::F3 => &mut self.f3_hz,
            Channel::F0 => &mut self.f0_hz,
        };
        *slot = value;
    }
}

/// Time-stamped formant (and optional F0) frames.
///
/// Invariants: at least two frames, strictly increasing times, and every
/// present frequency positive and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FormantTrack<T = f64> {
    frames: Vec<Frame<T>>,
    source_id: String,
}

impl<T: Real> FormantTrack<T> {
    pub fn new(frames: Vec<Frame<T>>, source_id: impl Into<String>) -> Result<Self> {
        if frames.len() < 2 {
            return Err(Error::Domain(format!(
                "a track needs at least 2 frames, got {}",
                frames.len()
            )));
        }
        for (i, fr) in frames.iter().enumerate() {
            validate_frame(fr).map_err(|msg| Error::Domain(format!("frame {i}: {msg}")))?;
            if i > 0 && fr.time_ms <= frames[i - 1].time_ms {
                return Err(Error::Domain(format!(
                    "frame {i}: time {} not after {}",
                    fr.time_ms,
                    frames[i - 1].time_ms
                )));
            }
        }
        Ok(Self { frames, source_id: source_id.into() })
    }

    pub fn frames(&self) -> &[Frame<T>] {
        &self.frames
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn start_ms(&self) -> T {
        self.frames[0].time_ms
    }

    pub fn end_ms(&self) -> T {
        self.frames[self.frames.len() - 1].time_ms
    }

    /// Returns a copy with every timestamp shifted by `offset_ms`.
    pub fn shifted(&self, offset_ms: T) -> Result<Self> {
        let frames = self
            .frames
            .iter()
            .map(|f| Frame { time_ms: f.time_ms + offset_ms, ..*f })
            .collect();
        Self::new(frames, self.source_id.clone())
    }

    /// Replaces the F0 channel by sampling `pitch` (time, f0) at each frame time.
    /// Pitch frames are matched by nearest time within half a hop.
    pub fn with_f0(mut self, pitch: &[(T, Option<T>)]) -> Self {
        for fr in &mut self.frames {
            fr.f0_hz = nearest(pitch, fr.time_ms);
        }
        self
    }

    /// Serializes to the track CSV format with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = TRACK_HEADER.join(",");
        out.push('\n');
        for fr in &self.frames {
            let _ = write!(out, "{}", fmt_num(fr.time_ms));
            for ch in [Channel::F1, Channel::F2, Channel::F3, Channel::F0] {
                out.push(',');
                if let Some(v) = fr.get(ch) {
                    out.push_str(&fmt_num(v));
                }
            }
            out.push('\n');
        }
        out
    }
}

fn nearest<T: Real>(pitch: &[(T, Option<T>)], t: T) -> Option<T> {
    let idx = pitch.partition_point(|(pt, _)| *pt < t);
    let mut best: Option<(T, Option<T>)> = None;
    for j in [idx.wrapping_sub(1), idx] {
        if let Some(&(pt, v)) = pitch.get(j) {
            let dist = (pt - t).abs();
            if best.is_none_or(|(d, _)| dist < d) {
                best = Some((dist, v));
            }
        }
    }
    best.and_then(|(_, v)| v)
}

fn fmt_num<T: Real>(v: T) -> String {
    fmt_g17(v.as_f64())
}

fn validate_frame<T: Real>(fr: &Frame<T>) -> std::result::Result<(), String> {
    if !fr.time_ms.is_finite() {
        return Err("non-finite time".into());
    }
    for ch in [Channel::F1, Channel::F2, Channel::F3, Channel::F0] {
        if let Some(v) = fr.get(ch) {
            if !v.is_finite() || v <= T::zero() {
                return Err(format!("{ch:?} must be positive and finite, got {v}"));
            }
        }
    }
    Ok(())
}

/// Parses the `time_ms,f1_hz,f2_hz,f3_hz,f0_hz` track format.
///
/// Empty cells are missing values. Columns after the fifth are ignored so
/// that simulator output with extra state columns stays readable.
pub fn parse_track_csv<T: Real>(text: &str) -> Result<FormantTrack<T>> {
    parse_track_csv_named(text, "")
}

pub(crate) fn parse_track_csv_named<T: Real>(text: &str, source_id: &str) -> Result<FormantTrack<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut frames: Vec<Frame<T>> = Vec::new();
    let mut header_seen = false;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if !header_seen {
            let cols: Vec<&str> = rec.iter().map(str::trim).collect();
            if cols.len() < TRACK_HEADER.len() || cols[..TRACK_HEADER.len()] != TRACK_HEADER {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected header `{}`", TRACK_HEADER.join(",")),
                });
            }
            header_seen = true;
            continue;
        }
        if rec.len() < TRACK_HEADER.len() {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} fields, found {}", TRACK_HEADER.len(), rec.len()),
            });
        }
        let cell = |i: usize| -> Result<Option<T>> {
            let raw = rec[i].trim();
            if raw.is_empty() {
                return Ok(None);
            }
            let v: f64 = raw.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("malformed number `{raw}` in column {}", TRACK_HEADER[i]),
            })?;
            Ok(Some(T::lit(v)))
        };
        let time_ms = cell(0)?.ok_or_else(|| Error::Parse { line, msg: "missing time_ms".into() })?;
        let frame = Frame { time_ms, f1_hz: cell(1)?, f2_hz: cell(2)?, f3_hz: cell(3)?, f0_hz: cell(4)? };
        validate_frame(&frame).map_err(|msg| Error::Parse { line, msg })?;
        if let Some(prev) = frames.last() {
            if frame.time_ms <= prev.time_ms {
                return Err(Error::Parse {
                    line,
                    msg: format!("time {} is not after previous time {}", frame.time_ms, prev.time_ms),
                });
            }
        }
        frames.push(frame);
    }
    if !header_seen {
        return Err(Error::Parse { line: 1, msg: "empty input".into() });
    }
    if frames.len() < 2 {
        return Err(Error::Parse {
            line: frames.len() + 1,
            msg: format!("a track needs at least 2 rows, found {}", frames.len()),
        });
    }
    FormantTrack::new(frames, source_id)
}
