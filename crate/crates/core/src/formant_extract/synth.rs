//! Test-signal generators: cascaded-resonator vowels and sawtooth waves.

use crate::error::{Error, Result};
use crate::ingest::AudioBuffer;

/// Second-order digital resonator with unity gain at DC.
#[derive(Debug, Clone, Copy)]
struct Resonator {
    a: f64,
    b: f64,
    c: f64,
    y1: f64,
    y2: f64,
}

impl Resonator {
    fn new(freq_hz: f64, bandwidth_hz: f64, fs: f64) -> Self {
        let c = -(-2.0 * std::f64::consts::PI * bandwidth_hz / fs).exp();
        let b = 2.0 * (-std::f64::consts::PI * bandwidth_hz / fs).exp() * (std::f64::consts::TAU * freq_hz / fs).cos();
        Self { a: 1.0 - b - c, b, c, y1: 0.0, y2: 0.0 }
    }

    fn step(&mut self, x: f64) -> f64 {
        let y = self.a * x + self.b * self.y1 + self.c * self.y2;
        self.y2 = self.y1;
        self.y1 = y;
        y
    }
}

fn check(f0_hz: f64, sample_rate_hz: u32, duration_ms: f64) -> Result<usize> {
    if !(f0_hz > 0.0 && f0_hz.is_finite() && duration_ms > 0.0 && duration_ms.is_finite()) {
        return Err(Error::Config(format!("need positive f0 and duration, got {f0_hz} Hz, {duration_ms} ms")));
    }
    Ok((duration_ms * sample_rate_hz as f64 / 1000.0).round() as usize)
}

fn normalize(mut v: Vec<f64>, peak: f64) -> Vec<f64> {
    let m = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if m > 0.0 {
        v.iter_mut().for_each(|x| *x *= peak / m);
    }
    v
}

/// Impulse train at `f0_hz` through a glottal low-pass, a cascade of
/// `(frequency, bandwidth)` resonators and a first-difference radiation
/// filter, peak-normalized to 0.9.
pub fn resonator_vowel(formants: &[(f64, f64)], f0_hz: f64, sample_rate_hz: u32, duration_ms: f64) -> Result<AudioBuffer> {
    let n = check(f0_hz, sample_rate_hz, duration_ms)?;
    let fs = sample_rate_hz as f64;
    for &(f, bw) in formants {
        if !(f > 0.0 && f < fs / 2.0 && bw > 0.0) {
            return Err(Error::Config(format!("resonance ({f} Hz, {bw} Hz) outside (0, fs/2)")));
        }
    }
    let mut glottal = Resonator::new(0.0, 100.0, fs);
    let mut tract: Vec<Resonator> = formants.iter().map(|&(f, bw)| Resonator::new(f, bw, fs)).collect();
    let period = fs / f0_hz;
    let mut next_pulse = 0.0;
    let mut prev = 0.0;
    let out = (0..n)
        .map(|i| {
            let mut x = if i as f64 >= next_pulse {
                next_pulse += period;
                1.0
            } else {
                0.0
            };
            for r in std::iter::once(&mut glottal).chain(tract.iter_mut()) {
                x = r.step(x);
            }
            let y = x - prev;
            prev = x;
            y
        })
        .collect();
    AudioBuffer::new(normalize(out, 0.9), sample_rate_hz)
}

/// Rising sawtooth in `[-amplitude, amplitude)`.
pub fn sawtooth(f0_hz: f64, sample_rate_hz: u32, duration_ms: f64, amplitude: f64) -> Result<AudioBuffer> {
    let n = check(f0_hz, sample_rate_hz, duration_ms)?;
    if !(amplitude > 0.0 && amplitude <= 1.0) {
        return Err(Error::Config(format!("amplitude must lie in (0, 1], got {amplitude}")));
    }
    let fs = sample_rate_hz as f64;
    let samples = (0..n)
        .map(|i| {
            let phase = (i as f64 * f0_hz / fs).fract();
            amplitude * (2.0 * phase - 1.0)
        })
        .collect();
    AudioBuffer::new(samples, sample_rate_hz)
}
