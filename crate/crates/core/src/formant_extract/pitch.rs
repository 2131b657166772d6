use crate::error::{Error, Result};
use crate::ingest::AudioBuffer;
use crate::num::Real;

use super::ExtractionConfig;

fn lag_band<T: Real>(config: &ExtractionConfig<T>, fs: u32, frame_len: usize) -> Result<(usize, usize)> {
    let fs_t = T::from_u32(fs).expect("u32 representable");
    let shortest = fs_t / config.f0_max_hz;
    let lo = shortest.ceil().to_usize().unwrap_or(0);
    if shortest < T::lit(2.0) {
        return Err(Error::Config(format!(
            "f0_max {} Hz at {fs} Hz leaves fewer than 2 samples per period",
            config.f0_max_hz
        )));
    }
    let hi = (fs_t / config.f0_min_hz).floor().to_usize().unwrap_or(usize::MAX).min(frame_len - 2);
    if hi <= lo {
        return Err(Error::Config(format!(
            "pitch lag band [{lo}, {hi}] is empty; lengthen frames or raise f0_min"
        )));
    }
    Ok((lo, hi))
}

/// Autocorrelation pitch per analysis frame, on the same grid as the
/// formant tracker. Unvoiced frames carry `None`.
pub fn estimate_f0<T: Real>(audio: &AudioBuffer<T>, config: &ExtractionConfig<T>) -> Result<Vec<(T, Option<T>)>> {
    let fs = audio.sample_rate_hz();
    let framing = config.framing(fs)?;
    let (lo, hi) = lag_band(config, fs, framing.frame_len)?;
    let fs_t = T::from_u32(fs).expect("u32 representable");
    let x = audio.samples();
    let mut out = Vec::with_capacity(framing.count(x.len()));
    let mut block = vec![T::zero(); framing.frame_len];
    for i in 0..framing.count(x.len()) {
        let start = framing.start(i);
        block.copy_from_slice(&x[start..start + framing.frame_len]);
        let m = block.iter().copied().sum::<T>() / T::from_usize_lossy(block.len());
        block.iter_mut().for_each(|v| *v -= m);
        out.push((framing.center_ms::<T>(i, fs), frame_f0(&block, lo, hi, fs_t, config.voicing_threshold)));
    }
    Ok(out)
}

fn frame_f0<T: Real>(x: &[T], lo: usize, hi: usize, fs: T, threshold: T) -> Option<T> {
    let acf = |lag: usize| -> T { x[lag..].iter().zip(x).map(|(a, b)| *a * *b).sum() };
    let r0 = acf(0);
    if r0 <= T::min_positive_value() {
        return None;
    }
    let r: Vec<T> = ((lo - 1)..=(hi + 1)).map(|lag| acf(lag) / r0).collect();
    // r[k] holds lag lo - 1 + k.
    let (mut best, mut best_v) = (0, T::neg_infinity());
    for (k, &v) in r.iter().enumerate().take(r.len() - 1).skip(1) {
        if v > best_v {
            best = k;
            best_v = v;
        }
    }
    if best_v < threshold || r[best - 1] > best_v || r[best + 1] > best_v {
        return None;
    }
    let (a, b, g) = (r[best - 1], best_v, r[best + 1]);
    let denom = a - b - b + g;
    let shift = if denom < T::zero() { T::lit(0.5) * (a - g) / denom } else { T::zero() };
    let lag = T::from_usize_lossy(lo - 1 + best) + shift;
    Some(fs / lag)
}
