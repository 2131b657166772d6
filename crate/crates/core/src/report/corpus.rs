//! The bundled 12-fixture synthetic corpus: 2 sources × {tense, lax} × 3,
//! F1 tracks with known trajectory sign and a linear F0 contour.

use std::fs;
use std::path::{Path, PathBuf};

use crate::dynamics::synth_track;
use crate::error::Result;
use crate::ingest::{FormantTrack, Frame, MANIFEST_HEADER};

pub const DURATION_MS: f64 = 200.0;
pub const FRAME_STEP_MS: f64 = 5.0;
pub const ONSET_MS: f64 = 20.0;
pub const OFFSET_MS: f64 = 180.0;

struct Fixture {
    source: &'static str,
    class: &'static str,
    vowel: &'static str,
    index: usize,
    z_start: f64,
    zslope: f64,
    accel: f64,
    f0_start: f64,
    f0_end: f64,
}

fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for (s, source) in ["synth_a", "synth_b"].into_iter().enumerate() {
        let so = s as f64;
        for i in 0..3 {
            let k = i as f64;
            out.push(Fixture {
                source,
                class: "tense",
                vowel: "i:",
                index: i,
                z_start: 3.6 + 0.1 * k + 0.15 * so,
                zslope: -(0.9 + 0.15 * k + 0.05 * so),
                accel: 0.4 + 0.2 * k,
                f0_start: 130.0 + 4.0 * k + 10.0 * so,
                f0_end: 118.0 + 3.0 * k + 10.0 * so,
            });
            out.push(Fixture {
                source,
                class: "lax",
                vowel: "ɪ",
                index: i,
                z_start: 3.0 + 0.1 * k + 0.1 * so,
                zslope: 0.5 + 0.1 * k + 0.05 * so,
                accel: -0.3 - 0.1 * k,
                f0_start: 120.0 + 2.0 * k + 10.0 * so,
                f0_end: 124.0 + 5.0 * k + 10.0 * so,
            });
        }
    }
    out
}

fn build(fx: &Fixture) -> Result<FormantTrack> {
    let a = fx.accel;
    let base = synth_track(|_| a, fx.z_start, fx.zslope, DURATION_MS, FRAME_STEP_MS)?;
    let frames = base
        .frames()
        .iter()
        .map(|fr| {
            let u = fr.time_ms / DURATION_MS;
            Frame { f0_hz: Some(fx.f0_start + (fx.f0_end - fx.f0_start) * u), ..*fr }
        })
        .collect();
    FormantTrack::new(frames, "synthetic")
}

/// Relative path and contents of every corpus file, manifest first.
pub fn synthetic_corpus() -> Result<Vec<(PathBuf, String)>> {
    let mut manifest = MANIFEST_HEADER.join(",");
    manifest.push('\n');
    let mut files = Vec::new();
    for fx in fixtures() {
        let rel = format!("tracks/{}_{}_{}.csv", fx.source, fx.class, fx.index);
        manifest.push_str(&format!("{rel},{},{},en,{},{ONSET_MS},{OFFSET_MS}\n", fx.vowel, fx.class, fx.source));
        files.push((PathBuf::from(rel), build(&fx)?.to_csv()));
    }
    files.insert(0, (PathBuf::from("manifest.csv"), manifest));
    Ok(files)
}

/// Writes the corpus under `dir` and returns the manifest path.
pub fn write_synthetic_corpus(dir: &Path) -> Result<PathBuf> {
    for (rel, text) in synthetic_corpus()? {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, text)?;
    }
    Ok(dir.join("manifest.csv"))
}
