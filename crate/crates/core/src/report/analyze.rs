use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::records::{records_json, write_records_csv, RecordRow};
use super::RunConfig;
use crate::error::{Error, Result};
use crate::formant_extract::{track_formants_with_f0, ExtractionConfig};
use crate::ingest::{parse_manifest, parse_track_csv_named, parse_praat_formant, read_wav, CorpusManifest, FormantTrack, ManifestEntry};
use crate::tenseness::{indicators, landmarks, SegmentLabels};

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOutcome {
    pub rows: Vec<RecordRow>,
    pub config_hash: String,
    /// Files written by [`run_analyze`]; empty for [`analyze_manifest`].
    pub written: Vec<PathBuf>,
}

impl AnalyzeOutcome {
    pub fn error_count(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_ok()).count()
    }
}

/// Reads a track by extension: `.wav` is analysed, `.csv` is a track
/// table, anything else is tried as a Praat Formant text file.
pub fn load_track(path: &Path, extraction: &ExtractionConfig) -> Result<FormantTrack> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    let name = path.display().to_string();
    let read_err = |e: std::io::Error| Error::Io(format!("{name}: {e}"));
    match ext.as_str() {
        "wav" => {
            let audio = read_wav(&fs::read(path).map_err(read_err)?)?;
            track_formants_with_f0(&audio, extraction)
        }
        "csv" => parse_track_csv_named(&fs::read_to_string(path).map_err(read_err)?, &name),
        _ => parse_praat_formant(&fs::read_to_string(path).map_err(read_err)?),
    }
}

fn analyze_entry(entry: &ManifestEntry, base_dir: &Path, config: &RunConfig) -> Result<crate::tenseness::TensenessRecord> {
    let track = load_track(&base_dir.join(&entry.path), &config.extraction)?;
    let labels = SegmentLabels {
        vowel: entry.vowel_label.clone(),
        class: entry.class_label.clone(),
        language: entry.language.clone(),
        source: entry.source.clone(),
    };
    let seg = landmarks(entry.onset_ms, entry.offset_ms)?.with_labels(labels);
    indicators(&track, &seg, &config.indicator_config())
}

/// One row per manifest entry, in manifest order. Entry failures become
/// error rows; paths resolve against `base_dir`.
pub fn analyze_manifest(manifest: &CorpusManifest, base_dir: &Path, config: &RunConfig) -> Result<AnalyzeOutcome> {
    config.validate()?;
    let hash = config.hash();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        manifest
            .entries
            .par_iter()
            .map(|e| match analyze_entry(e, base_dir, config) {
                Ok(rec) => RecordRow::from_record(e, &rec, &hash),
                Err(err) => RecordRow::from_error(e, &err, &hash),
            })
            .collect()
    });
    Ok(AnalyzeOutcome { rows, config_hash: hash, written: vec![] })
}

/// Analyses the manifest at `manifest_path` and writes `records.csv` and
/// `records.json` into `config.output_dir`.
pub fn run_analyze(manifest_path: &Path, config: &RunConfig) -> Result<AnalyzeOutcome> {
    let text = fs::read_to_string(manifest_path)
        .map_err(|e| Error::Io(format!("{}: {e}", manifest_path.display())))?;
    let manifest = parse_manifest(&text)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let mut out = analyze_manifest(&manifest, base, config)?;
    fs::create_dir_all(&config.output_dir)?;
    let csv_path = config.output_dir.join("records.csv");
    let json_path = config.output_dir.join("records.json");
    fs::write(&csv_path, write_records_csv(&out.rows))?;
    fs::write(&json_path, records_json(&out.rows, config))?;
    out.written = vec![csv_path, json_path];
    Ok(out)
}
