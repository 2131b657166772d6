//! Batch orchestration over a corpus manifest: records, statistics, force
//! profiles, simulation scenarios and SVG maps. All outputs are
//! byte-deterministic for a fixed manifest and configuration.

mod analyze;
pub mod corpus;
mod force;
mod json;
mod records;
mod simulate;
mod stats_report;
pub mod svg;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use analyze::{analyze_manifest, load_track, run_analyze, AnalyzeOutcome};
pub use force::{parse_force_csv, run_force, ForceRun, ForceTable};
pub use records::{parse_records_csv, records_json, write_records_csv, RecordRow, RowStatus, RECORDS_HEADER};
pub use simulate::{run_simulate, AccelSpec, OscillatorSpec, Scenario};
pub use stats_report::{run_stats, Grouping, StatsReport};
pub use svg::{emit_curves_svg, emit_svg, Curve, SvgKind};

use crate::classify::PairPolicy;
use crate::dynamics::ForceConstants;
use crate::error::{Error, Result};
use crate::formant_extract::ExtractionConfig;
use crate::tenseness::{IndicatorConfig, DEFAULT_F_NEU_HZ, MAX_DEGREE};

/// Every tunable of a run. `output_dir` and `workers` do not affect results
/// and are excluded from the config hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub fit_degree: usize,
    pub f_neu_hz: f64,
    pub mass_m: f64,
    pub coeff_k: f64,
    pub epsilon_rad: f64,
    pub alpha: f64,
    pub min_gap_rad: f64,
    pub extraction: ExtractionConfig,
    pub seed: u64,
    #[serde(skip)]
    pub output_dir: PathBuf,
    /// 0 lets the thread pool pick.
    #[serde(skip)]
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            fit_degree: 3,
            f_neu_hz: DEFAULT_F_NEU_HZ,
            mass_m: 1.0,
            coeff_k: 1.0,
            epsilon_rad: 0.0,
            alpha: 0.05,
            min_gap_rad: 0.1,
            extraction: ExtractionConfig::default(),
            seed: 0,
            output_dir: PathBuf::from("."),
            workers: 0,
        }
    }
}

impl std::str::FromStr for RunConfig {
    type Err = Error;

    /// Parses a TOML config file; absent keys keep their defaults.
    fn from_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(format!("config: {}", e.message())))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DEGREE).contains(&self.fit_degree) {
            return Err(Error::Config(format!("fit degree must be in 1..={MAX_DEGREE}, got {}", self.fit_degree)));
        }
        if !(self.f_neu_hz > 0.0 && self.f_neu_hz.is_finite()) {
            return Err(Error::Config(format!("F_neu must be positive, got {}", self.f_neu_hz)));
        }
        self.force_constants()?;
        self.pair_policy()?;
        self.extraction.validate()
    }

    pub fn force_constants(&self) -> Result<ForceConstants> {
        ForceConstants::new(self.mass_m, self.coeff_k)
    }

    pub fn pair_policy(&self) -> Result<PairPolicy> {
        PairPolicy::new(self.alpha, self.min_gap_rad, self.epsilon_rad)
    }

    pub fn indicator_config(&self) -> IndicatorConfig {
        IndicatorConfig { f_neu_hz: self.f_neu_hz }
    }

    /// Canonical JSON of the result-affecting fields.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// First 16 hex digits of the SHA-256 of [`RunConfig::canonical_json`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
