use std::fmt::Write as _;

use super::RunConfig;
use crate::dynamics::{force_profile, ForceProfile};
use crate::error::{Error, Result};
use crate::ingest::FormantTrack;
use crate::num::fmt_g17;
use crate::tenseness::{fit_poly, PolyModel};

#[derive(Debug, Clone, PartialEq)]
pub struct ForceRun {
    pub model: PolyModel,
    pub profile: ForceProfile,
    pub csv: String,
}

/// Fits F1 (Bark) over `window_ms` (whole track when `None`) with the
/// configured degree and samples acceleration and force.
pub fn run_force(track: &FormantTrack, window_ms: Option<(f64, f64)>, config: &RunConfig, n_samples: usize) -> Result<ForceRun> {
    config.validate()?;
    let window = window_ms.unwrap_or((track.start_ms(), track.end_ms()));
    let model = fit_poly(track, window, config.fit_degree)?;
    let profile = force_profile(&model, &config.force_constants()?, n_samples)?;
    let warning = if profile.degenerate_degree { "degenerate_degree" } else { "" };
    let mut csv = String::new();
    let _ = writeln!(csv, "# mass_m,{}", fmt_g17(config.mass_m));
    let _ = writeln!(csv, "# coeff_k,{}", fmt_g17(config.coeff_k));
    let _ = writeln!(csv, "# degree,{}", config.fit_degree);
    let _ = writeln!(csv, "# window_ms,{},{}", fmt_g17(window.0), fmt_g17(window.1));
    let _ = writeln!(csv, "# config_hash,{}", config.hash());
    csv.push_str("t_ds,a_tense,f_tense,warning\n");
    for i in 0..profile.times_ds.len() {
        let _ = writeln!(
            csv,
            "{},{},{},{warning}",
            fmt_g17(profile.times_ds[i]),
            fmt_g17(profile.a_tense[i]),
            fmt_g17(profile.f_tense[i])
        );
    }
    Ok(ForceRun { model, profile, csv })
}

/// A parsed `force.csv`: echo rows and samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceTable {
    pub meta: Vec<(String, String)>,
    pub t_ds: Vec<f64>,
    pub a_tense: Vec<f64>,
    pub f_tense: Vec<f64>,
}

impl ForceTable {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn parse_force_csv(text: &str) -> Result<ForceTable> {
    let mut meta = Vec::new();
    let mut table = ForceTable { meta: vec![], t_ds: vec![], a_tense: vec![], f_tense: vec![] };
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once(',') {
                meta.push((k.to_string(), v.to_string()));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if !line.starts_with("t_ds,a_tense,f_tense") {
                return Err(Error::Parse { line: line_no, msg: "expected header `t_ds,a_tense,f_tense,warning`".into() });
            }
            header_seen = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let num = |j: usize| -> Result<f64> {
            cols.get(j)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse { line: line_no, msg: format!("bad number in column {}", j + 1) })
        };
        table.t_ds.push(num(0)?);
        table.a_tense.push(num(1)?);
        table.f_tense.push(num(2)?);
    }
    if !header_seen {
        return Err(Error::Format("no force table header".into()));
    }
    table.meta = meta;
    Ok(table)
}
