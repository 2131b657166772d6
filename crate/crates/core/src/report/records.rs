use serde::Serialize;

use super::json::{g17, to_pretty, G17};
use super::RunConfig;
use crate::error::{Error, Result};
use crate::ingest::ManifestEntry;
use crate::num::fmt_g17;
use crate::tenseness::TensenessRecord;

pub const RECORDS_HEADER: [&str; 16] = [
    "path",
    "vowel_label",
    "class_label",
    "language",
    "source",
    "d_ds",
    "theta1_rad",
    "theta_f1_rad",
    "f1_33_hz",
    "z1_33_bark",
    "f0_33_hz",
    "f0_66_hz",
    "delta_f0_hz",
    "status",
    "error",
    "config_hash",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    Error,
}

/// One manifest entry's outcome. Numeric fields are `None` on error rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordRow {
    pub path: String,
    pub vowel_label: String,
    pub class_label: String,
    pub language: String,
    pub source: String,
    pub d_ds: Option<f64>,
    pub theta1_rad: Option<f64>,
    pub theta_f1_rad: Option<f64>,
    pub f1_33_hz: Option<f64>,
    pub z1_33_bark: Option<f64>,
    pub f0_33_hz: Option<f64>,
    pub f0_66_hz: Option<f64>,
    pub delta_f0_hz: Option<f64>,
    /// Not a CSV column; carried in the JSON output.
    pub deviation_hz: Option<f64>,
    pub status: RowStatus,
    pub error: String,
    pub config_hash: String,
}

impl RecordRow {
    fn blank(entry: &ManifestEntry, config_hash: &str) -> Self {
        Self {
            path: entry.path.clone(),
            vowel_label: entry.vowel_label.clone(),
            class_label: entry.class_label.clone(),
            language: entry.language.clone(),
            source: entry.source.clone(),
            d_ds: None,
            theta1_rad: None,
            theta_f1_rad: None,
            f1_33_hz: None,
            z1_33_bark: None,
            f0_33_hz: None,
            f0_66_hz: None,
            delta_f0_hz: None,
            deviation_hz: None,
            status: RowStatus::Error,
            error: String::new(),
            config_hash: config_hash.to_string(),
        }
    }

    pub fn from_record(entry: &ManifestEntry, rec: &TensenessRecord, config_hash: &str) -> Self {
        Self {
            d_ds: Some(rec.d_ds),
            theta1_rad: Some(rec.theta1_rad),
            theta_f1_rad: Some(rec.theta_f1_rad),
            f1_33_hz: Some(rec.f1_33_hz),
            z1_33_bark: Some(rec.z1_33_bark),
            f0_33_hz: rec.f0_33_hz,
            f0_66_hz: rec.f0_66_hz,
            delta_f0_hz: rec.delta_f0_hz,
            deviation_hz: Some(rec.deviation_hz),
            status: RowStatus::Ok,
            ..Self::blank(entry, config_hash)
        }
    }

    pub fn from_error(entry: &ManifestEntry, err: &Error, config_hash: &str) -> Self {
        Self { error: err.to_string(), ..Self::blank(entry, config_hash) }
    }

    pub fn is_ok(&self) -> bool {
        self.status == RowStatus::Ok
    }

    fn numbers(&self) -> [Option<f64>; 8] {
        [
            self.d_ds,
            self.theta1_rad,
            self.theta_f1_rad,
            self.f1_33_hz,
            self.z1_33_bark,
            self.f0_33_hz,
            self.f0_66_hz,
            self.delta_f0_hz,
        ]
    }
}

pub fn write_records_csv(rows: &[RecordRow]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(RECORDS_HEADER).expect("in-memory write");
    for r in rows {
        let mut fields: Vec<String> =
            vec![r.path.clone(), r.vowel_label.clone(), r.class_label.clone(), r.language.clone(), r.source.clone()];
        fields.extend(r.numbers().iter().map(|v| v.map(fmt_g17).unwrap_or_default()));
        let status = match r.status {
            RowStatus::Ok => "ok",
            RowStatus::Error => "error",
        };
        fields.extend([status.to_string(), r.error.clone(), r.config_hash.clone()]);
        w.write_record(&fields).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 fields")
}

pub fn parse_records_csv(text: &str) -> Result<Vec<RecordRow>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?.clone();
    if headers.iter().ne(RECORDS_HEADER) {
        return Err(Error::Format(format!("records header must be `{}`", RECORDS_HEADER.join(","))));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse { line: e.position().map_or(0, |p| p.line() as usize), msg: e.to_string() })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let num = |i: usize| -> Result<Option<f64>> {
            match &rec[i] {
                "" => Ok(None),
                s => s
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| Error::Parse { line, msg: format!("`{}` is not a number: `{s}`", RECORDS_HEADER[i]) }),
            }
        };
        let status = match &rec[13] {
            "ok" => RowStatus::Ok,
            "error" => RowStatus::Error,
            s => return Err(Error::Parse { line, msg: format!("unknown status `{s}`") }),
        };
        rows.push(RecordRow {
            path: rec[0].to_string(),
            vowel_label: rec[1].to_string(),
            class_label: rec[2].to_string(),
            language: rec[3].to_string(),
            source: rec[4].to_string(),
            d_ds: num(5)?,
            theta1_rad: num(6)?,
            theta_f1_rad: num(7)?,
            f1_33_hz: num(8)?,
            z1_33_bark: num(9)?,
            f0_33_hz: num(10)?,
            f0_66_hz: num(11)?,
            delta_f0_hz: num(12)?,
            deviation_hz: None,
            status,
            error: rec[14].to_string(),
            config_hash: rec[15].to_string(),
        });
        if status == RowStatus::Ok && rows.last().and_then(|r| r.theta1_rad).is_none() {
            return Err(Error::Parse { line, msg: "ok row without theta1_rad".into() });
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct JsonRow<'a> {
    path: &'a str,
    vowel_label: &'a str,
    class_label: &'a str,
    language: &'a str,
    source: &'a str,
    d_ds: Option<G17>,
    theta1_rad: Option<G17>,
    theta_f1_rad: Option<G17>,
    f1_33_hz: Option<G17>,
    z1_33_bark: Option<G17>,
    f0_33_hz: Option<G17>,
    f0_66_hz: Option<G17>,
    delta_f0_hz: Option<G17>,
    deviation_hz: Option<G17>,
    status: RowStatus,
    error: &'a str,
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    config_hash: String,
    config: &'a RunConfig,
    records: Vec<JsonRow<'a>>,
}

pub fn records_json(rows: &[RecordRow], config: &RunConfig) -> String {
    let records = rows
        .iter()
        .map(|r| JsonRow {
            path: &r.path,
            vowel_label: &r.vowel_label,
            class_label: &r.class_label,
            language: &r.language,
            source: &r.source,
            d_ds: g17(r.d_ds),
            theta1_rad: g17(r.theta1_rad),
            theta_f1_rad: g17(r.theta_f1_rad),
            f1_33_hz: g17(r.f1_33_hz),
            z1_33_bark: g17(r.z1_33_bark),
            f0_33_hz: g17(r.f0_33_hz),
            f0_66_hz: g17(r.f0_66_hz),
            delta_f0_hz: g17(r.delta_f0_hz),
            deviation_hz: g17(r.deviation_hz),
            status: r.status,
            error: &r.error,
        })
        .collect();
    to_pretty(&JsonDoc { config_hash: config.hash(), config, records })
}
