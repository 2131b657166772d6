use crate::error::{Error, Result};

pub const MANIFEST_HEADER: [&str; 7] =
    ["path", "vowel_label", "class_label", "language", "source", "onset_ms", "offset_ms"];

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub path: String,
    pub vowel_label: String,
    pub class_label: String,
    pub language: String,
    pub source: String,
    pub onset_ms: f64,
    pub offset_ms: f64,
    /// Line of the entry in the manifest file.
    pub line: usize,
}

impl ManifestEntry {
    pub fn duration_ms(&self) -> f64 {
        self.offset_ms - self.onset_ms
    }
}

/// Parsed corpus manifest. The class labels seen in the file form the run's
/// closed class set unless a narrower set is declared with
/// [`CorpusManifest::restrict_classes`].
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub entries: Vec<ManifestEntry>,
    classes: Vec<String>,
}

impl CorpusManifest {
    /// Class labels in order of first appearance.
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    /// Checks every entry against a declared closed class set.
    pub fn restrict_classes(&mut self, declared: &[String]) -> Result<()> {
        for e in &self.entries {
            if !declared.contains(&e.class_label) {
                return Err(Error::Validation {
                    row: e.line,
                    msg: format!("class `{}` is not in the declared set {:?}", e.class_label, declared),
                });
            }
        }
        self.classes = declared.to_vec();
        Ok(())
    }
}

/// Parses a manifest CSV with the columns in [`MANIFEST_HEADER`] (any order).
pub fn parse_manifest(text: &str) -> Result<CorpusManifest> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| Error::Validation { row: 1, msg: e.to_string() })?
        .clone();
    let mut idx = [0usize; 7];
    for (slot, name) in idx.iter_mut().zip(MANIFEST_HEADER) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Validation { row: 1, msg: format!("missing column `{name}`") })?;
    }

    let mut entries = Vec::new();
    let mut classes: Vec<String> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Validation {
            row: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| rec.get(idx[i]).unwrap_or("").to_string();
        let number = |i: usize| -> Result<f64> {
            let raw = field(i);
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Validation { row, msg: format!("`{}` is not a number: `{raw}`", MANIFEST_HEADER[i]) })
        };
        let entry = ManifestEntry {
            path: field(0),
            vowel_label: field(1),
            class_label: field(2),
            language: field(3),
            source: field(4),
            onset_ms: number(5)?,
            offset_ms: number(6)?,
            line: row,
        };
        if entry.path.is_empty() {
            return Err(Error::Validation { row, msg: "empty path".into() });
        }
        if entry.class_label.is_empty() {
            return Err(Error::Validation { row, msg: "empty class_label".into() });
        }
        if entry.onset_ms >= entry.offset_ms {
            return Err(Error::Validation {
                row,
                msg: format!("onset {} must precede offset {}", entry.onset_ms, entry.offset_ms),
            });
        }
        if !classes.contains(&entry.class_label) {
            classes.push(entry.class_label.clone());
        }
        entries.push(entry);
    }
    Ok(CorpusManifest { entries, classes })
}
