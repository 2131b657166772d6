use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::json::{to_pretty, G17};
use super::records::RecordRow;
use crate::classify::{classify_pair, PairPolicy, PairVerdict};
use crate::error::{Error, Result};
use crate::stats::{anova2, pearson, summarize, welch_t, Anova2, AnovaMode, EffectRow, SixNumberSummary, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupField {
    Source,
    Class,
    Language,
    Vowel,
}

impl GroupField {
    fn get(self, r: &RecordRow) -> &str {
        match self {
            Self::Source => &r.source,
            Self::Class => &r.class_label,
            Self::Language => &r.language,
            Self::Vowel => &r.vowel_label,
        }
    }
}

/// Fields whose joint value defines a summary group, e.g. `source,class`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping(pub Vec<GroupField>);

impl Default for Grouping {
    fn default() -> Self {
        Self(vec![GroupField::Class])
    }
}

impl FromStr for Grouping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fields = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let f = match part {
                "source" => GroupField::Source,
                "class" | "class_label" => GroupField::Class,
                "language" => GroupField::Language,
                "vowel" | "vowel_label" => GroupField::Vowel,
                other => {
                    return Err(Error::Config(format!(
                        "unknown grouping field `{other}` (use source, class, language, vowel)"
                    )))
                }
            };
            if !fields.contains(&f) {
                fields.push(f);
            }
        }
        if fields.is_empty() {
            return Err(Error::Config("empty grouping".into()));
        }
        Ok(Self(fields))
    }
}

impl Grouping {
    fn key(&self, r: &RecordRow) -> String {
        self.0.iter().map(|f| f.get(r)).collect::<Vec<_>>().join("/")
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Section<T> {
    Ok(T),
    NotApplicable { reason: String },
    Error { reason: String },
}

impl<T> Section<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Self::Ok(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub group: String,
    pub n: usize,
    #[serde(skip)]
    pub summary: SixNumberSummary,
    min: G17,
    q1: G17,
    median: G17,
    mean: G17,
    q3: G17,
    max: G17,
}

#[derive(Debug, Clone, Serialize)]
pub struct WelchSection {
    pub groups: [String; 2],
    #[serde(skip)]
    pub test: TestResult,
    #[serde(skip)]
    pub verdict: PairVerdict,
    t: G17,
    df: G17,
    p: G17,
    label_a: String,
    label_b: String,
    bifurcated: bool,
    median_gap: G17,
}

#[derive(Debug, Clone, Serialize)]
struct AnovaTerm {
    term: &'static str,
    sum_sq: G17,
    df: usize,
    f: Option<G17>,
    p: Option<G17>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnovaSection {
    pub mode: &'static str,
    pub note: Option<String>,
    #[serde(skip)]
    pub table: Anova2,
    terms: Vec<AnovaTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PearsonSection {
    pub n: usize,
    #[serde(skip)]
    pub r: f64,
    #[serde(skip)]
    pub test: TestResult,
    r_value: G17,
    t: G17,
    df: G17,
    p: G17,
}

#[derive(Debug, Clone, Serialize)]
struct PolicyEcho {
    alpha: G17,
    min_gap_rad: G17,
    epsilon_rad: G17,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub config_hash: String,
    pub grouping: Vec<GroupField>,
    policy: PolicyEcho,
    pub summaries: Vec<GroupSummary>,
    pub welch: Section<WelchSection>,
    pub anova: Section<AnovaSection>,
    pub pearson: Section<PearsonSection>,
}

fn first_seen<'a>(rows: &[&'a RecordRow], f: impl Fn(&'a RecordRow) -> &'a str) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for r in rows {
        let v = f(r);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn welch_section(ok: &[&RecordRow], policy: &PairPolicy) -> Section<WelchSection> {
    let classes = first_seen(ok, |r| &r.class_label);
    if classes.len() != 2 {
        return Section::NotApplicable { reason: format!("needs exactly 2 classes, found {}", classes.len()) };
    }
    let pick = |c: &str| -> Vec<f64> { ok.iter().filter(|r| r.class_label == c).filter_map(|r| r.theta1_rad).collect() };
    let (a, b) = (pick(classes[0]), pick(classes[1]));
    let run = || -> Result<WelchSection> {
        let verdict = classify_pair(&a, &b, policy)?;
        let test = welch_t(&a, &b).unwrap_or(TestResult {
            statistic: verdict.evidence.welch_t,
            df: verdict.evidence.welch_df,
            df2: None,
            p_value: verdict.evidence.welch_p,
            kind: crate::stats::TestKind::WelchT,
        });
        Ok(WelchSection {
            groups: [classes[0].to_string(), classes[1].to_string()],
            t: G17(test.statistic),
            df: G17(test.df),
            p: G17(test.p_value),
            label_a: verdict.label_a.to_string(),
            label_b: verdict.label_b.to_string(),
            bifurcated: verdict.bifurcated,
            median_gap: G17(verdict.evidence.median_gap),
            test,
            verdict,
        })
    };
    match run() {
        Ok(s) => Section::Ok(s),
        Err(e) => Section::Error { reason: e.to_string() },
    }
}

fn anova_section(ok: &[&RecordRow]) -> Section<AnovaSection> {
    let sources: BTreeSet<&str> = ok.iter().map(|r| r.source.as_str()).collect();
    let classes: BTreeSet<&str> = ok.iter().map(|r| r.class_label.as_str()).collect();
    if sources.len() < 2 || classes.len() < 2 {
        return Section::NotApplicable {
            reason: format!("needs >= 2 sources and >= 2 classes, found {} and {}", sources.len(), classes.len()),
        };
    }
    let data: Vec<(String, String, f64)> = ok
        .iter()
        .filter_map(|r| r.theta1_rad.map(|t| (r.source.clone(), r.class_label.clone(), t)))
        .collect();
    let (table, mode, note) = match anova2(&data, AnovaMode::WithInteraction) {
        Ok(t) => (Ok(t), "with_interaction", None),
        Err(Error::Config(msg)) => (
            anova2(&data, AnovaMode::MainEffectsOnly),
            "main_effects_only",
            Some(format!("interaction dropped: {msg}")),
        ),
        Err(e) => (Err(e), "with_interaction", None),
    };
    let table = match table {
        Ok(t) => t,
        Err(e) => return Section::Error { reason: e.to_string() },
    };
    let term = |name: &'static str, row: &EffectRow| AnovaTerm {
        term: name,
        sum_sq: G17(row.sum_sq),
        df: row.test.df as usize,
        f: Some(G17(row.test.statistic)),
        p: Some(G17(row.test.p_value)),
    };
    let mut terms = vec![term("source", &table.factor_a), term("class", &table.factor_b)];
    if let Some(ab) = &table.interaction {
        terms.push(term("source:class", ab));
    }
    terms.push(AnovaTerm { term: "residual", sum_sq: G17(table.residual_ss), df: table.residual_df, f: None, p: None });
    Section::Ok(AnovaSection { mode, note, table, terms })
}

fn pearson_section(ok: &[&RecordRow]) -> Section<PearsonSection> {
    let (x, y): (Vec<f64>, Vec<f64>) = ok.iter().filter_map(|r| Some((r.theta1_rad?, r.delta_f0_hz?))).unzip();
    if x.len() < 3 {
        return Section::NotApplicable { reason: format!("needs >= 3 rows with delta_f0_hz, found {}", x.len()) };
    }
    match pearson(&x, &y) {
        Ok((r, test)) => Section::Ok(PearsonSection {
            n: x.len(),
            r,
            r_value: G17(r),
            t: G17(test.statistic),
            df: G17(test.df),
            p: G17(test.p_value),
            test,
        }),
        Err(e) => Section::Error { reason: e.to_string() },
    }
}

/// Descriptive and inferential statistics over the `ok` rows.
pub fn run_stats(rows: &[RecordRow], grouping: &Grouping, policy: &PairPolicy) -> Result<StatsReport> {
    let ok: Vec<&RecordRow> = rows.iter().filter(|r| r.is_ok() && r.theta1_rad.is_some()).collect();
    if ok.is_empty() {
        return Err(Error::InsufficientData("no ok rows with theta1_rad".into()));
    }
    let hashes: BTreeSet<&str> = rows.iter().map(|r| r.config_hash.as_str()).collect();
    if hashes.len() > 1 {
        return Err(Error::Config(format!("records mix configurations {hashes:?}")));
    }
    let keys = {
        let mut keys: Vec<String> = Vec::new();
        for r in &ok {
            let k = grouping.key(r);
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
        keys
    };
    let mut summaries = Vec::new();
    for key in keys {
        let vals: Vec<f64> = ok.iter().filter(|r| grouping.key(r) == key).filter_map(|r| r.theta1_rad).collect();
        let s = summarize(&vals)?;
        summaries.push(GroupSummary {
            group: key,
            n: vals.len(),
            min: G17(s.min),
            q1: G17(s.q1),
            median: G17(s.median),
            mean: G17(s.mean),
            q3: G17(s.q3),
            max: G17(s.max),
            summary: s,
        });
    }
    Ok(StatsReport {
        config_hash: hashes.into_iter().next().unwrap_or_default().to_string(),
        grouping: grouping.0.clone(),
        policy: PolicyEcho { alpha: G17(policy.alpha), min_gap_rad: G17(policy.min_gap), epsilon_rad: G17(policy.epsilon) },
        summaries,
        welch: welch_section(&ok, policy),
        anova: anova_section(&ok),
        pearson: pearson_section(&ok),
    })
}

fn na<T>(out: &mut String, s: &Section<T>) -> bool {
    match s {
        Section::Ok(_) => false,
        Section::NotApplicable { reason } => {
            let _ = writeln!(out, "not applicable: {reason}");
            true
        }
        Section::Error { reason } => {
            let _ = writeln!(out, "error: {reason}");
            true
        }
    }
}

impl StatsReport {
    pub fn to_json(&self) -> String {
        to_pretty(self)
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let _ = writeln!(o, "# config_hash {}", self.config_hash);
        let _ = writeln!(
            o,
            "# alpha {} min_gap_rad {} epsilon_rad {}\n",
            self.policy.alpha.0, self.policy.min_gap_rad.0, self.policy.epsilon_rad.0
        );
        let names: Vec<String> = self.grouping.iter().map(|g| format!("{g:?}").to_lowercase()).collect();
        let _ = writeln!(o, "theta1_rad by {}", names.join("/"));
        let _ = writeln!(
            o,
            "{:<24} {:>4} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
            "group", "n", "Min.", "1st Qu.", "Median", "Mean", "3rd Qu.", "Max."
        );
        for g in &self.summaries {
            let s = &g.summary;
            let _ = writeln!(
                o,
                "{:<24} {:>4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
                g.group, g.n, s.min, s.q1, s.median, s.mean, s.q3, s.max
            );
        }

        let _ = writeln!(o, "\nWelch two-sample t-test");
        if !na(&mut o, &self.welch) {
            let w = self.welch.ok().expect("ok section");
            let _ = writeln!(o, "{} vs {}: t = {:.4}, df = {:.3}, p = {:.4e}", w.groups[0], w.groups[1], w.t.0, w.df.0, w.p.0);
            let _ = writeln!(
                o,
                "bifurcated: {} ({} = {}, {} = {}, median gap {:.4})",
                w.bifurcated, w.groups[0], w.label_a, w.groups[1], w.label_b, w.median_gap.0
            );
        }

        let _ = writeln!(o, "\nTwo-way ANOVA, source x class (Type II)");
        if !na(&mut o, &self.anova) {
            let a = self.anova.ok().expect("ok section");
            if let Some(note) = &a.note {
                let _ = writeln!(o, "note: {note}");
            }
            let _ = writeln!(o, "{:<14} {:>12} {:>4} {:>10} {:>11}", "term", "sum_sq", "df", "F", "p");
            for t in &a.terms {
                match (t.f, t.p) {
                    (Some(f), Some(p)) => {
                        let _ = writeln!(o, "{:<14} {:>12.6} {:>4} {:>10.4} {:>11.4e}", t.term, t.sum_sq.0, t.df, f.0, p.0);
                    }
                    _ => {
                        let _ = writeln!(o, "{:<14} {:>12.6} {:>4}", t.term, t.sum_sq.0, t.df);
                    }
                }
            }
        }

        let _ = writeln!(o, "\nPearson correlation, theta1_rad vs delta_f0_hz");
        if !na(&mut o, &self.pearson) {
            let p = self.pearson.ok().expect("ok section");
            let _ = writeln!(o, "n = {}, r = {:.4}, t = {:.4}, df = {}, p = {:.4e}", p.n, p.r, p.t.0, p.df.0, p.p.0);
        }
        o
    }
}
