//! Survey ingestion: raw records to Boolean instances.
//!
//! Every mapping lives in [`BinarizationRules`], which serializes to JSON so
//! vocabularies and thresholds can be revised without touching code. Any
//! value not listed as affirmative (including "Don't know", "Maybe" and
//! empty cells) maps to 0.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Decision, Instance};
use crate::schema::{FeatureSchema, SURVEY_FEATURES, SURVEY_GENDER_INDEX};

/// Column names accepted for the label in binarized files.
pub const LABEL_COLUMNS: [&str; 2] = ["treatment", "label"];

/// One survey row, keyed by column header.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawSurveyRecord {
    fields: BTreeMap<String, String>,
}

impl RawSurveyRecord {
    pub fn new<K: Into<String>, V: Into<String>>(fields: impl IntoIterator<Item = (K, V)>) -> Self {
        Self {
            fields: fields.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }

    /// Missing columns read as empty.
    pub fn get(&self, column: &str) -> &str {
        self.fields.get(column).map_or("", |s| s.trim())
    }

    pub fn set(&mut self, column: impl Into<String>, value: impl Into<String>) {
        self.fields.insert(column.into(), value.into());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureRule {
    /// 1 iff the integer in `column` is strictly greater than `threshold`.
    /// Empty or `NA` cells map to 0; other non-integers are an error.
    AgeAbove { column: String, threshold: i64 },
    /// 1 iff the trimmed, lowercased value is in `values`.
    OneOf { column: String, values: Vec<String> },
}

impl FeatureRule {
    pub fn column(&self) -> &str {
        match self {
            FeatureRule::AgeAbove { column, .. } | FeatureRule::OneOf { column, .. } => column,
        }
    }

    fn apply(&self, record: &RawSurveyRecord) -> std::result::Result<bool, String> {
        let raw = record.get(self.column());
        match self {
            FeatureRule::AgeAbove { threshold, .. } => {
                if raw.is_empty() || raw.eq_ignore_ascii_case("na") {
                    return Ok(false);
                }
                raw.parse::<i64>()
                    .map(|age| age > *threshold)
                    .map_err(|_| format!("unparseable age `{raw}`"))
            }
            FeatureRule::OneOf { values, .. } => {
                let v = raw.to_lowercase();
                Ok(values.iter().any(|a| a.trim().to_lowercase() == v))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureRuleEntry {
    pub name: String,
    pub question: String,
    pub rule: FeatureRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarizationRules {
    pub features: Vec<FeatureRuleEntry>,
    pub label: FeatureRule,
    #[serde(default)]
    pub protected: Option<usize>,
}

fn one_of(column: &str, values: &[&str]) -> FeatureRule {
    FeatureRule::OneOf {
        column: column.into(),
        values: values.iter().map(|v| v.to_string()).collect(),
    }
}

const YES: &[&str] = &["yes"];

const MALE_VARIANTS: &[&str] = &[
    "male", "m", "man", "cis male", "cis man", "male (cis)", "mal", "maile", "make", "malr",
    "mail", "msle", "male ",
];

impl Default for BinarizationRules {
    /// Rules for the Mental Health in Tech survey.
    fn default() -> Self {
        let rules = [
            FeatureRule::AgeAbove {
                column: "Age".into(),
                threshold: 31,
            },
            one_of("Gender", MALE_VARIANTS),
            one_of("self_employed", YES),
            one_of("family_history", YES),
            one_of("no_employees", &["1-5", "6-25", "26-100"]),
            one_of("remote_work", YES),
            one_of("tech_company", YES),
            one_of("benefits", YES),
            one_of("care_options", YES),
            one_of("wellness_program", YES),
            one_of("seek_help", YES),
            one_of("anonymity", YES),
            one_of("leave", &["very easy", "somewhat easy"]),
            one_of("mental_health_consequence", YES),
            one_of("phys_health_consequence", YES),
            one_of("coworkers", &["yes", "some of them"]),
            one_of("supervisor", &["yes", "some of them"]),
            one_of("mental_vs_physical", YES),
            one_of("obs_consequence", YES),
        ];
        let features = SURVEY_FEATURES
            .iter()
            .zip(rules)
            .map(|((name, question), rule)| FeatureRuleEntry {
                name: name.to_string(),
                question: question.to_string(),
                rule,
            })
            .collect();
        Self {
            features,
            label: one_of("treatment", YES),
            protected: Some(SURVEY_GENDER_INDEX),
        }
    }
}

impl BinarizationRules {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("binarization rules", e))
    }

    pub fn schema(&self) -> Result<FeatureSchema> {
        FeatureSchema::new(
            self.features.iter().map(|f| f.name.clone()).collect(),
            self.features.iter().map(|f| f.question.clone()).collect(),
            self.protected,
        )
    }

    pub fn required_columns(&self) -> Vec<&str> {
        let mut cols: Vec<&str> = self
            .features
            .iter()
            .map(|f| f.rule.column())
            .chain([self.label.column()])
            .collect();
        cols.dedup();
        cols
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledInstance {
    pub instance: Instance,
    pub label: Decision,
}

/// Maps one raw record to its features and self-reported label.
/// `index` is only used in error messages.
pub fn binarize(rules: &BinarizationRules, record: &RawSurveyRecord, index: usize) -> Result<LabeledInstance> {
    let err = |message| Error::Ingest { record: index, message };
    let values = rules
        .features
        .iter()
        .map(|f| f.rule.apply(record))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(err)?;
    let label = rules.label.apply(record).map_err(err)?;
    Ok(LabeledInstance {
        instance: Instance::new(values),
        label: Decision::from_bit(label),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRecord {
    pub record: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub rows: usize,
    pub positive: usize,
    pub negative: usize,
    /// Share of rows with the protected feature set (male, for the survey).
    pub male_fraction: Option<f64>,
    pub skipped: Vec<SkippedRecord>,
}

impl DatasetSummary {
    pub fn describe(&self) -> String {
        let mut s = format!(
            "{} rows, {} positive, {} negative",
            self.rows, self.positive, self.negative
        );
        if let Some(m) = self.male_fraction {
            s.push_str(&format!(", {:.2}% protected=1", 100.0 * m));
        }
        if !self.skipped.is_empty() {
            s.push_str(&format!(", {} skipped", self.skipped.len()));
        }
        s
    }
}

/// Reads a comma-delimited survey export and binarizes every parseable row.
/// Rows that fail to parse are reported in the summary, not returned.
pub fn load_dataset(
    path: impl AsRef<Path>,
    rules: &BinarizationRules,
) -> Result<(Vec<LabeledInstance>, DatasetSummary)> {
    read_dataset(File::open(path)?, rules)
}

pub fn read_dataset(
    reader: impl Read,
    rules: &BinarizationRules,
) -> Result<(Vec<LabeledInstance>, DatasetSummary)> {
    let mut csv = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers: Vec<String> = csv.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if headers.iter().all(|h| h.is_empty()) {
        return Err(Error::Dataset("missing header row".into()));
    }
    let missing: Vec<&str> = rules
        .required_columns()
        .into_iter()
        .filter(|c| !headers.iter().any(|h| h == c))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Dataset(format!("missing columns: {}", missing.join(", "))));
    }

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (index, record) in csv.records().enumerate() {
        let parsed = record.map_err(Error::from).and_then(|r| {
            let raw = RawSurveyRecord::new(headers.iter().cloned().zip(r.iter().map(str::to_string)));
            binarize(rules, &raw, index)
        });
        match parsed {
            Ok(row) => rows.push(row),
            Err(e) => skipped.push(SkippedRecord {
                record: index,
                reason: e.to_string(),
            }),
        }
    }
    if rows.is_empty() {
        return Err(Error::Dataset("no parseable rows".into()));
    }
    let positive = rows.iter().filter(|r| r.label == Decision::Positive).count();
    let male_fraction = rules.protected.map(|p| {
        rows.iter().filter(|r| r.instance.get(p)).count() as f64 / rows.len() as f64
    });
    let summary = DatasetSummary {
        rows: rows.len(),
        positive,
        negative: rows.len() - positive,
        male_fraction,
        skipped,
    };
    Ok((rows, summary))
}

/// A binarized dataset as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarizedDataset {
    pub feature_names: Vec<String>,
    pub instances: Vec<Instance>,
    /// Present when the file has a label column.
    pub labels: Option<Vec<Decision>>,
}

/// Writes `name_0,...,name_{n-1},treatment` then one 0/1 row per instance.
pub fn write_binarized(
    writer: impl Write,
    schema: &FeatureSchema,
    rows: &[LabeledInstance],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(schema.names().iter().map(String::as_str).chain([LABEL_COLUMNS[0]]))?;
    for row in rows {
        if row.instance.len() != schema.len() {
            return Err(Error::Dimension {
                context: "binarized row".into(),
                expected: schema.len(),
                found: row.instance.len(),
            });
        }
        let cells = row
            .instance
            .values()
            .iter()
            .map(|&b| if b { "1" } else { "0" })
            .chain([if row.label == Decision::Positive { "1" } else { "0" }]);
        w.write_record(cells)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_binarized(path: impl AsRef<Path>, schema: &FeatureSchema, rows: &[LabeledInstance]) -> Result<()> {
    let file = File::create(path)?;
    write_binarized(std::io::BufWriter::new(file), schema, rows)
}

pub fn read_binarized(reader: impl Read) -> Result<BinarizedDataset> {
    let mut csv = csv::ReaderBuilder::new().from_reader(reader);
    let mut feature_names: Vec<String> = csv.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if feature_names.iter().all(String::is_empty) {
        return Err(Error::Dataset("missing header row".into()));
    }
    let labelled = feature_names
        .last()
        .is_some_and(|h| LABEL_COLUMNS.contains(&h.as_str()));
    if labelled {
        feature_names.pop();
    }
    let bit = |s: &str, row: usize| match s.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Error::Ingest {
            record: row,
            message: format!("expected 0 or 1, found `{other}`"),
        }),
    };
    let mut instances = Vec::new();
    let mut labels = Vec::new();
    for (row, record) in csv.records().enumerate() {
        let record = record?;
        let mut values = record.iter().map(|s| bit(s, row)).collect::<Result<Vec<_>>>()?;
        if labelled {
            labels.push(Decision::from_bit(values.pop().unwrap_or(false)));
        }
        instances.push(Instance::new(values));
    }
    if instances.is_empty() {
        return Err(Error::Dataset("no rows".into()));
    }
    Ok(BinarizedDataset {
        feature_names,
        instances,
        labels: labelled.then_some(labels),
    })
}

pub fn load_binarized(path: impl AsRef<Path>) -> Result<BinarizedDataset> {
    read_binarized(File::open(path)?)
}
