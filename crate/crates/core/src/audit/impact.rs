use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audit::{critical_features, tolerate_ambiguity};
use crate::error::Result;
use crate::model::{Decision, Instance, NeuralModel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureImpactRow {
    pub feature: usize,
    pub name: String,
    pub non_influenced: usize,
    pub critical_negative: usize,
    pub critical_positive: usize,
}

/// Critical-feature set of one audited decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceCriticality {
    pub index: usize,
    pub decision: Decision,
    pub critical: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureImpactTable {
    pub rows: Vec<FeatureImpactRow>,
    pub audited: usize,
    pub negatives: usize,
    pub positives: usize,
    pub ambiguous_indices: Vec<usize>,
    pub instances: Vec<InstanceCriticality>,
}

impl FeatureImpactTable {
    pub fn class_size(&self, d: Decision) -> usize {
        match d {
            Decision::Negative => self.negatives,
            Decision::Positive => self.positives,
        }
    }

    pub fn critical_count(&self, feature: usize, d: Decision) -> usize {
        let row = &self.rows[feature];
        match d {
            Decision::Negative => row.critical_negative,
            Decision::Positive => row.critical_positive,
        }
    }

    pub fn render_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len() + 6).max().unwrap_or(0).max(8);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<width$}  {:>14}  {:>8}  {:>8}",
            "Feature", "Non influenced", "Negative", "Positive"
        );
        for r in &self.rows {
            let label = format!("x{} {}", r.feature, r.name);
            let _ = writeln!(
                s,
                "{:<width$}  {:>14}  {:>8}  {:>8}",
                label, r.non_influenced, r.critical_negative, r.critical_positive
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{} audited ({} negative, {} positive); {} ambiguous excluded",
            self.audited,
            self.negatives,
            self.positives,
            self.ambiguous_indices.len()
        );
        s
    }
}

/// Per feature, how many decisions it is critical for, split by predicted outcome.
pub fn feature_impact<T: Scalar>(model: &NeuralModel<T>, dataset: &[Instance]) -> Result<FeatureImpactTable> {
    let per_instance = dataset
        .par_iter()
        .map(|x| {
            tolerate_ambiguity(
                model
                    .predict(x)
                    .and_then(|d| Ok((d, critical_features(model, x)?))),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let schema = model.schema();
    let mut rows: Vec<FeatureImpactRow> = (0..schema.len())
        .map(|feature| FeatureImpactRow {
            feature,
            name: schema.name(feature).to_string(),
            non_influenced: 0,
            critical_negative: 0,
            critical_positive: 0,
        })
        .collect();
    let mut table = FeatureImpactTable {
        rows: Vec::new(),
        audited: 0,
        negatives: 0,
        positives: 0,
        ambiguous_indices: Vec::new(),
        instances: Vec::new(),
    };
    for (index, r) in per_instance.into_iter().enumerate() {
        let Some((decision, critical)) = r else {
            table.ambiguous_indices.push(index);
            continue;
        };
        table.audited += 1;
        match decision {
            Decision::Negative => table.negatives += 1,
            Decision::Positive => table.positives += 1,
        }
        for &f in &critical {
            match decision {
                Decision::Negative => rows[f].critical_negative += 1,
                Decision::Positive => rows[f].critical_positive += 1,
            }
        }
        table.instances.push(InstanceCriticality {
            index,
            decision,
            critical,
        });
    }
    for r in &mut rows {
        r.non_influenced = table.audited - r.critical_negative - r.critical_positive;
    }
    table.rows = rows;
    Ok(table)
}
