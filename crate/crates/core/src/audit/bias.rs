use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audit::{ratio, tolerate_ambiguity};
use crate::axp::is_biased_decision;
use crate::error::{Error, Result};
use crate::model::{Decision, Instance, NeuralModel};
use crate::scalar::Scalar;

/// Counts of biased and unbiased decisions with respect to one protected feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasAuditReport {
    pub protected: usize,
    pub total: usize,
    pub unbiased: usize,
    pub biased_negative: usize,
    pub biased_positive: usize,
    pub ambiguous: usize,
    /// unbiased / total.
    pub unbiased_ratio: f64,
    pub biased_indices: Vec<usize>,
    pub ambiguous_indices: Vec<usize>,
}

impl BiasAuditReport {
    pub fn from_counts(
        protected: usize,
        unbiased: usize,
        biased_negative: usize,
        biased_positive: usize,
        ambiguous: usize,
    ) -> Self {
        let total = unbiased + biased_negative + biased_positive + ambiguous;
        Self {
            protected,
            total,
            unbiased,
            biased_negative,
            biased_positive,
            ambiguous,
            unbiased_ratio: ratio(unbiased, total),
            biased_indices: Vec::new(),
            ambiguous_indices: Vec::new(),
        }
    }

    pub fn is_partition(&self) -> bool {
        self.unbiased + self.biased_negative + self.biased_positive + self.ambiguous == self.total
    }

    /// Whether the model admits at least one biased decision.
    pub fn model_is_biased(&self) -> bool {
        self.biased_negative + self.biased_positive > 0
    }

    /// Three count columns: unbiased, then biased decisions by predicted outcome.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:>10}  {:>10}  {:>10}", "Unbiased", "Negative", "Positive");
        let _ = writeln!(
            s,
            "{:>10}  {:>10}  {:>10}",
            self.unbiased, self.biased_negative, self.biased_positive
        );
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "protected feature x{}; unbiased {:.2}% of {} decisions; {} ambiguous excluded",
            self.protected,
            100.0 * self.unbiased_ratio,
            self.total,
            self.ambiguous
        );
        s
    }
}

/// Classifies every instance as unbiased, biased (by predicted outcome), or ambiguous.
pub fn audit_bias<T: Scalar>(
    model: &NeuralModel<T>,
    dataset: &[Instance],
    protected: usize,
) -> Result<BiasAuditReport> {
    if protected >= model.input_width() {
        return Err(Error::Config(format!(
            "protected feature {protected} outside 0..{}",
            model.input_width()
        )));
    }
    let outcomes = dataset
        .par_iter()
        .map(|x| {
            tolerate_ambiguity(
                model
                    .predict(x)
                    .and_then(|d| Ok((d, is_biased_decision(model, x, protected)?))),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = BiasAuditReport::from_counts(protected, 0, 0, 0, 0);
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            None => {
                report.ambiguous += 1;
                report.ambiguous_indices.push(i);
            }
            Some((_, false)) => report.unbiased += 1,
            Some((d, true)) => {
                match d {
                    Decision::Negative => report.biased_negative += 1,
                    Decision::Positive => report.biased_positive += 1,
                }
                report.biased_indices.push(i);
            }
        }
    }
    report.total = dataset.len();
    report.unbiased_ratio = ratio(report.unbiased, report.total);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::fixtures::*;

    #[test]
    fn reference_counts_partition() {
        let r = BiasAuditReport::from_counts(1, 864, 290, 103, 0);
        assert_eq!(r.total, 1257);
        assert!(r.is_partition());
        // 864/1257 = 0.687350..., reported truncated as 68.73%
        assert_eq!((r.unbiased_ratio * 1e4).floor(), 6873.0);
        assert!(r.model_is_biased());
    }

    #[test]
    fn independent_and_projection_models() {
        let data = cube(3);
        let independent = single(&[0.0, 1.0, 1.0], -0.5);
        let r = audit_bias(&independent, &data, 0).unwrap();
        assert_eq!((r.unbiased, r.biased_negative, r.biased_positive), (8, 0, 0));
        let projection = single(&[1.0, 0.0, 0.0], -0.5);
        let r = audit_bias(&projection, &data, 0).unwrap();
        assert_eq!((r.unbiased, r.biased_negative, r.biased_positive), (0, 4, 4));
        assert!(r.is_partition());
    }

    #[test]
    fn ambiguous_instances_counted_separately() {
        // (1,0,*) and (0,1,*) land exactly on the boundary
        let m = single(&[1.0, 1.0, 0.0], -1.0);
        let r = audit_bias(&m, &cube(3), 2).unwrap();
        assert_eq!(r.ambiguous, 4);
        assert!(r.is_partition());
        assert_eq!(r.total, 8);
    }

    #[test]
    fn text_has_three_count_columns() {
        let text = BiasAuditReport::from_counts(1, 864, 290, 103, 0).render_text();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap().split_whitespace().collect::<Vec<_>>(), ["Unbiased", "Negative", "Positive"]);
        assert_eq!(lines.next().unwrap().split_whitespace().collect::<Vec<_>>(), ["864", "290", "103"]);
    }

    #[test]
    fn rejects_bad_protected() {
        assert!(audit_bias(&single(&[1.0], 0.5), &cube(1), 1).is_err());
    }
}
