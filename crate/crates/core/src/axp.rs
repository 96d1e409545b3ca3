//! Minimal abductive explanations (AXPs).
//!
//! An explanation of a decision is a subset of the instance's literals such
//! that every instance agreeing on those literals gets the same decision,
//! and no literal can be dropped without losing that guarantee.
//!
//! [`compute_explanation`] is the deletion-based procedure: start from the
//! full instance, try dropping each literal in turn, and put it back
//! whenever the oracle finds a completion that flips the decision.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Decision, Instance, Literal, NeuralModel};
use crate::oracle::{exists_counterexample, PartialAssignment};
use crate::scalar::Scalar;
use crate::schema::FeatureSchema;

/// A minimal sufficient set of literals for one decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Explanation {
    pub instance_index: Option<usize>,
    pub decision: Decision,
    /// Sorted by feature index.
    pub literals: Vec<Literal>,
}

impl Explanation {
    /// vars(XP).
    pub fn features(&self) -> Vec<usize> {
        self.literals.iter().map(|l| l.feature).collect()
    }

    pub fn contains_feature(&self, feature: usize) -> bool {
        self.literals.iter().any(|l| l.feature == feature)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn with_index(mut self, index: usize) -> Self {
        self.instance_index = Some(index);
        self
    }

    /// Conjunction form, e.g. `x3 ∧ x7 ∧ ¬x9`; `⊤` for the empty explanation.
    pub fn conjunction(&self) -> String {
        if self.literals.is_empty() {
            return "⊤".into();
        }
        self.literals
            .iter()
            .map(Literal::to_string)
            .collect::<Vec<_>>()
            .join(" ∧ ")
    }

    pub fn to_record(&self, schema: &FeatureSchema) -> ExplanationRecord {
        ExplanationRecord {
            instance_index: self.instance_index,
            decision: self.decision,
            literals: self
                .literals
                .iter()
                .map(|l| NamedLiteral {
                    feature: l.feature,
                    name: schema.name(l.feature).to_string(),
                    value: u8::from(l.value),
                })
                .collect(),
            conjunction: self.conjunction(),
        }
    }
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.conjunction())
    }
}

/// Serialized form of an [`Explanation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplanationRecord {
    pub instance_index: Option<usize>,
    pub decision: Decision,
    pub literals: Vec<NamedLiteral>,
    pub conjunction: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedLiteral {
    pub feature: usize,
    pub name: String,
    pub value: u8,
}

/// Order in which literals are tried for removal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FeatureOrder {
    /// x0, x1, ... left to right.
    #[default]
    Ascending,
    /// Smallest total absolute first-layer weight first, ties by index.
    WeightMagnitude,
    Custom(Vec<usize>),
}

impl FeatureOrder {
    pub fn resolve<T: Scalar>(&self, model: &NeuralModel<T>) -> Result<Vec<usize>> {
        let n = model.input_width();
        match self {
            FeatureOrder::Ascending => Ok((0..n).collect()),
            FeatureOrder::WeightMagnitude => {
                let mags = model.input_weight_magnitudes();
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| {
                    mags[a]
                        .partial_cmp(&mags[b])
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(a.cmp(&b))
                });
                Ok(order)
            }
            FeatureOrder::Custom(order) => {
                let mut seen = vec![false; n];
                for &i in order {
                    if i >= n || std::mem::replace(&mut seen[i], true) {
                        return Err(Error::Config(format!(
                            "order must be a permutation of 0..{n}"
                        )));
                    }
                }
                if order.len() != n {
                    return Err(Error::Config(format!("order must be a permutation of 0..{n}")));
                }
                Ok(order.clone())
            }
        }
    }
}

impl FromStr for FeatureOrder {
    type Err = Error;

    /// `ascending`, `weight`, or a comma-separated permutation such as `3,0,1,2`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ascending" | "asc" => Ok(FeatureOrder::Ascending),
            "weight" | "magnitude" => Ok(FeatureOrder::WeightMagnitude),
            list => list
                .split(',')
                .map(|t| {
                    let t = t.trim();
                    t.strip_prefix('x')
                        .unwrap_or(t)
                        .parse::<usize>()
                        .map_err(|_| Error::Config(format!("bad feature order entry `{t}`")))
                })
                .collect::<Result<Vec<_>>>()
                .map(FeatureOrder::Custom),
        }
    }
}

/// One removal attempt; `necessary` mirrors the ⊤/⊥ outcome of the flip query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub feature: usize,
    /// Partial assignment queried, with the tested feature freed.
    pub query: String,
    pub necessary: bool,
}

fn check_subset(n: usize, subset: &[usize]) -> Result<()> {
    match subset.iter().find(|&&i| i >= n) {
        Some(i) => Err(Error::Schema(format!("feature {i} outside 0..{n}"))),
        None => Ok(()),
    }
}

/// Whether fixing the instance's literals on `subset` forces its decision.
pub fn is_sufficient<T: Scalar>(
    model: &NeuralModel<T>,
    instance: &Instance,
    subset: &[usize],
) -> Result<bool> {
    check_subset(instance.len(), subset)?;
    let d = model.predict(instance)?;
    let partial = PartialAssignment::restrict(instance, subset.iter().copied());
    Ok(!exists_counterexample(model, &partial, d)?.flips)
}

/// Deletion-based AXP computation over `order`.
pub fn compute_explanation<T: Scalar>(
    model: &NeuralModel<T>,
    instance: &Instance,
    order: &[usize],
) -> Result<Explanation> {
    let (xp, _) = explain(model, instance, &[], order, false)?;
    Ok(xp.expect("the full instance is always sufficient"))
}

/// Like [`compute_explanation`], also returning each removal step.
pub fn compute_explanation_traced<T: Scalar>(
    model: &NeuralModel<T>,
    instance: &Instance,
    order: &[usize],
) -> Result<(Explanation, Vec<TraceStep>)> {
    let (xp, trace) = explain(model, instance, &[], order, true)?;
    Ok((xp.expect("the full instance is always sufficient"), trace))
}

/// First AXP that avoids every feature in `excluded`, or `None` if every
/// AXP of the decision touches `excluded`.
pub fn compute_explanation_excluding<T: Scalar>(
    model: &NeuralModel<T>,
    instance: &Instance,
    excluded: &[usize],
    order: &[usize],
) -> Result<Option<Explanation>> {
    Ok(explain(model, instance, excluded, order, false)?.0)
}

fn explain<T: Scalar>(
    model: &NeuralModel<T>,
    instance: &Instance,
    excluded: &[usize],
    order: &[usize],
    trace: bool,
) -> Result<(Option<Explanation>, Vec<TraceStep>)> {
    let n = model.input_width();
    model.check_width(instance.len(), "instance")?;
    check_subset(n, excluded)?;
    check_subset(n, order)?;
    let d = model.predict(instance)?;

    let mut xp = PartialAssignment::from_instance(instance);
    for &e in excluded {
        xp.free(e);
    }
    if !excluded.is_empty() && exists_counterexample(model, &xp, d)?.flips {
        return Ok((None, Vec::new()));
    }

    let mut steps = Vec::new();
    for &v in order {
        if xp.get(v).is_none() {
            continue;
        }
        xp.free(v);
        let necessary = exists_counterexample(model, &xp, d)?.flips;
        if trace {
            steps.push(TraceStep {
                feature: v,
                query: xp.to_string(),
                necessary,
            });
        }
        if necessary {
            xp.fix(v, instance.get(v));
        }
    }
    let explanation = Explanation {
        instance_index: None,
        decision: d,
        literals: xp.fixed_literals().collect(),
    };
    Ok((Some(explanation), steps))
}

/// A decision is biased when every AXP contains the protected feature,
/// i.e. freeing that feature alone already admits a flip.
pub fn is_biased_decision<T: Scalar>(
    model: &NeuralModel<T>,
    instance: &Instance,
    protected: usize,
) -> Result<bool> {
    check_subset(instance.len(), &[protected])?;
    let rest: Vec<usize> = (0..instance.len()).filter(|&i| i != protected).collect();
    Ok(!is_sufficient(model, instance, &rest)?)
}

/// Re-checks subset relation, sufficiency and minimality of `xp` for `instance`.
pub fn verify_explanation<T: Scalar>(
    model: &NeuralModel<T>,
    instance: &Instance,
    xp: &Explanation,
) -> Result<()> {
    if let Some(l) = xp
        .literals
        .iter()
        .find(|l| l.feature >= instance.len() || instance.get(l.feature) != l.value)
    {
        return Err(Error::InvalidExplanation(format!("literal {l} is not part of the instance")));
    }
    if model.predict(instance)? != xp.decision {
        return Err(Error::InvalidExplanation("decision does not match the model".into()));
    }
    let vars = xp.features();
    if !is_sufficient(model, instance, &vars)? {
        return Err(Error::InvalidExplanation(format!("{xp} is not sufficient")));
    }
    for skip in 0..vars.len() {
        let smaller: Vec<usize> = vars
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| (i != skip).then_some(f))
            .collect();
        if is_sufficient(model, instance, &smaller)? {
            return Err(Error::InvalidExplanation(format!(
                "{xp} is not minimal: x{} can be dropped",
                vars[skip]
            )));
        }
    }
    Ok(())
}
