//! Frequent critical-combination mining.
//!
//! A feature set S is counted for a decision when S is contained in every
//! AXP of it, which is exactly when S is a subset of its critical-feature
//! set. Counting is therefore plain itemset support over the critical sets,
//! and support is anti-monotone, so apriori candidate pruning is exact.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::audit::{ratio, FeatureImpactTable};
use crate::error::{Error, Result};
use crate::model::Decision;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MinCount {
    Absolute(usize),
    /// Fraction of the outcome class, rounded up, at least 1.
    Fraction(f64),
}

impl MinCount {
    fn threshold(self, class_size: usize) -> usize {
        match self {
            MinCount::Absolute(n) => n.max(1),
            MinCount::Fraction(f) => ((f * class_size as f64).ceil() as usize).max(1),
        }
    }
}

impl std::str::FromStr for MinCount {
    type Err = Error;

    /// `12` is absolute, `5%` or `0.05` a fraction of the outcome class.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("bad minimum count `{s}`"));
        if let Some(p) = s.strip_suffix('%') {
            let v: f64 = p.trim().parse().map_err(|_| bad())?;
            return Ok(MinCount::Fraction(v / 100.0));
        }
        if let Ok(n) = s.parse::<usize>() {
            return Ok(MinCount::Absolute(n));
        }
        match s.parse::<f64>() {
            Ok(f) if (0.0..=1.0).contains(&f) => Ok(MinCount::Fraction(f)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningConfig {
    /// Restrict to one predicted outcome; both when `None`.
    pub outcome: Option<Decision>,
    pub max_size: usize,
    pub min_count: MinCount,
    /// Only search among the k most frequently critical features of each outcome.
    pub top_k: Option<usize>,
}

impl Default for MiningConfig {
    fn default() -> Self {
        Self {
            outcome: None,
            max_size: 3,
            min_count: MinCount::Fraction(0.05),
            top_k: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Combination {
    pub outcome: Decision,
    pub features: Vec<usize>,
    pub count: usize,
    /// count / audited decisions.
    pub whole_ratio: f64,
    /// count / decisions with this outcome.
    pub specific_ratio: f64,
}

impl Combination {
    pub fn conjunction(&self) -> String {
        self.features
            .iter()
            .map(|f| format!("x{f}"))
            .collect::<Vec<_>>()
            .join(" ∧ ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinationReport {
    pub audited: usize,
    pub config: MiningConfig,
    pub combinations: Vec<Combination>,
}

impl CombinationReport {
    pub fn count_of(&self, outcome: Decision, features: &[usize]) -> usize {
        self.combinations
            .iter()
            .find(|c| c.outcome == outcome && c.features == features)
            .map_or(0, |c| c.count)
    }

    pub fn render_text(&self) -> String {
        let width = self
            .combinations
            .iter()
            .map(|c| c.conjunction().chars().count())
            .max()
            .unwrap_or(0)
            .max(12);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<8}  {:<width$}  {:>6}  {:>7}  {:>8}",
            "Outcome", "Combination", "Count", "Whole", "Specific"
        );
        for c in &self.combinations {
            let conj = c.conjunction();
            let pad = width - conj.chars().count();
            let _ = writeln!(
                s,
                "{:<8}  {conj}{:pad$}  {:>6}  {:>6.2}%  {:>7.2}%",
                c.outcome.to_string(),
                "",
                c.count,
                100.0 * c.whole_ratio,
                100.0 * c.specific_ratio
            );
        }
        s
    }
}

/// Frequent critical combinations of size `1..=max_size`, per outcome.
///
/// Output is ordered by outcome, then size, then descending count, then features.
pub fn mine_combinations(impact: &FeatureImpactTable, config: &MiningConfig) -> Result<CombinationReport> {
    if config.max_size < 1 {
        return Err(Error::Config("max_size must be at least 1".into()));
    }
    let outcomes: Vec<Decision> = match config.outcome {
        Some(d) => vec![d],
        None => Decision::ALL.to_vec(),
    };
    let mut combinations = Vec::new();
    for outcome in outcomes {
        let class_size = impact.class_size(outcome);
        let threshold = config.min_count.threshold(class_size);
        let transactions: Vec<HashSet<usize>> = impact
            .instances
            .iter()
            .filter(|i| i.decision == outcome)
            .map(|i| i.critical.iter().copied().collect())
            .collect();

        let mut allowed: Vec<usize> = (0..impact.rows.len()).collect();
        if let Some(k) = config.top_k {
            allowed.sort_by_key(|&f| (std::cmp::Reverse(impact.critical_count(f, outcome)), f));
            allowed.truncate(k);
            allowed.sort_unstable();
        }

        let mut level: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for &f in &allowed {
            let count = transactions.iter().filter(|t| t.contains(&f)).count();
            if count >= threshold {
                level.insert(vec![f], count);
            }
        }
        let mut size = 1;
        loop {
            let mut found: Vec<(Vec<usize>, usize)> = level.iter().map(|(k, &v)| (k.clone(), v)).collect();
            found.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            combinations.extend(found.into_iter().map(|(features, count)| Combination {
                outcome,
                features,
                count,
                whole_ratio: ratio(count, impact.audited),
                specific_ratio: ratio(count, class_size),
            }));
            if size == config.max_size || level.is_empty() {
                break;
            }
            size += 1;
            level = next_level(&level, &transactions, threshold);
        }
    }
    Ok(CombinationReport {
        audited: impact.audited,
        config: config.clone(),
        combinations,
    })
}

/// Joins frequent (k-1)-sets sharing a (k-2)-prefix, drops candidates with an
/// infrequent (k-1)-subset, and counts the survivors.
fn next_level(
    prev: &BTreeMap<Vec<usize>, usize>,
    transactions: &[HashSet<usize>],
    threshold: usize,
) -> BTreeMap<Vec<usize>, usize> {
    let keys: Vec<&Vec<usize>> = prev.keys().collect();
    let mut next = BTreeMap::new();
    for (i, a) in keys.iter().enumerate() {
        for b in &keys[i + 1..] {
            let k = a.len();
            if a[..k - 1] != b[..k - 1] {
                // keys are sorted, so no later b shares a's prefix
                break;
            }
            let mut candidate = a.to_vec();
            candidate.push(b[k - 1]);
            let all_subsets_frequent = (0..candidate.len()).all(|skip| {
                let sub: Vec<usize> = candidate
                    .iter()
                    .enumerate()
                    .filter_map(|(j, &f)| (j != skip).then_some(f))
                    .collect();
                prev.contains_key(&sub)
            });
            if !all_subsets_frequent {
                continue;
            }
            let count = transactions
                .iter()
                .filter(|t| candidate.iter().all(|f| t.contains(f)))
                .count();
            if count >= threshold {
                next.insert(candidate, count);
            }
        }
    }
    next
}
