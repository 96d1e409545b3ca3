//! Complete decision procedure for "does any completion of these fixed
//! literals flip the decision?", plus an exhaustive reference oracle and an
//! SMT-LIB export of the same query.

mod bounds;
mod exhaustive;
mod search;
mod smtlib;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Literal};

pub use bounds::{bound_logit, Interval};
pub use exhaustive::{exhaustive_oracle, exhaustive_oracle_with_cap, DEFAULT_ENUMERATION_CAP};
pub use search::exists_counterexample;
pub use smtlib::export_smtlib;

/// Per-feature state of a query: fixed to a value, or free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartialAssignment(Vec<Option<bool>>);

impl PartialAssignment {
    pub fn all_free(n: usize) -> Self {
        Self(vec![None; n])
    }

    /// Every feature fixed to the instance's value.
    pub fn from_instance(instance: &Instance) -> Self {
        Self(instance.values().iter().map(|&b| Some(b)).collect())
    }

    /// Fixes the instance's literals on `fixed` and frees the rest.
    pub fn restrict(instance: &Instance, fixed: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::all_free(instance.len());
        for i in fixed {
            p.0[i] = Some(instance.get(i));
        }
        p
    }

    pub fn from_literals(n: usize, literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut p = Self::all_free(n);
        for l in literals {
            if l.feature >= n {
                return Err(Error::Schema(format!("literal on feature {} outside 0..{n}", l.feature)));
            }
            p.0[l.feature] = Some(l.value);
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, feature: usize) -> Option<bool> {
        self.0[feature]
    }

    pub fn states(&self) -> &[Option<bool>] {
        &self.0
    }

    pub fn fix(&mut self, feature: usize, value: bool) {
        self.0[feature] = Some(value);
    }

    pub fn free(&mut self, feature: usize) {
        self.0[feature] = None;
    }

    /// The free set V′.
    pub fn free_features(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i].is_none()).collect()
    }

    pub fn fixed_literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(feature, v)| v.map(|value| Literal { feature, value }))
    }

    pub fn is_completed_by(&self, instance: &Instance) -> bool {
        instance.len() == self.len()
            && self
                .0
                .iter()
                .zip(instance.values())
                .all(|(s, &v)| s.is_none_or(|f| f == v))
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Some(true) => "1",
                Some(false) => "0",
                None => "?",
            })?;
        }
        Ok(())
    }
}

/// Result of an existential flip query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleAnswer {
    pub flips: bool,
    pub witness: Option<Instance>,
}

impl OracleAnswer {
    pub(crate) fn flip(witness: Instance) -> Self {
        Self {
            flips: true,
            witness: Some(witness),
        }
    }

    pub(crate) fn no_flip() -> Self {
        Self {
            flips: false,
            witness: None,
        }
    }
}
