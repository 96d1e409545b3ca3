//! Feature schemas: names, question text, and the protected attribute.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Describes the Boolean features a model consumes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    names: Vec<String>,
    questions: Vec<String>,
    protected: Option<usize>,
}

impl FeatureSchema {
    pub fn new(
        names: Vec<String>,
        questions: Vec<String>,
        protected: Option<usize>,
    ) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Schema("schema must declare at least one feature".into()));
        }
        if questions.len() != names.len() {
            return Err(Error::Dimension {
                context: "schema questions".into(),
                expected: names.len(),
                found: questions.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.trim().is_empty() {
                return Err(Error::Schema("feature names must be nonempty".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Schema(format!("duplicate feature name `{name}`")));
            }
        }
        if let Some(p) = protected {
            if p >= names.len() {
                return Err(Error::Schema(format!(
                    "protected index {p} out of range for {} features",
                    names.len()
                )));
            }
        }
        Ok(Self {
            names,
            questions,
            protected,
        })
    }

    /// Schema with generated names `x0..x{n-1}` and empty questions.
    pub fn anonymous(n: usize) -> Result<Self> {
        let names = (0..n).map(|i| format!("x{i}")).collect();
        Self::new(names, vec![String::new(); n], None)
    }

    /// The 19-feature Mental Health in Tech survey schema; gender is protected.
    pub fn mental_health_survey() -> Self {
        let (names, questions): (Vec<_>, Vec<_>) = SURVEY_FEATURES
            .iter()
            .map(|(n, q)| (n.to_string(), q.to_string()))
            .unzip();
        Self::new(names, questions, Some(SURVEY_GENDER_INDEX)).expect("built-in schema is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, feature: usize) -> &str {
        &self.names[feature]
    }

    pub fn questions(&self) -> &[String] {
        &self.questions
    }

    pub fn question(&self, feature: usize) -> &str {
        &self.questions[feature]
    }

    pub fn protected(&self) -> Option<usize> {
        self.protected
    }

    pub fn with_protected(mut self, protected: Option<usize>) -> Result<Self> {
        if let Some(p) = protected {
            if p >= self.len() {
                return Err(Error::Schema(format!("protected index {p} out of range")));
            }
        }
        self.protected = protected;
        Ok(self)
    }

    /// Resolves a feature reference: a schema name, `x<i>`, or a bare index.
    pub fn resolve(&self, reference: &str) -> Result<usize> {
        let r = reference.trim();
        if let Some(i) = self.names.iter().position(|n| n == r) {
            return Ok(i);
        }
        let numeric = r.strip_prefix('x').unwrap_or(r);
        match numeric.parse::<usize>() {
            Ok(i) if i < self.len() => Ok(i),
            _ => Err(Error::Config(format!("unknown feature `{reference}`"))),
        }
    }
}

pub(crate) const SURVEY_GENDER_INDEX: usize = 1;

pub(crate) const SURVEY_FEATURES: [(&str, &str); 19] = [
    ("age_over_31", "Is the applicant older than 31?"),
    ("male", "Is the applicant male?"),
    ("self_employed", "Is the applicant self-employed?"),
    ("family_history", "Family history of mental health issues?"),
    ("small_company", "Works with a small number of people?"),
    ("remote_work", "Works remotely?"),
    ("tech_company", "Works in a tech company?"),
    ("benefits", "Aware of provided benefits?"),
    ("care_options", "Aware of care options?"),
    ("wellness_program", "Aware of employee wellness programs?"),
    ("seek_help", "Knows how to seek help?"),
    ("anonymity", "Is anonymity protected if using mental health resources?"),
    ("easy_leave", "Is it easy to take medical leave for mental health?"),
    (
        "mental_health_consequence",
        "Believes discussing mental health with employer has negative consequences?",
    ),
    (
        "phys_health_consequence",
        "Believes discussing physical health with employer has negative consequences?",
    ),
    ("coworkers", "Comfortable discussing mental health with coworkers?"),
    ("supervisor", "Comfortable discussing mental health with supervisors?"),
    (
        "mental_vs_physical",
        "Believes employer treats mental health as seriously as physical health?",
    ),
    (
        "obs_consequence",
        "Has observed negative consequences for coworkers with mental health conditions?",
    ),
];
