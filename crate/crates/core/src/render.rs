//! Plain-language rendering of explanations.

use std::fmt::Write;

use crate::axp::Explanation;
use crate::model::{Decision, Literal};
use crate::schema::FeatureSchema;

/// (value = 1, value = 0) statements for the survey features, keyed by name.
const SURVEY_STATEMENTS: [(&str, &str, &str); 19] = [
    ("age_over_31", "is older than 31", "is 31 or younger"),
    ("male", "is male", "is not male"),
    ("self_employed", "is self-employed", "is not self-employed"),
    (
        "family_history",
        "has a family history of mental health issues",
        "has no family history of mental health issues",
    ),
    ("small_company", "works with a small number of people", "does not work with a small number of people"),
    ("remote_work", "works remotely", "does not work remotely"),
    ("tech_company", "works in a tech company", "does not work in a tech company"),
    ("benefits", "knows the benefits provided", "does not know the benefits provided"),
    ("care_options", "knows the care options", "does not know the care options"),
    ("wellness_program", "knows about the wellness program", "does not know about the wellness program"),
    ("seek_help", "knows how to seek help at the workplace", "does not know how to seek help at the workplace"),
    (
        "anonymity",
        "anonymity is protected when using mental health resources",
        "anonymity is not known to be protected when using mental health resources",
    ),
    (
        "easy_leave",
        "it is easy to take leave for mental health conditions",
        "it is not easy to take leave for mental health conditions",
    ),
    (
        "mental_health_consequence",
        "expects negative consequences from discussing mental health with the employer",
        "does not expect negative consequences from discussing mental health with the employer",
    ),
    (
        "phys_health_consequence",
        "expects negative consequences from discussing physical health with the employer",
        "does not expect negative consequences from discussing physical health with the employer",
    ),
    ("coworkers", "could discuss mental health with some coworkers", "could not discuss mental health with coworkers"),
    ("supervisor", "could discuss mental health with a supervisor", "could not discuss mental health with a supervisor"),
    (
        "mental_vs_physical",
        "believes the employer treats mental health as seriously as physical health",
        "does not believe the employer treats mental health as seriously as physical health",
    ),
    (
        "obs_consequence",
        "has observed negative consequences for coworkers with mental health conditions",
        "has not observed negative consequences for coworkers with mental health conditions",
    ),
];

/// Statement for one literal. Survey features use fixed phrasing; other
/// schemas fall back to the question text with an explicit answer.
pub fn describe_literal(schema: &FeatureSchema, literal: Literal) -> String {
    let name = schema.name(literal.feature);
    if let Some((_, yes, no)) = SURVEY_STATEMENTS.iter().find(|(n, _, _)| *n == name) {
        return if literal.value { yes } else { no }.to_string();
    }
    let question = schema.question(literal.feature);
    let subject = if question.is_empty() { name } else { question };
    let answer = if literal.value { "yes" } else { "no" };
    format!("answered {answer} to \"{subject}\"")
}

/// `x3 = 1: has a family history of mental health issues`
pub fn literal_line(schema: &FeatureSchema, literal: Literal) -> String {
    format!(
        "x{} = {}: {}",
        literal.feature,
        u8::from(literal.value),
        describe_literal(schema, literal)
    )
}

pub fn outcome_phrase(d: Decision) -> &'static str {
    match d {
        Decision::Positive => "predicted to seek treatment",
        Decision::Negative => "predicted not to seek treatment",
    }
}

/// Decision, conjunction form, and one bullet per literal.
pub fn render_explanation(schema: &FeatureSchema, xp: &Explanation) -> String {
    let mut s = String::new();
    let who = match xp.instance_index {
        Some(i) => format!("Individual {i}"),
        None => "The individual".to_string(),
    };
    let _ = writeln!(s, "decision: {}", xp.decision);
    let _ = writeln!(s, "XP = {{{}}}", xp.conjunction());
    if xp.is_empty() {
        let _ = writeln!(s, "{who} is {} regardless of any feature.", outcome_phrase(xp.decision));
        return s;
    }
    let _ = writeln!(s, "{who} is {} because:", outcome_phrase(xp.decision));
    for &l in &xp.literals {
        let _ = writeln!(s, "  - {}", literal_line(schema, l));
    }
    s
}
