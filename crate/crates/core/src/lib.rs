//! Formal abductive explanations for ReLU classifiers over Boolean features,
//! and the decision audits built on them: protected-attribute bias,
//! per-feature criticality, and critical feature combinations.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the crate
//! root exposes `f64` aliases, which the CLI uses throughout.

pub mod audit;
pub mod axp;
mod error;
pub mod ingest;
pub mod model;
pub mod oracle;
pub mod portable;
pub mod render;
mod scalar;
pub mod schema;

pub use axp::{
    compute_explanation, compute_explanation_excluding, compute_explanation_traced, is_biased_decision,
    is_sufficient, verify_explanation, Explanation, FeatureOrder,
};
pub use error::{Error, Result};
pub use model::{Decision, DenseLayer, Instance, Literal, NeuralModel};
pub use oracle::{bound_logit, exhaustive_oracle, exists_counterexample, export_smtlib, OracleAnswer, PartialAssignment};
pub use portable::{load_model, parse_model, save_model, PortableModel};
pub use scalar::Scalar;
pub use schema::FeatureSchema;

/// Double-precision model; the default arithmetic regime.
pub type Model = NeuralModel<f64>;
pub type Layer = DenseLayer<f64>;
pub type LogitInterval = oracle::Interval<f64>;

pub type ModelF32 = NeuralModel<f32>;
pub type LayerF32 = DenseLayer<f32>;
