//! Portable weights document (JSON).
//!
//! ```json
//! {
//!   "n": 2,
//!   "feature_names": ["a", "b"],
//!   "questions": ["A?", "B?"],
//!   "protected_index": 0,
//!   "layers": [{"weights": [[1.0, 1.0]], "bias": [-1.5]}],
//!   "activation": "relu",
//!   "output_rule": "logit_ge_0"
//! }
//! ```
//!
//! `weights` is row-major: row `u` holds the incoming weights of unit `u`.
//! Floats are written in shortest round-trip form and parsed with correct
//! rounding, so save/load is bit-exact for `f64` models.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DenseLayer, NeuralModel};
use crate::scalar::Scalar;
use crate::schema::FeatureSchema;

pub const ACTIVATION_RELU: &str = "relu";
pub const OUTPUT_RULE: &str = "logit_ge_0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortableModel {
    pub n: usize,
    pub feature_names: Vec<String>,
    pub questions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protected_index: Option<usize>,
    pub layers: Vec<PortableLayer>,
    pub activation: String,
    pub output_rule: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortableLayer {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl PortableModel {
    pub fn into_model<T: Scalar>(self) -> Result<NeuralModel<T>> {
        if self.activation != ACTIVATION_RELU {
            return Err(Error::parse(
                "model document",
                format!("unsupported activation `{}`", self.activation),
            ));
        }
        if self.output_rule != OUTPUT_RULE {
            return Err(Error::parse(
                "model document",
                format!("unsupported output rule `{}`", self.output_rule),
            ));
        }
        if self.feature_names.len() != self.n {
            return Err(Error::Dimension {
                context: "feature_names".into(),
                expected: self.n,
                found: self.feature_names.len(),
            });
        }
        let schema = FeatureSchema::new(self.feature_names, self.questions, self.protected_index)?;
        let mut layers = Vec::with_capacity(self.layers.len());
        for (i, layer) in self.layers.into_iter().enumerate() {
            let finite = layer.weights.iter().flatten().chain(&layer.bias).all(|v| v.is_finite());
            if !finite {
                return Err(Error::NonFinite { layer: i });
            }
            let rows = layer
                .weights
                .into_iter()
                .map(|r| r.into_iter().map(T::from_f64_lossy).collect())
                .collect();
            let bias = layer.bias.into_iter().map(T::from_f64_lossy).collect();
            layers.push(DenseLayer::new(rows, bias).map_err(|e| match e {
                Error::Dimension { context, expected, found } => Error::Dimension {
                    context: format!("layer {i}: {context}"),
                    expected,
                    found,
                },
                other => other,
            })?);
        }
        NeuralModel::new(schema, layers)
    }

    pub fn from_model<T: Scalar>(model: &NeuralModel<T>) -> Self {
        let schema = model.schema();
        Self {
            n: schema.len(),
            feature_names: schema.names().to_vec(),
            questions: schema.questions().to_vec(),
            protected_index: schema.protected(),
            layers: model
                .layers()
                .iter()
                .map(|l| PortableLayer {
                    weights: l.rows().map(|r| r.iter().map(|v| v.to_f64_lossy()).collect()).collect(),
                    bias: l.bias().iter().map(|v| v.to_f64_lossy()).collect(),
                })
                .collect(),
            activation: ACTIVATION_RELU.into(),
            output_rule: OUTPUT_RULE.into(),
        }
    }
}

pub fn parse_model<T: Scalar>(text: &str) -> Result<NeuralModel<T>> {
    let doc: PortableModel =
        serde_json::from_str(text).map_err(|e| Error::parse("model document", e))?;
    doc.into_model()
}

pub fn load_model<T: Scalar>(path: impl AsRef<Path>) -> Result<NeuralModel<T>> {
    parse_model(&fs::read_to_string(path)?)
}

pub fn model_to_json<T: Scalar>(model: &NeuralModel<T>) -> String {
    serde_json::to_string_pretty(&PortableModel::from_model(model)).expect("plain data serializes")
}

pub fn save_model<T: Scalar>(model: &NeuralModel<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut text = model_to_json(model);
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
