//! Classifier representation and exact forward evaluation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{relu, Scalar};
use crate::schema::FeatureSchema;

/// A Boolean feature vector; also read as the conjunction of its literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Instance(Vec<bool>);

impl Instance {
    pub fn new(values: Vec<bool>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    /// Builds the instance whose feature `i` is bit `i` of `mask`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Self((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, feature: usize) -> bool {
        self.0[feature]
    }

    pub fn literal(&self, feature: usize) -> Literal {
        Literal {
            feature,
            value: self.0[feature],
        }
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        (0..self.len()).map(|i| self.literal(i))
    }
}

impl From<Vec<bool>> for Instance {
    fn from(v: Vec<bool>) -> Self {
        Self(v)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parses `"1011"` or `"1,0,1,1"` (whitespace ignored).
impl FromStr for Instance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',' && *c != '[' && *c != ']')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse("instance", format!("unexpected character `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            return Err(Error::parse("instance", "empty feature vector"));
        }
        Ok(Self(values))
    }
}

/// A feature paired with its Boolean value (`v` or `¬v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub feature: usize,
    pub value: bool,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value {
            write!(f, "x{}", self.feature)
        } else {
            write!(f, "¬x{}", self.feature)
        }
    }
}

/// Binary model output. `Positive` is the "seeks treatment" class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Negative,
    Positive,
}

impl Decision {
    pub const ALL: [Decision; 2] = [Decision::Negative, Decision::Positive];

    /// Threshold rule shared by prediction and the oracle: `logit >= 0` is positive.
    #[inline]
    pub fn from_logit<T: Scalar>(logit: T) -> Self {
        if logit >= T::zero() {
            Decision::Positive
        } else {
            Decision::Negative
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Decision::Positive
        } else {
            Decision::Negative
        }
    }

    pub fn as_bit(self) -> u8 {
        match self {
            Decision::Negative => 0,
            Decision::Positive => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Decision::Negative => Decision::Positive,
            Decision::Positive => Decision::Negative,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Negative => "negative",
            Decision::Positive => "positive",
        })
    }
}

/// Fully connected layer; `weights` is row-major with one row per output unit.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer<T> {
    inputs: usize,
    weights: Vec<T>,
    bias: Vec<T>,
}

impl<T: Scalar> DenseLayer<T> {
    pub fn new(rows: Vec<Vec<T>>, bias: Vec<T>) -> Result<Self> {
        let inputs = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || inputs == 0 {
            return Err(Error::Schema("layer must have at least one unit and one input".into()));
        }
        if bias.len() != rows.len() {
            return Err(Error::Dimension {
                context: "layer bias".into(),
                expected: rows.len(),
                found: bias.len(),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != inputs) {
            return Err(Error::Dimension {
                context: "layer weight row".into(),
                expected: inputs,
                found: r.len(),
            });
        }
        Ok(Self {
            inputs,
            weights: rows.into_iter().flatten().collect(),
            bias,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.bias.len()
    }

    pub fn bias(&self) -> &[T] {
        &self.bias
    }

    pub fn row(&self, unit: usize) -> &[T] {
        &self.weights[unit * self.inputs..(unit + 1) * self.inputs]
    }

    pub fn weight(&self, unit: usize, input: usize) -> T {
        self.weights[unit * self.inputs + input]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.weights.chunks(self.inputs)
    }

    fn is_finite(&self) -> bool {
        self.weights.iter().chain(&self.bias).all(|v| v.is_finite())
    }

    /// `bias + Σ w·x`, accumulated left to right. Interval propagation relies
    /// on this exact order.
    #[inline]
    pub(crate) fn affine_into(&self, input: &[T], out: &mut Vec<T>) {
        out.clear();
        out.extend(self.rows().zip(&self.bias).map(|(row, &b)| {
            row.iter()
                .zip(input)
                .fold(b, |acc, (&w, &x)| acc + w * x)
        }));
    }
}

/// Feedforward ReLU network with a single output logit.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuralModel<T> {
    schema: FeatureSchema,
    layers: Vec<DenseLayer<T>>,
}

impl<T: Scalar> NeuralModel<T> {
    pub fn new(schema: FeatureSchema, layers: Vec<DenseLayer<T>>) -> Result<Self> {
        let first = layers
            .first()
            .ok_or_else(|| Error::Schema("model must have at least one layer".into()))?;
        if first.inputs() != schema.len() {
            return Err(Error::Dimension {
                context: "first layer input width".into(),
                expected: schema.len(),
                found: first.inputs(),
            });
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[1].inputs() != pair[0].outputs() {
                return Err(Error::Dimension {
                    context: format!("layer {} input width", i + 1),
                    expected: pair[0].outputs(),
                    found: pair[1].inputs(),
                });
            }
        }
        let last = layers.last().expect("nonempty");
        if last.outputs() != 1 {
            return Err(Error::Dimension {
                context: "output layer width".into(),
                expected: 1,
                found: last.outputs(),
            });
        }
        if let Some(layer) = layers.iter().position(|l| !l.is_finite()) {
            return Err(Error::NonFinite { layer });
        }
        Ok(Self { schema, layers })
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn layers(&self) -> &[DenseLayer<T>] {
        &self.layers
    }

    pub fn input_width(&self) -> usize {
        self.schema.len()
    }

    pub(crate) fn check_width(&self, found: usize, context: &str) -> Result<()> {
        if found != self.input_width() {
            return Err(Error::Dimension {
                context: context.into(),
                expected: self.input_width(),
                found,
            });
        }
        Ok(())
    }

    /// Output neuron value before thresholding.
    pub fn logit(&self, instance: &Instance) -> Result<T> {
        self.check_width(instance.len(), "instance")?;
        Ok(self.logit_unchecked(instance.values()))
    }

    pub(crate) fn logit_unchecked(&self, values: &[bool]) -> T {
        let mut cur: Vec<T> = values
            .iter()
            .map(|&b| if b { T::one() } else { T::zero() })
            .collect();
        let mut next = Vec::new();
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            layer.affine_into(&cur, &mut next);
            if i < last {
                next.iter_mut().for_each(|v| *v = relu(*v));
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur[0]
    }

    /// Thresholded decision; errors when the logit is inside the ambiguity margin.
    pub fn predict(&self, instance: &Instance) -> Result<Decision> {
        let logit = self.logit(instance)?;
        if logit.abs() < T::ambiguity_margin() {
            return Err(Error::Ambiguous {
                logit: logit.to_f64_lossy(),
            });
        }
        Ok(Decision::from_logit(logit))
    }

    /// Sum of absolute first-layer weights leaving each input feature.
    pub fn input_weight_magnitudes(&self) -> Vec<T> {
        let first = &self.layers[0];
        (0..first.inputs())
            .map(|j| {
                first
                    .rows()
                    .fold(T::zero(), |acc, row| acc + row[j].abs())
            })
            .collect()
    }
}
