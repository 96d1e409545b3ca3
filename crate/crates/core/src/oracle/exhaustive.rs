use crate::error::{Error, Result};
use crate::model::{Decision, Instance, NeuralModel};
use crate::oracle::{OracleAnswer, PartialAssignment};
use crate::scalar::Scalar;

pub const DEFAULT_ENUMERATION_CAP: usize = 22;

/// Reference oracle: enumerates all `2^|free|` completions.
///
/// Completions are visited in ascending binary order over the free features
/// (lowest index = least significant bit). Ambiguity follows the same rule
/// as [`exists_counterexample`](super::exists_counterexample).
pub fn exhaustive_oracle<T: Scalar>(
    model: &NeuralModel<T>,
    partial: &PartialAssignment,
    d: Decision,
) -> Result<OracleAnswer> {
    exhaustive_oracle_with_cap(model, partial, d, DEFAULT_ENUMERATION_CAP)
}

pub fn exhaustive_oracle_with_cap<T: Scalar>(
    model: &NeuralModel<T>,
    partial: &PartialAssignment,
    d: Decision,
    cap: usize,
) -> Result<OracleAnswer> {
    model.check_width(partial.len(), "partial assignment")?;
    let free = partial.free_features();
    if free.len() > cap || free.len() >= 64 {
        return Err(Error::EnumerationCap {
            free: free.len(),
            cap,
        });
    }
    let margin = T::ambiguity_margin();
    let mut values: Vec<bool> = partial.states().iter().map(|s| s.unwrap_or(false)).collect();
    let mut ambiguous = None;
    for mask in 0u64..(1u64 << free.len()) {
        for (bit, &f) in free.iter().enumerate() {
            values[f] = mask >> bit & 1 == 1;
        }
        let logit = model.logit_unchecked(&values);
        if logit.abs() < margin {
            ambiguous.get_or_insert(logit);
        } else if Decision::from_logit(logit) != d {
            return Ok(OracleAnswer::flip(Instance::new(values)));
        }
    }
    match ambiguous {
        Some(logit) => Err(Error::Ambiguous {
            logit: logit.to_f64_lossy(),
        }),
        None => Ok(OracleAnswer::no_flip()),
    }
}
