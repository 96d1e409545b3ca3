//! Dataset-level audits built on per-decision explanation queries.

mod bias;
mod impact;
mod mining;

pub use bias::{audit_bias, BiasAuditReport};
pub use impact::{feature_impact, FeatureImpactRow, FeatureImpactTable, InstanceCriticality};
pub use mining::{mine_combinations, Combination, CombinationReport, MinCount, MiningConfig};

use crate::error::{Error, Result};
use crate::model::{Instance, NeuralModel};
use crate::oracle::{exists_counterexample, PartialAssignment};
use crate::scalar::Scalar;

/// Features present in every AXP of the instance's decision: those whose
/// release alone (all others fixed) admits a flip.
pub fn critical_features<T: Scalar>(model: &NeuralModel<T>, instance: &Instance) -> Result<Vec<usize>> {
    let d = model.predict(instance)?;
    let mut partial = PartialAssignment::from_instance(instance);
    let mut critical = Vec::new();
    for v in 0..instance.len() {
        partial.free(v);
        if exists_counterexample(model, &partial, d)?.flips {
            critical.push(v);
        }
        partial.fix(v, instance.get(v));
    }
    Ok(critical)
}

/// Splits a per-instance result into "audited" vs "ambiguous"; other errors abort.
pub(crate) fn tolerate_ambiguity<R>(r: Result<R>) -> Result<Option<R>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Ambiguous { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub(crate) fn ratio(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn critical_examples() {
        let projection = single(&[1.0, 0.0, 0.0], -0.5);
        let constant = single(&[0.0, 0.0, 0.0], -1.0);
        for x in cube(3) {
            assert_eq!(critical_features(&projection, &x).unwrap(), vec![0]);
            assert!(critical_features(&constant, &x).unwrap().is_empty());
        }
        let and = single(&[1.0, 1.0], -1.5);
        assert_eq!(critical_features(&and, &"11".parse().unwrap()).unwrap(), vec![0, 1]);
    }
}
