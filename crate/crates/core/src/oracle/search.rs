use crate::error::{Error, Result};
use crate::model::{Decision, Instance, NeuralModel};
use crate::oracle::bounds::{BoundScratch, Interval};
use crate::oracle::{OracleAnswer, PartialAssignment};
use crate::scalar::Scalar;

/// Decides whether some completion of `partial` is predicted differently from `d`.
///
/// Depth-first branch and bound over the free features, most influential
/// first (largest total absolute first-layer weight). A subtree is pruned
/// once its logit interval lies at least the ambiguity margin on `d`'s side
/// of zero. The first counterexample found is returned as the witness, so
/// witnesses are deterministic.
///
/// A completion whose logit falls inside the ambiguity margin is never
/// reported as a flip. If no genuine flip exists but such a completion was
/// reached, the query fails with [`Error::Ambiguous`].
pub fn exists_counterexample<T: Scalar>(
    model: &NeuralModel<T>,
    partial: &PartialAssignment,
    d: Decision,
) -> Result<OracleAnswer> {
    model.check_width(partial.len(), "partial assignment")?;
    let magnitudes = model.input_weight_magnitudes();
    let mut order = partial.free_features();
    order.sort_by(|&a, &b| {
        magnitudes[b]
            .partial_cmp(&magnitudes[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut search = Search {
        model,
        decision: d,
        margin: T::ambiguity_margin(),
        order,
        states: partial.states().to_vec(),
        scratch: BoundScratch::default(),
        ambiguous: None,
    };
    let root = search.bound();
    match search.descend(0, root) {
        Some(w) => Ok(OracleAnswer::flip(w)),
        None => match search.ambiguous {
            Some(logit) => Err(Error::Ambiguous {
                logit: logit.to_f64_lossy(),
            }),
            None => Ok(OracleAnswer::no_flip()),
        },
    }
}

struct Search<'m, T> {
    model: &'m NeuralModel<T>,
    decision: Decision,
    margin: T,
    order: Vec<usize>,
    states: Vec<Option<bool>>,
    scratch: BoundScratch<T>,
    ambiguous: Option<T>,
}

impl<T: Scalar> Search<'_, T> {
    fn bound(&mut self) -> Interval<T> {
        self.scratch.propagate(self.model, &self.states)
    }

    /// No completion in this interval can flip or be ambiguous.
    fn safe(&self, iv: Interval<T>) -> bool {
        match self.decision {
            Decision::Positive => iv.lo >= self.margin,
            Decision::Negative => iv.hi <= -self.margin,
        }
    }

    /// Lower is more promising for finding a flip.
    fn flip_score(&self, iv: Interval<T>) -> T {
        match self.decision {
            Decision::Positive => iv.lo,
            Decision::Negative => -iv.hi,
        }
    }

    fn descend(&mut self, depth: usize, iv: Interval<T>) -> Option<Instance> {
        if self.safe(iv) {
            return None;
        }
        if depth == self.order.len() {
            return self.leaf();
        }
        let feature = self.order[depth];

        self.states[feature] = Some(false);
        let iv0 = self.bound();
        self.states[feature] = Some(true);
        let iv1 = self.bound();

        let children = if self.flip_score(iv1) < self.flip_score(iv0) {
            [(true, iv1), (false, iv0)]
        } else {
            [(false, iv0), (true, iv1)]
        };
        for (value, child) in children {
            self.states[feature] = Some(value);
            if let Some(w) = self.descend(depth + 1, child) {
                self.states[feature] = None;
                return Some(w);
            }
        }
        self.states[feature] = None;
        None
    }

    fn leaf(&mut self) -> Option<Instance> {
        let values: Vec<bool> = self.states.iter().map(|s| s.expect("all fixed at leaf")).collect();
        let logit = self.model.logit_unchecked(&values);
        if logit.abs() < self.margin {
            self.ambiguous.get_or_insert(logit);
            return None;
        }
        (Decision::from_logit(logit) != self.decision).then(|| Instance::new(values))
    }
}
