use crate::error::Result;
use crate::model::NeuralModel;
use crate::oracle::PartialAssignment;
use crate::scalar::{relu, Scalar};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn point(v: T) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn contains(&self, v: T) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

/// Interval bound on the logit over every completion of `partial`.
///
/// Free inputs range over `[0, 1]`, fixed inputs are points. Each affine
/// layer is evaluated in the same left-to-right order as the forward pass,
/// taking for every term the smaller (larger) of `w·lo` and `w·hi`. Float
/// rounding is monotone, so the bound stays sound in floating point: for
/// any completion the forward-pass logit lies in the returned interval.
pub fn bound_logit<T: Scalar>(
    model: &NeuralModel<T>,
    partial: &PartialAssignment,
) -> Result<Interval<T>> {
    model.check_width(partial.len(), "partial assignment")?;
    let mut scratch = BoundScratch::default();
    Ok(scratch.propagate(model, partial.states()))
}

#[derive(Debug, Default)]
pub(crate) struct BoundScratch<T> {
    cur: Vec<Interval<T>>,
    next: Vec<Interval<T>>,
}

impl<T: Scalar> BoundScratch<T> {
    pub(crate) fn propagate(&mut self, model: &NeuralModel<T>, states: &[Option<bool>]) -> Interval<T> {
        self.cur.clear();
        self.cur.extend(states.iter().map(|s| match s {
            Some(true) => Interval::point(T::one()),
            Some(false) => Interval::point(T::zero()),
            None => Interval {
                lo: T::zero(),
                hi: T::one(),
            },
        }));
        let last = model.layers().len() - 1;
        for (i, layer) in model.layers().iter().enumerate() {
            self.next.clear();
            for (row, &b) in layer.rows().zip(layer.bias()) {
                let mut lo = b;
                let mut hi = b;
                for (&w, x) in row.iter().zip(&self.cur) {
                    let a = w * x.lo;
                    let c = w * x.hi;
                    if a <= c {
                        lo = lo + a;
                        hi = hi + c;
                    } else {
                        lo = lo + c;
                        hi = hi + a;
                    }
                }
                let iv = if i < last {
                    Interval { lo: relu(lo), hi: relu(hi) }
                } else {
                    Interval { lo, hi }
                };
                self.next.push(iv);
            }
            std::mem::swap(&mut self.cur, &mut self.next);
        }
        self.cur[0]
    }
}
