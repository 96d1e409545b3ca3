use std::fmt::Write;

use crate::error::Result;
use crate::model::{Decision, DenseLayer, NeuralModel};
use crate::oracle::PartialAssignment;
use crate::scalar::Scalar;

/// Writes the flip query as an SMT-LIB2 script over linear real arithmetic.
///
/// Inputs `x0..x{n-1}` are reals restricted to {0, 1}; hidden unit `u` of
/// hidden layer `l` is `h{l}_{u}` defined through an `ite` max-encoding of
/// ReLU; `out` is the logit. The script asserts the fixed literals and the
/// negated decision (`out < 0` when `d` is positive, `out >= 0` otherwise),
/// so it is satisfiable iff some completion flips the decision.
pub fn export_smtlib<T: Scalar>(
    model: &NeuralModel<T>,
    partial: &PartialAssignment,
    d: Decision,
) -> Result<String> {
    model.check_width(partial.len(), "partial assignment")?;
    let n = model.input_width();
    let mut s = String::new();
    let w = &mut s;

    let _ = writeln!(w, "; flip query: is some completion predicted {}?", d.flipped());
    let _ = writeln!(w, "; fixed literals: {partial}");
    let _ = writeln!(w, "(set-logic QF_LRA)");
    for i in 0..n {
        let _ = writeln!(w, "(declare-fun x{i} () Real)");
    }
    for i in 0..n {
        let _ = writeln!(w, "(assert (or (= x{i} 0.0) (= x{i} 1.0)))");
    }

    let mut inputs: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let last = model.layers().len() - 1;
    for (l, layer) in model.layers().iter().enumerate() {
        if l < last {
            let mut names = Vec::with_capacity(layer.outputs());
            for u in 0..layer.outputs() {
                let name = format!("h{l}_{u}");
                let lin = linear_term(layer, u, &inputs);
                let _ = writeln!(w, "(declare-fun {name} () Real)");
                let _ = writeln!(w, "(assert (= {name} (ite (>= {lin} 0.0) {lin} 0.0)))");
                names.push(name);
            }
            inputs = names;
        } else {
            let _ = writeln!(w, "(declare-fun out () Real)");
            let _ = writeln!(w, "(assert (= out {}))", linear_term(layer, 0, &inputs));
        }
    }

    for lit in partial.fixed_literals() {
        let v = if lit.value { "1.0" } else { "0.0" };
        let _ = writeln!(w, "(assert (= x{} {v}))", lit.feature);
    }
    let _ = match d {
        Decision::Positive => writeln!(w, "(assert (< out 0.0))"),
        Decision::Negative => writeln!(w, "(assert (>= out 0.0))"),
    };
    let _ = writeln!(w, "(check-sat)");
    let _ = writeln!(w, "(exit)");
    Ok(s)
}

fn linear_term<T: Scalar>(layer: &DenseLayer<T>, unit: usize, inputs: &[String]) -> String {
    let mut t = String::from("(+ ");
    t.push_str(&real_literal(layer.bias()[unit].to_f64_lossy()));
    for (weight, name) in layer.row(unit).iter().zip(inputs) {
        let _ = write!(t, " (* {} {name})", real_literal(weight.to_f64_lossy()));
    }
    t.push(')');
    t
}

/// SMT-LIB decimal: no exponent, negatives as `(- d)`.
pub(crate) fn real_literal(v: f64) -> String {
    // Display for f64 never uses exponent notation and round-trips.
    let mut digits = format!("{}", v.abs());
    if !digits.contains('.') {
        digits.push_str(".0");
    }
    if v.is_sign_negative() && v != 0.0 {
        format!("(- {digits})")
    } else {
        digits
    }
}
