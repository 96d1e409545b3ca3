//! Minimal SMT-LIB2 reader and exact-arithmetic decision procedure for the
//! flip-query scripts: Boolean-domain real inputs, functionally defined
//! intermediate reals, linear arithmetic with `ite`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

pub fn parse(text: &str) -> Vec<Sexp> {
    let cleaned: String = text
        .lines()
        .map(|l| l.split(';').next().unwrap())
        .collect::<Vec<_>>()
        .join("\n");
    let spaced = cleaned.replace('(', " ( ").replace(')', " ) ");
    let mut tokens = spaced.split_whitespace().peekable();
    let mut out = Vec::new();
    while tokens.peek().is_some() {
        out.push(read(&mut tokens));
    }
    out
}

fn read<'a>(tokens: &mut std::iter::Peekable<impl Iterator<Item = &'a str>>) -> Sexp {
    match tokens.next().expect("unexpected end of script") {
        "(" => {
            let mut items = Vec::new();
            while *tokens.peek().expect("unbalanced") != ")" {
                items.push(read(tokens));
            }
            tokens.next();
            Sexp::List(items)
        }
        ")" => panic!("unexpected )"),
        atom => Sexp::Atom(atom.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Num(BigRational),
    Bool(bool),
}

fn decimal(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("numeral");
    let scale = BigInt::from(10).pow(frac.len() as u32);
    BigRational::new(digits, scale)
}

fn eval(e: &Sexp, env: &HashMap<String, BigRational>) -> Value {
    match e {
        Sexp::Atom(a) => match env.get(a) {
            Some(v) => Value::Num(v.clone()),
            None if a == "true" => Value::Bool(true),
            None if a == "false" => Value::Bool(false),
            None => Value::Num(decimal(a)),
        },
        Sexp::List(items) => {
            let Sexp::Atom(op) = &items[0] else { panic!("bad head") };
            let args = &items[1..];
            let num = |i: usize| match eval(&args[i], env) {
                Value::Num(n) => n,
                v => panic!("expected number, got {v:?}"),
            };
            let boolean = |i: usize| match eval(&args[i], env) {
                Value::Bool(b) => b,
                v => panic!("expected bool, got {v:?}"),
            };
            match op.as_str() {
                "+" => Value::Num((0..args.len()).map(num).fold(BigRational::from_integer(0.into()), |a, b| a + b)),
                "*" => Value::Num((0..args.len()).map(num).fold(BigRational::from_integer(1.into()), |a, b| a * b)),
                "-" if args.len() == 1 => Value::Num(-num(0)),
                "-" => Value::Num((1..args.len()).map(num).fold(num(0), |a, b| a - b)),
                "/" => Value::Num(num(0) / num(1)),
                ">=" => Value::Bool(num(0) >= num(1)),
                "<=" => Value::Bool(num(0) <= num(1)),
                "<" => Value::Bool(num(0) < num(1)),
                ">" => Value::Bool(num(0) > num(1)),
                "=" => Value::Bool(eval(&args[0], env) == eval(&args[1], env)),
                "and" => Value::Bool((0..args.len()).all(boolean)),
                "or" => Value::Bool((0..args.len()).any(boolean)),
                "not" => Value::Bool(!boolean(0)),
                "ite" => {
                    if boolean(0) {
                        eval(&args[1], env)
                    } else {
                        eval(&args[2], env)
                    }
                }
                other => panic!("unsupported operator {other}"),
            }
        }
    }
}

/// Structural facts plus an exact satisfiability verdict.
pub struct ScriptVerdict {
    pub inputs: Vec<String>,
    pub sat: bool,
}

/// Decides a flip-query script by enumerating its Boolean-domain inputs,
/// evaluating the defined reals exactly, and checking every assertion.
pub fn decide(script: &str) -> ScriptVerdict {
    let commands = parse(script);
    let mut declared = Vec::new();
    let mut asserts = Vec::new();
    for c in &commands {
        let Sexp::List(items) = c else { panic!("top-level atom") };
        let Sexp::Atom(head) = &items[0] else { panic!() };
        match head.as_str() {
            "declare-fun" => {
                let Sexp::Atom(name) = &items[1] else { panic!() };
                assert_eq!(items[3], Sexp::Atom("Real".into()));
                declared.push(name.clone());
            }
            "assert" => asserts.push(items[1].clone()),
            "set-logic" => assert_eq!(items[1], Sexp::Atom("QF_LRA".into())),
            "check-sat" | "exit" => {}
            other => panic!("unexpected command {other}"),
        }
    }
    // inputs: variables given a {0,1} domain by an `or` of equalities
    let mut inputs = Vec::new();
    for a in &asserts {
        if let Sexp::List(items) = a {
            if items[0] == Sexp::Atom("or".into()) {
                if let Sexp::List(eq) = &items[1] {
                    if let Sexp::Atom(v) = &eq[1] {
                        inputs.push(v.clone());
                    }
                }
            }
        }
    }
    // definitions: (= v expr) for a declared non-input v
    let mut definitions = Vec::new();
    let mut checks = Vec::new();
    for a in asserts {
        match &a {
            Sexp::List(items)
                if items[0] == Sexp::Atom("=".into())
                    && matches!(&items[1], Sexp::Atom(v) if declared.contains(v) && !inputs.contains(v)) =>
            {
                let Sexp::Atom(v) = &items[1] else { unreachable!() };
                definitions.push((v.clone(), items[2].clone()));
            }
            _ => checks.push(a),
        }
    }
    assert!(inputs.len() <= 16, "too many inputs to enumerate");
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    let mut sat = false;
    for mask in 0u32..(1 << inputs.len()) {
        let mut env: HashMap<String, BigRational> = inputs
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), if mask >> i & 1 == 1 { one.clone() } else { zero.clone() }))
            .collect();
        for (v, e) in &definitions {
            let Value::Num(n) = eval(e, &env) else { panic!("definition of {v} is not numeric") };
            env.insert(v.clone(), n);
        }
        if checks.iter().all(|c| eval(c, &env) == Value::Bool(true)) {
            sat = true;
            break;
        }
    }
    ScriptVerdict { inputs, sat }
}
