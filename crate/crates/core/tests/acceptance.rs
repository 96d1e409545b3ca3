//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion, and exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use abdex::audit::{audit_bias, feature_impact, mine_combinations, BiasAuditReport, MinCount, MiningConfig};
use abdex::{
    compute_explanation, exhaustive_oracle, exists_counterexample, export_smtlib, is_biased_decision,
    is_sufficient, Decision, Error,
};
use common::*;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("axp soundness and minimality", axp_soundness_minimality),
        ("oracle completeness", oracle_completeness),
        ("bias definition equivalence", bias_equivalence),
        ("combination mining correctness", mining_correctness),
        ("bias audit partition", partition_invariant),
        ("performance", performance),
        ("smt export faithfulness", smt_faithfulness),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 200 random models (n in [3,12], up to 2 hidden layers of up to 8 units,
/// weights U[-2,2]) x 20 random instances: every explanation is sufficient
/// and every single-literal deletion is insufficient. Budget: 5 minutes.
fn axp_soundness_minimality() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(0xA11);
    let (mut checked, mut ambiguous) = (0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(3..=12);
        let model = random_net(&mut rng, n);
        let order: Vec<usize> = (0..n).collect();
        for _ in 0..20 {
            let x = random_instance(&mut rng, n);
            let xp = match compute_explanation(&model, &x, &order) {
                Ok(xp) => xp,
                Err(Error::Ambiguous { .. }) => {
                    ambiguous += 1;
                    continue;
                }
                Err(e) => return Err(e.to_string()),
            };
            let vars = xp.features();
            ensure(is_sufficient(&model, &x, &vars).unwrap(), || format!("{xp} not sufficient for {x}"))?;
            for skip in 0..vars.len() {
                let mut smaller = vars.clone();
                smaller.remove(skip);
                ensure(!is_sufficient(&model, &x, &smaller).unwrap(), || {
                    format!("{xp} not minimal for {x}: x{} removable", vars[skip])
                })?;
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked}/{} explanations verified, {ambiguous} ambiguous skipped", checked + ambiguous))
}

/// 500 random queries with n <= 16: branch and bound agrees with enumeration on `flips`.
fn oracle_completeness() -> Outcome {
    let mut rng = rng(0xB22);
    let mut flips = 0;
    for q in 0..500 {
        let n = rng.gen_range(1..=16);
        let model = random_net(&mut rng, n);
        let partial = random_partial(&mut rng, n);
        let d = if rng.gen_bool(0.5) { Decision::Positive } else { Decision::Negative };
        let fast = exists_counterexample(&model, &partial, d).map(|a| a.flips);
        let slow = exhaustive_oracle(&model, &partial, d).map(|a| a.flips);
        match (fast, slow) {
            (Ok(a), Ok(b)) => {
                ensure(a == b, || format!("query {q}: search {a}, enumeration {b} on {partial}"))?;
                flips += usize::from(a);
            }
            (Err(Error::Ambiguous { .. }), Err(Error::Ambiguous { .. })) => {}
            (a, b) => return Err(format!("query {q}: search {a:?}, enumeration {b:?}")),
        }
    }
    Ok(format!("500/500 agree ({flips} flipping)"))
}

/// 50 random models with n <= 8: biased iff the protected feature lies in
/// every minimal sufficient subset found by lattice enumeration.
fn bias_equivalence() -> Outcome {
    let mut rng = rng(0xC33);
    let (mut checked, mut biased) = (0, 0);
    for _ in 0..50 {
        let n = rng.gen_range(2..=8);
        let model = random_net(&mut rng, n);
        let p = rng.gen_range(0..n);
        let table = decision_table(&model);
        for x in cube(n) {
            let Some(lattice) = sufficiency_lattice(&model, &table, &x) else { continue };
            let axps = all_axps(&lattice, n);
            let expected = axps.iter().all(|s| s >> p & 1 == 1);
            let got = is_biased_decision(&model, &x, p).map_err(|e| e.to_string())?;
            ensure(got == expected, || format!("instance {x}, p={p}: got {got}, lattice says {expected}"))?;
            checked += 1;
            biased += usize::from(got);
        }
    }
    Ok(format!("{checked} decisions agree ({biased} biased)"))
}

/// n <= 8: mined counts equal brute-force "S inside every AXP" counts, and
/// singleton counts equal the feature-impact table.
fn mining_correctness() -> Outcome {
    let mut rng = rng(0xD44);
    let mut compared = 0;
    for _ in 0..30 {
        let n = rng.gen_range(2..=8);
        let model = random_net(&mut rng, n);
        let table = decision_table(&model);
        if table.iter().any(Option::is_none) {
            continue;
        }
        let data = cube(n);
        let impact = feature_impact(&model, &data).map_err(|e| e.to_string())?;
        let cfg = MiningConfig {
            outcome: None,
            max_size: n,
            min_count: MinCount::Absolute(1),
            top_k: None,
        };
        let report = mine_combinations(&impact, &cfg).map_err(|e| e.to_string())?;

        let mut expected = vec![[0usize; 2]; 1 << n];
        for x in &data {
            let lattice = sufficiency_lattice(&model, &table, x).unwrap();
            let core = axp_intersection(&all_axps(&lattice, n), n);
            let d = table[mask_of(x) as usize].unwrap();
            for s in 1..1u64 << n {
                if s & core == s {
                    expected[s as usize][d as usize] += 1;
                }
            }
        }
        for s in 1..1u64 << n {
            let features = features_of(s, n);
            for d in Decision::ALL {
                let got = report.count_of(d, &features);
                let want = expected[s as usize][d as usize];
                ensure(got == want, || format!("{features:?} {d}: mined {got}, brute force {want}"))?;
                compared += 1;
            }
        }
        for f in 0..n {
            for d in Decision::ALL {
                ensure(report.count_of(d, &[f]) == impact.critical_count(f, d), || {
                    format!("singleton x{f} {d} disagrees with impact table")
                })?;
            }
        }
    }
    Ok(format!("{compared} (set, outcome) counts agree"))
}

/// Audit counts partition the dataset; the published 864/290/103 split sums to 1257.
fn partition_invariant() -> Outcome {
    let reference = BiasAuditReport::from_counts(1, 864, 290, 103, 0);
    ensure(reference.total == 1257 && reference.is_partition(), || "reference split does not sum to 1257".into())?;
    ensure((reference.unbiased_ratio * 1e4).floor() == 6873.0, || {
        format!("reference unbiased ratio {}", reference.unbiased_ratio)
    })?;
    let mut rng = rng(0xE55);
    for _ in 0..20 {
        let n = rng.gen_range(2..=12);
        let model = random_net(&mut rng, n);
        let size = rng.gen_range(1..200);
        let data: Vec<_> = (0..size).map(|_| random_instance(&mut rng, n)).collect();
        let p = rng.gen_range(0..n);
        let r = audit_bias(&model, &data, p).map_err(|e| e.to_string())?;
        ensure(r.is_partition() && r.total == size, || format!("{r:?} does not partition {size}"))?;
    }
    Ok("reference 864+290+103=1257 (68.73% unbiased); 20 random audits partition".into())
}

/// 19 features, 16 hidden units: one explanation under 5 s, a 1257-instance
/// bias audit under 10 minutes.
fn performance() -> Outcome {
    let mut rng = rng(0xF66);
    let model = random_model(&mut rng, 19, &[16]);
    let order: Vec<usize> = (0..19).collect();
    let mut worst = Duration::ZERO;
    for _ in 0..5 {
        let x = random_instance(&mut rng, 19);
        let start = Instant::now();
        match compute_explanation(&model, &x, &order) {
            Ok(_) | Err(Error::Ambiguous { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
        worst = worst.max(start.elapsed());
    }
    ensure(worst < Duration::from_secs(5), || format!("slowest explanation {worst:?}"))?;
    let data: Vec<_> = (0..1257).map(|_| random_instance(&mut rng, 19)).collect();
    let start = Instant::now();
    let report = audit_bias(&model, &data, 1).map_err(|e| e.to_string())?;
    let audit = start.elapsed();
    ensure(audit < Duration::from_secs(600), || format!("bias audit took {audit:?}"))?;
    ensure(report.total == 1257, || "audit lost instances".into())?;
    Ok(format!("slowest explanation {worst:.2?}, 1257-instance bias audit {audit:.2?}"))
}

/// 100 small queries: the exported script's exact satisfiability matches the oracle.
fn smt_faithfulness() -> Outcome {
    let mut rng = rng(0x177);
    let mut sat = 0;
    for q in 0..100 {
        let n = rng.gen_range(1..=8);
        let model = random_net(&mut rng, n);
        let partial = random_partial(&mut rng, n);
        let d = if rng.gen_bool(0.5) { Decision::Positive } else { Decision::Negative };
        let Ok(answer) = exists_counterexample(&model, &partial, d) else { continue };
        let script = export_smtlib(&model, &partial, d).unwrap();
        let verdict = smt::decide(&script);
        ensure(verdict.inputs.len() == n, || format!("query {q}: {} inputs declared", verdict.inputs.len()))?;
        ensure(verdict.sat == answer.flips, || {
            format!("query {q}: script sat={}, oracle flips={}", verdict.sat, answer.flips)
        })?;
        sat += usize::from(verdict.sat);
    }
    Ok(format!("100/100 scripts agree ({sat} satisfiable)"))
}
