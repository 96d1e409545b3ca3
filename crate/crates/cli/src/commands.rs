use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use abdex::audit::{self, MinCount, MiningConfig};
use abdex::ingest::{self, BinarizationRules, BinarizedDataset};
use abdex::render::render_explanation;
use abdex::{
    compute_explanation_traced, export_smtlib, verify_explanation, Decision, Error, FeatureOrder, Instance,
    Model, PartialAssignment, Result,
};

use crate::{
    BiasArgs, ExplainArgs, ExportArgs, Format, ImpactArgs, IngestArgs, MineArgs, Outcome, OutputArgs,
    PredictArgs,
};

fn emit(output: &OutputArgs, text: impl FnOnce() -> String, value: &impl Serialize) -> Result<()> {
    let body = match output.format {
        Format::Text => text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
    };
    write_out(output.out.as_deref(), &body)
}

fn write_out(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn load_model(path: &Path) -> Result<Model> {
    abdex::load_model(path)
}

fn load_data(path: &Path, model: &Model) -> Result<BinarizedDataset> {
    let data = ingest::load_binarized(path)?;
    if data.feature_names.len() != model.input_width() {
        return Err(Error::Dimension {
            context: format!("dataset {}", path.display()),
            expected: model.input_width(),
            found: data.feature_names.len(),
        });
    }
    Ok(data)
}

/// An inline vector (commas, or exactly n binary digits) or a row index.
fn resolve_instance(spec: &str, model: &Model, data: Option<&PathBuf>) -> Result<(Instance, Option<usize>)> {
    let n = model.input_width();
    let s = spec.trim();
    let inline = s.contains(',') || (s.len() == n && s.chars().all(|c| c == '0' || c == '1'));
    if inline {
        let x: Instance = s.parse()?;
        model.logit(&x)?;
        return Ok((x, None));
    }
    let index: usize = s
        .parse()
        .map_err(|_| Error::Config(format!("`{spec}` is neither a row index nor a {n}-bit vector")))?;
    let path = data.ok_or_else(|| Error::Config("an instance index needs --data".into()))?;
    let rows = load_data(path, model)?.instances;
    let x = rows.get(index).cloned().ok_or_else(|| {
        Error::Dataset(format!("instance index {index} out of range for {} rows", rows.len()))
    })?;
    Ok((x, Some(index)))
}

fn outcome(o: Outcome) -> Decision {
    match o {
        Outcome::Negative => Decision::Negative,
        Outcome::Positive => Decision::Positive,
    }
}

pub fn ingest(args: IngestArgs) -> Result<()> {
    let rules = match &args.rules {
        Some(p) => BinarizationRules::from_json(&fs::read_to_string(p)?)?,
        None => BinarizationRules::default(),
    };
    let (rows, summary) = ingest::load_dataset(&args.data, &rules)?;
    ingest::save_binarized(&args.out, &rules.schema()?, &rows)?;
    let body = match args.format {
        Format::Text => {
            let mut s = summary.describe();
            s.push('\n');
            for skip in &summary.skipped {
                s.push_str(&format!("skipped {}\n", skip.reason));
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
    };
    write_out(None, &body)
}

#[derive(Serialize)]
struct Prediction {
    index: Option<usize>,
    instance: String,
    logit: f64,
    decision: Option<Decision>,
}

pub fn predict(args: PredictArgs) -> Result<()> {
    let model = load_model(&args.model.model)?;
    let targets: Vec<(Instance, Option<usize>)> = match &args.instance {
        Some(spec) => vec![resolve_instance(spec, &model, args.data.as_ref())?],
        None => {
            let path = args
                .data
                .as_ref()
                .ok_or_else(|| Error::Config("predict needs --instance or --data".into()))?;
            load_data(path, &model)?
                .instances
                .into_iter()
                .enumerate()
                .map(|(i, x)| (x, Some(i)))
                .collect()
        }
    };
    let single = args.instance.is_some();
    let mut out = Vec::with_capacity(targets.len());
    for (x, index) in targets {
        let logit = model.logit(&x)?;
        let decision = match model.predict(&x) {
            Ok(d) => Some(d),
            Err(e @ Error::Ambiguous { .. }) if single => return Err(e),
            Err(Error::Ambiguous { .. }) => None,
            Err(e) => return Err(e),
        };
        out.push(Prediction {
            index,
            instance: x.to_string(),
            logit,
            decision,
        });
    }
    emit(
        &args.output,
        || {
            out.iter()
                .map(|p| {
                    let idx = p.index.map_or("-".to_string(), |i| i.to_string());
                    let d = p.decision.map_or("ambiguous".to_string(), |d| d.to_string());
                    format!("{idx}\t{}\t{d}\t{}\n", p.instance, p.logit)
                })
                .collect()
        },
        &out,
    )
}

#[derive(Serialize)]
struct ExplainOutput {
    #[serde(flatten)]
    explanation: abdex::axp::ExplanationRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<abdex::axp::TraceStep>>,
}

pub fn explain(args: ExplainArgs) -> Result<()> {
    let model = load_model(&args.model.model)?;
    let (x, index) = resolve_instance(&args.instance, &model, args.data.as_ref())?;
    let order = args.order.parse::<FeatureOrder>()?.resolve(&model)?;
    let (mut xp, steps) = compute_explanation_traced(&model, &x, &order)?;
    verify_explanation(&model, &x, &xp)?;
    if let Some(i) = index {
        xp = xp.with_index(i);
    }
    let schema = model.schema();
    let record = ExplainOutput {
        explanation: xp.to_record(schema),
        trace: args.trace.then(|| steps.clone()),
    };
    emit(
        &args.output,
        || {
            let mut s = String::new();
            if args.trace {
                s.push_str("step  query                    flip\n");
                for (i, st) in steps.iter().enumerate() {
                    let mark = if st.necessary { "⊤" } else { "⊥" };
                    s.push_str(&format!("{:>4}  {:<24} {mark}\n", i + 1, st.query));
                }
                s.push('\n');
            }
            s.push_str(&format!("instance: {x}\n"));
            s.push_str(&render_explanation(schema, &xp));
            s
        },
        &record,
    )
}

pub fn bias_audit(args: BiasArgs) -> Result<()> {
    let model = load_model(&args.model.model)?;
    let schema = model.schema();
    let protected = match &args.protected {
        Some(r) => schema.resolve(r)?,
        None => schema
            .protected()
            .ok_or_else(|| Error::Config("no --protected given and the model declares none".into()))?,
    };
    let data = load_data(&args.data, &model)?;
    let report = audit::audit_bias(&model, &data.instances, protected)?;
    emit(&args.output, || report.render_text(), &report)
}

pub fn feature_impact(args: ImpactArgs) -> Result<()> {
    let model = load_model(&args.model.model)?;
    let data = load_data(&args.data, &model)?;
    let table = audit::feature_impact(&model, &data.instances)?;
    emit(&args.output, || table.render_text(), &table)
}

pub fn mine_combos(args: MineArgs) -> Result<()> {
    let model = load_model(&args.model.model)?;
    let config = MiningConfig {
        outcome: args.outcome.map(outcome),
        max_size: args.max_size,
        min_count: args.min_count.parse::<MinCount>()?,
        top_k: args.top_k,
    };
    if config.max_size < 1 {
        return Err(Error::Config("--max-size must be at least 1".into()));
    }
    let data = load_data(&args.data, &model)?;
    let table = audit::feature_impact(&model, &data.instances)?;
    let report = audit::mine_combinations(&table, &config)?;
    emit(&args.output, || report.render_text(), &report)
}

pub fn export_smt(args: ExportArgs) -> Result<()> {
    let model = load_model(&args.model.model)?;
    let (x, _) = resolve_instance(&args.instance, &model, args.data.as_ref())?;
    let schema = model.schema();
    let free = args
        .free
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|r| schema.resolve(r))
        .collect::<Result<Vec<_>>>()?;
    let mut partial = PartialAssignment::from_instance(&x);
    for f in free {
        partial.free(f);
    }
    let d = match args.decision {
        Some(o) => outcome(o),
        None => model.predict(&x)?,
    };
    write_out(args.out.as_deref(), &export_smtlib(&model, &partial, d)?)
}
