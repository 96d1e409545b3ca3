//! `abdex`: explanations and decision audits for ReLU classifiers.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use abdex::Error;

#[derive(Parser)]
#[command(name = "abdex", version, about = "Formal abductive explanations and decision audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Binarize a raw survey export.
    Ingest(IngestArgs),
    /// Print the model's decision and logit per instance.
    Predict(PredictArgs),
    /// Compute and render a minimal abductive explanation.
    Explain(ExplainArgs),
    /// Count decisions whose every explanation involves the protected feature.
    BiasAudit(BiasArgs),
    /// Count, per feature, the decisions it is critical for.
    FeatureImpact(ImpactArgs),
    /// Mine feature combinations critical for many decisions.
    MineCombos(MineArgs),
    /// Write the flip query for one instance as an SMT-LIB2 script.
    ExportSmt(ExportArgs),
}

#[derive(Clone, Copy, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
pub struct ModelArgs {
    /// Portable weights document.
    #[arg(long, env = "ABDEX_MODEL")]
    pub model: std::path::PathBuf,
}

#[derive(Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct IngestArgs {
    /// Raw comma-delimited survey file with a header row.
    #[arg(long)]
    pub data: std::path::PathBuf,
    /// Binarized output file.
    #[arg(long)]
    pub out: std::path::PathBuf,
    /// JSON binarization rules; the survey defaults otherwise.
    #[arg(long)]
    pub rules: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Binarized dataset.
    #[arg(long)]
    pub data: Option<std::path::PathBuf>,
    /// Row index into --data, or an inline 0/1 vector.
    #[arg(long)]
    pub instance: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub data: Option<std::path::PathBuf>,
    /// Row index into --data, or an inline 0/1 vector.
    #[arg(long)]
    pub instance: String,
    /// `ascending`, `weight`, or a comma-separated permutation.
    #[arg(long, default_value = "ascending")]
    pub order: String,
    /// Also print each removal step.
    #[arg(long)]
    pub trace: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct BiasArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub data: std::path::PathBuf,
    /// Feature name, `x<i>`, or index; defaults to the schema's protected feature.
    #[arg(long)]
    pub protected: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct ImpactArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub data: std::path::PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct MineArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub data: std::path::PathBuf,
    #[arg(long, default_value_t = 3)]
    pub max_size: usize,
    /// Absolute count (`12`) or share of the outcome class (`5%`, `0.05`).
    #[arg(long, default_value = "5%")]
    pub min_count: String,
    /// Only mine one predicted outcome.
    #[arg(long)]
    pub outcome: Option<Outcome>,
    /// Restrict mining to the k most often critical features per outcome.
    #[arg(long)]
    pub top_k: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Outcome {
    Negative,
    Positive,
}

#[derive(Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub data: Option<std::path::PathBuf>,
    /// Row index into --data, or an inline 0/1 vector.
    #[arg(long)]
    pub instance: String,
    /// Comma-separated features left free; all others are fixed to the instance.
    #[arg(long, default_value = "")]
    pub free: String,
    /// Decision to refute; defaults to the model's prediction for the instance.
    #[arg(long)]
    pub decision: Option<Outcome>,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        Error::Ambiguous { .. } => 4,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(a) => commands::ingest(a),
        Command::Predict(a) => commands::predict(a),
        Command::Explain(a) => commands::explain(a),
        Command::BiasAudit(a) => commands::bias_audit(a),
        Command::FeatureImpact(a) => commands::feature_impact(a),
        Command::MineCombos(a) => commands::mine_combos(a),
        Command::ExportSmt(a) => commands::export_smt(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("abdex: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
