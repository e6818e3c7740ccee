use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

mod backend;
mod commands;
mod survey;

/// Lexical substitution with concatenated masked/original prompts, plus the
/// benchmark and quality evaluations around it.
#[derive(Debug, Parser, Serialize)]
#[command(name = "lexsub", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Base URL of a model sidecar speaking the JSON protocol.
    #[arg(long, global = true, env = "LEXSUB_BACKEND_URL")]
    pub backend_url: Option<String>,
    /// Canned backend file (takes precedence over --backend-url).
    #[arg(long, global = true, env = "LEXSUB_FIXTURE")]
    pub fixture: Option<PathBuf>,
    /// Mask marker used with --backend-url.
    #[arg(long, global = true, env = "LEXSUB_MASK_MARKER", default_value = "<mask>")]
    pub mask_marker: String,
    /// Separator between masked and original sentence with --backend-url.
    #[arg(long, global = true, env = "LEXSUB_SEPARATOR", default_value = " </s></s> ")]
    pub separator: String,
    /// WordNet-format database directory for relation filtering.
    #[arg(long, global = true, env = "LEXSUB_LEXICON")]
    pub lexicon: Option<PathBuf>,
    #[arg(long, global = true, env = "LEXSUB_K_RAW", default_value_t = 30)]
    pub k_raw: usize,
    #[arg(long, global = true, env = "LEXSUB_MAX_OUT", default_value_t = 10)]
    pub max_out: usize,
    /// Comma list of relations to filter out, or `all` / `none`.
    #[arg(long, global = true, env = "LEXSUB_EXCLUDE_RELATIONS", default_value = "antonym")]
    pub exclude_relations: String,
    #[arg(long, global = true, env = "LEXSUB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for per-instance work (0 = all cores).
    #[arg(long, global = true, env = "LEXSUB_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, global = true, env = "LEXSUB_OUT_DIR", default_value = "lexsub-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Rank substitutes for one target word.
    Substitute(commands::SubstituteArgs),
    /// Convert a benchmark release into canonical records.
    Import(commands::ImportArgs),
    /// Score predictions (or generate them first) against canonical gold.
    Eval(commands::EvalArgs),
    /// Replace a seeded fraction of the tokens of every document.
    Perturb(commands::PerturbArgs),
    /// Perplexity of original, gold and predicted sentences.
    Perplexity(commands::PerplexityArgs),
    /// Cosine similarity of original and substituted sentences.
    Similarity(commands::SimilarityArgs),
    /// Preference survey: generate questions, serve them, export results.
    #[command(subcommand)]
    Survey(survey::SurveyCommand),
}

/// Usage and data errors exit 1; model backend failures exit 2.
fn exit_code(err: &anyhow::Error) -> u8 {
    use lexsub_core::backends::BackendError;
    use lexsub_core::engine::EngineError;
    use lexsub_core::quality::QualityError;
    for cause in err.chain() {
        if cause.downcast_ref::<BackendError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<EngineError>() {
            if e.is_backend() {
                return 2;
            }
        }
        if let Some(QualityError::Backend(_)) = cause.downcast_ref::<QualityError>() {
            return 2;
        }
        if let Some(QualityError::Engine(e)) = cause.downcast_ref::<QualityError>() {
            if e.is_backend() {
                return 2;
            }
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.global.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.jobs)
            .build_global();
    }
    let result = match &cli.command {
        Command::Substitute(a) => commands::substitute(&cli.global, a),
        Command::Import(a) => commands::import(&cli, a),
        Command::Eval(a) => commands::eval(&cli, a),
        Command::Perturb(a) => commands::perturb(&cli, a),
        Command::Perplexity(a) => commands::perplexity(&cli, a),
        Command::Similarity(a) => commands::similarity(&cli, a),
        Command::Survey(c) => survey::run(&cli, c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
