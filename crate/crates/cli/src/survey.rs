use std::fs;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use lexsub_core::corpus::{load_canonical, read_predictions};
use lexsub_survey::server::{serve, AppState};
use lexsub_survey::{aggregate, generate_survey, ResponseStore, SurveyQuestion, DEFAULT_PER_TASK};
use serde::Serialize;

use crate::commands::{out_dir, write_json, write_run_manifest};
use crate::Cli;

#[derive(Debug, Subcommand, Serialize)]
pub enum SurveyCommand {
    /// Sample questions from gold and two systems' predictions.
    Generate(GenerateArgs),
    /// Run the collection service.
    Serve(ServeArgs),
    /// Write stored responses and the aggregate table.
    Export(ExportArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Predictions credited as system_a.
    #[arg(long)]
    pub system_a: PathBuf,
    /// Predictions credited as system_b.
    #[arg(long)]
    pub system_b: PathBuf,
    #[arg(long, default_value_t = DEFAULT_PER_TASK)]
    pub per_task: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ServeArgs {
    #[arg(long)]
    pub questions: PathBuf,
    /// Directory for the response log and snapshot.
    #[arg(long)]
    pub store_dir: PathBuf,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Required in the x-admin-token header for GET /aggregate.
    #[arg(long, env = "LEXSUB_ADMIN_TOKEN", hide_env_values = true)]
    #[serde(skip)]
    pub admin_token: Option<String>,
    /// Static frontend files served for unmatched paths.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_PER_TASK)]
    pub per_task: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ExportArgs {
    #[arg(long)]
    pub questions: PathBuf,
    #[arg(long)]
    pub store_dir: PathBuf,
    #[arg(long, default_value_t = DEFAULT_PER_TASK)]
    pub per_task: usize,
}

fn load_questions(path: &PathBuf) -> Result<Vec<SurveyQuestion>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn run(cli: &Cli, cmd: &SurveyCommand) -> Result<()> {
    match cmd {
        SurveyCommand::Generate(a) => {
            let records = load_canonical(&a.data)?;
            let qa = read_predictions(&a.system_a)?;
            let qb = read_predictions(&a.system_b)?;
            let questions = generate_survey(&records, &qa, &qb, a.per_task, cli.global.seed)?;
            let dir = out_dir(&cli.global)?;
            write_json(&dir.join("questions.json"), &questions)?;
            write_run_manifest(cli, "survey-generate")?;
            println!("{} questions written to {}", questions.len(), dir.join("questions.json").display());
            Ok(())
        }
        SurveyCommand::Serve(a) => {
            let questions = load_questions(&a.questions)?;
            let store = ResponseStore::open(&a.store_dir, &questions)?;
            if a.admin_token.is_none() {
                eprintln!("warning: no admin token set; GET /aggregate is disabled");
            }
            let state = Arc::new(AppState {
                questions,
                store: Mutex::new(store),
                admin_token: a.admin_token.clone(),
                per_task: a.per_task,
            });
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://{}", a.addr);
            rt.block_on(serve(a.addr, state, a.static_dir.clone()))
                .with_context(|| format!("serving on {}", a.addr))
        }
        SurveyCommand::Export(a) => {
            let questions = load_questions(&a.questions)?;
            let store = ResponseStore::open(&a.store_dir, &questions)?;
            let responses = store.responses();
            let agg = aggregate(&questions, &responses, a.per_task);
            let dir = out_dir(&cli.global)?;
            let mut lines = String::new();
            for r in &responses {
                lines.push_str(&serde_json::to_string(r)?);
                lines.push('\n');
            }
            fs::write(dir.join("responses.jsonl"), lines)?;
            write_json(&dir.join("aggregate.json"), &agg)?;
            fs::write(dir.join("aggregate.txt"), format!("{agg}\n"))?;
            write_run_manifest(cli, "survey-export")?;
            println!("{agg}");
            Ok(())
        }
    }
}
