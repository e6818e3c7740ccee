use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use lexsub_core::backends::{Embedder, HttpBackend};
use lexsub_core::corpus::{
    import_coinco, import_ls07, import_swords, load_canonical, read_predictions, save_canonical,
    write_predictions, CanonicalRecord, ImportReport, PredictionFile,
};
use lexsub_core::instance::InstanceError;
use lexsub_core::metrics::{evaluate_with, ScoringOptions};
use lexsub_core::quality::{
    perplexity_report, perturb_document, similarity_top1_random1, write_manifest, Eligibility,
    PerturbationConfig,
};
use lexsub_core::{Pos, TargetInstance};
use rayon::prelude::*;
use serde::Serialize;

use crate::backend::{backend, engine};
use crate::{Cli, GlobalArgs};

/// Writes `<out_dir>/<name>.run.json` echoing the resolved invocation.
pub fn write_run_manifest(cli: &Cli, name: &str) -> Result<()> {
    #[derive(Serialize)]
    struct Manifest<'a> {
        tool: &'static str,
        version: &'static str,
        invocation: &'a Cli,
    }
    let path = cli.global.out_dir.join(format!("{name}.run.json"));
    let m = Manifest {
        tool: "lexsub",
        version: env!("CARGO_PKG_VERSION"),
        invocation: cli,
    };
    write_json(&path, &m)
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn out_dir(g: &GlobalArgs) -> Result<&Path> {
    fs::create_dir_all(&g.out_dir)
        .with_context(|| format!("creating {}", g.out_dir.display()))?;
    Ok(&g.out_dir)
}

#[derive(Debug, Args, Serialize)]
pub struct SubstituteArgs {
    #[arg(long)]
    pub sentence: String,
    /// Target word; must occur once unless --start is given.
    #[arg(long)]
    pub target: String,
    /// Character offset of the target (disambiguates repeated words).
    #[arg(long)]
    pub start: Option<usize>,
    #[arg(long)]
    pub lemma: Option<String>,
    /// Part of speech: n, v, a, r or any tag; other tags skip relation filtering.
    #[arg(long, default_value = "other")]
    pub pos: String,
    /// Also print candidates removed by a filter.
    #[arg(long)]
    pub audit: bool,
    #[arg(long)]
    pub json: bool,
}

pub fn substitute(g: &GlobalArgs, a: &SubstituteArgs) -> Result<()> {
    let pos = Pos::from_tag(&a.pos);
    let instance = match a.start {
        Some(start) => TargetInstance::new(
            "cli",
            a.sentence.as_str(),
            start,
            start + a.target.chars().count(),
            a.target.as_str(),
            a.lemma.clone().unwrap_or_else(|| a.target.to_lowercase()),
            pos,
        )?,
        None => match TargetInstance::locate("cli", a.sentence.as_str(), &a.target, a.lemma.as_deref(), pos) {
            Err(InstanceError::Ambiguous { occurrences, .. }) => bail!(
                "{:?} occurs {} times (character offsets {:?}); pass --start",
                a.target,
                occurrences.len(),
                occurrences
            ),
            other => other?,
        },
    };
    let list = engine(g)?.substitute(&instance)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&list)?);
        return Ok(());
    }
    for c in list.survivors() {
        println!("{}\t{}\t{:.4}", c.rank, c.surface, c.score);
    }
    if a.audit {
        for c in list.removed() {
            let reason = c.removed_by.map_or("", |r| r.as_str());
            println!("-\t{}\t{:.4}\t{}", c.surface, c.score, reason);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dataset {
    Ls07,
    Coinco,
    Swords,
}

#[derive(Debug, Args, Serialize)]
pub struct ImportArgs {
    pub dataset: Dataset,
    /// ls07: context file then gold file; coinco: the XML; swords: the JSON.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Swords only: minimum vote fraction (0 keeps any voted substitute,
    /// 0.5 requires half of the annotators).
    #[arg(long, env = "LEXSUB_MIN_VOTE", default_value_t = 0.0)]
    pub min_vote: f64,
    /// Output file stem inside --out-dir (defaults to the dataset name).
    #[arg(long)]
    pub name: Option<String>,
}

pub fn import(cli: &Cli, a: &ImportArgs) -> Result<()> {
    let inputs = &a.inputs;
    let expect = |n: usize| -> Result<()> {
        if inputs.len() != n {
            bail!("{} import takes {n} input file(s), got {}", format!("{:?}", a.dataset).to_lowercase(), inputs.len());
        }
        Ok(())
    };
    let (records, report): (Vec<CanonicalRecord>, ImportReport) = match a.dataset {
        Dataset::Ls07 => {
            expect(2)?;
            import_ls07(&inputs[0], &inputs[1])?
        }
        Dataset::Coinco => {
            expect(1)?;
            import_coinco(&inputs[0])?
        }
        Dataset::Swords => {
            expect(1)?;
            import_swords(&inputs[0], a.min_vote)?
        }
    };
    let dir = out_dir(&cli.global)?;
    let stem = a.name.clone().unwrap_or_else(|| {
        serde_json::to_value(a.dataset)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    });
    save_canonical(dir.join(format!("{stem}.jsonl")), &records)?;
    write_json(&dir.join(format!("{stem}.report.json")), &report)?;
    write_run_manifest(cli, &format!("import-{stem}"))?;
    print!("{report}");
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    /// Canonical records (JSONL).
    #[arg(long)]
    pub data: PathBuf,
    /// Prediction file to score.
    #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
    pub predictions: Option<PathBuf>,
    /// Run the engine on every record first and score its output.
    #[arg(long)]
    pub generate: bool,
    /// Drop multiword gold substitutes before scoring.
    #[arg(long)]
    pub exclude_multiword_gold: bool,
    /// Include per-instance scores in metrics.json.
    #[arg(long)]
    pub per_instance: bool,
}

pub fn generate_predictions(g: &GlobalArgs, records: &[CanonicalRecord]) -> Result<PredictionFile> {
    let engine = engine(g)?;
    let lists: Vec<(String, Vec<String>)> = records
        .par_iter()
        .map(|r| Ok((r.id().to_string(), engine.top_substitutes(&r.instance)?)))
        .collect::<Result<_>>()?;
    Ok(lists.into_iter().collect())
}

pub fn eval(cli: &Cli, a: &EvalArgs) -> Result<()> {
    let records = load_canonical(&a.data)?;
    let dir = out_dir(&cli.global)?.to_path_buf();
    let predictions = match &a.predictions {
        Some(p) => read_predictions(p)?,
        None => {
            let p = generate_predictions(&cli.global, &records)?;
            write_predictions(dir.join("predictions.jsonl"), &p)?;
            p
        }
    };
    let missing = records.iter().filter(|r| predictions.get(r.id()).is_none()).count();
    if missing > 0 {
        eprintln!("warning: {missing} instance(s) have no predictions and are scored as unanswered");
    }
    let options = ScoringOptions {
        exclude_multiword_gold: a.exclude_multiword_gold,
    };
    let report = evaluate_with(&records, &predictions, options, a.per_instance);
    fs::write(dir.join("metrics.txt"), report.to_key_values())?;
    write_json(&dir.join("metrics.json"), &report)?;
    write_run_manifest(cli, "eval")?;
    println!("{report}");
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct PerturbArgs {
    /// Documents, one per line.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, env = "LEXSUB_FRACTION")]
    pub fraction: f64,
    /// Sample from every word token instead of content words only.
    #[arg(long)]
    pub all_tokens: bool,
}

pub fn perturb(cli: &Cli, a: &PerturbArgs) -> Result<()> {
    let text = fs::read_to_string(&a.input)
        .with_context(|| format!("reading {}", a.input.display()))?;
    let docs: Vec<&str> = text.lines().collect();
    if docs.is_empty() {
        bail!("{} has no documents", a.input.display());
    }
    let config = PerturbationConfig {
        fraction: a.fraction,
        seed: cli.global.seed,
        eligibility: if a.all_tokens {
            Eligibility::AllTokens
        } else {
            Eligibility::Content
        },
    };
    config.validate()?;
    let engine = engine(&cli.global)?;
    let results: Vec<_> = docs
        .par_iter()
        .enumerate()
        .map(|(i, d)| perturb_document(i, d, &engine, &config))
        .collect::<Result<_, _>>()?;
    let dir = out_dir(&cli.global)?;
    let mut out = BufWriter::new(fs::File::create(dir.join("perturbed.txt"))?);
    let mut manifest = Vec::new();
    let mut eligible = 0;
    for (doc, reps, n) in results {
        writeln!(out, "{doc}")?;
        manifest.extend(reps);
        eligible += n;
    }
    out.flush()?;
    let changed = manifest.iter().filter(|r| r.old != r.new).count();
    write_manifest(BufWriter::new(fs::File::create(dir.join("manifest.tsv"))?), &config, &manifest)?;
    write_run_manifest(cli, "perturb")?;
    println!(
        "documents: {}  eligible tokens: {eligible}  sampled: {}  changed: {changed}  seed: {}",
        docs.len(),
        manifest.len(),
        config.seed
    );
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct PerplexityArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub predictions: PathBuf,
    #[arg(long)]
    pub per_instance: bool,
}

pub fn perplexity(cli: &Cli, a: &PerplexityArgs) -> Result<()> {
    let records = load_canonical(&a.data)?;
    let predictions = read_predictions(&a.predictions)?;
    let scorer = backend(&cli.global)?;
    let report = perplexity_report(&records, &predictions, scorer.as_ref(), a.per_instance)?;
    let dir = out_dir(&cli.global)?;
    write_json(&dir.join("perplexity.json"), &report)?;
    write_run_manifest(cli, "perplexity")?;
    println!("{:>12}{:>12}{:>12}{:>12}", "baseline", "gold", "top-10", "top-match");
    println!(
        "{:>12.2}{:>12.2}{:>12.2}{:>12.2}",
        report.baseline_ppl, report.gold_ppl, report.top10_ppl, report.topmatch_ppl
    );
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct SimilarityArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub predictions: PathBuf,
    /// Embedding sidecar URL; repeat for several models. Defaults to the
    /// global backend.
    #[arg(long = "embed-url")]
    pub embed_urls: Vec<String>,
}

pub fn similarity(cli: &Cli, a: &SimilarityArgs) -> Result<()> {
    let records = load_canonical(&a.data)?;
    let predictions = read_predictions(&a.predictions)?;
    let owned: Vec<Arc<dyn Embedder>> = if a.embed_urls.is_empty() {
        vec![backend(&cli.global)?]
    } else {
        a.embed_urls
            .iter()
            .map(|u| Ok(Arc::new(HttpBackend::new(u)?.with_model_id(u.clone())) as Arc<dyn Embedder>))
            .collect::<Result<_>>()?
    };
    let embedders: Vec<&dyn Embedder> = owned.iter().map(|b| b.as_ref()).collect();
    let eval = similarity_top1_random1(&records, &predictions, &embedders, cli.global.seed)?;
    let dir = out_dir(&cli.global)?;
    write_json(&dir.join("similarity.json"), &eval)?;
    write_run_manifest(cli, "similarity")?;
    println!("{:<10}{:>10}{:>10}", "", "gold", "system");
    println!("{:<10}{:>10.2}{:>10.2}", "top-1", 100.0 * eval.top1_gold.average, 100.0 * eval.top1_system.average);
    println!(
        "{:<10}{:>10.2}{:>10.2}",
        "random-1",
        100.0 * eval.random1_gold.average,
        100.0 * eval.random1_system.average
    );
    Ok(())
}
