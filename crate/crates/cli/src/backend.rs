use std::sync::Arc;

use anyhow::{bail, Context, Result};
use lexsub_core::backends::{Embedder, FillMask, FixtureBackend, HttpBackend, Scorer};
use lexsub_core::{Engine, EngineConfig, FilterConfig, Lexicon, Relation};

use crate::GlobalArgs;

/// A backend that can serve every capability.
pub trait AnyBackend: FillMask + Embedder + Scorer {}
impl<T: FillMask + Embedder + Scorer> AnyBackend for T {}

pub fn backend(g: &GlobalArgs) -> Result<Arc<dyn AnyBackend>> {
    if let Some(path) = &g.fixture {
        let fx = FixtureBackend::load(path).map_err(anyhow::Error::msg)?;
        return Ok(Arc::new(fx));
    }
    if let Some(url) = &g.backend_url {
        let http = HttpBackend::new(url)?
            .with_model_id(url.clone())
            .with_prompt_tokens(&g.mask_marker, &g.separator);
        return Ok(Arc::new(http));
    }
    bail!("no backend configured: pass --fixture or --backend-url")
}

pub fn engine_config(g: &GlobalArgs) -> Result<EngineConfig> {
    if g.max_out == 0 {
        bail!("--max-out must be at least 1");
    }
    let excluded = Relation::parse_set(&g.exclude_relations).map_err(anyhow::Error::msg)?;
    Ok(EngineConfig {
        k_raw: g.k_raw,
        filter: FilterConfig {
            max_out: g.max_out,
            excluded_relations: excluded,
        },
    })
}

pub fn lexicon(g: &GlobalArgs) -> Result<Lexicon> {
    match &g.lexicon {
        Some(dir) => Lexicon::load(dir).with_context(|| format!("loading lexicon {}", dir.display())),
        None => {
            eprintln!("warning: no --lexicon given; relation filtering is disabled");
            Ok(Lexicon::empty())
        }
    }
}

pub fn engine(g: &GlobalArgs) -> Result<Engine> {
    let config = engine_config(g)?;
    let lex = lexicon(g)?;
    let b = backend(g)?;
    let fill: Arc<dyn FillMask> = b;
    Ok(Engine::new(fill, Arc::new(lex), config))
}
