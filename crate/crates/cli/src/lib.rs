//! Batch front-end: reads an algebra config, runs theorem suites and writes
//! reports.

pub mod classify;
pub mod config;
pub mod error;
pub mod report;
pub mod suites;

use chaingeo_core::{AlgebraContext, F2RatFunc, Rational, ZKind};
use rayon::prelude::*;

pub use config::RunConfig;
pub use error::CliError;
pub use report::{Failure, SkippedSuite, Summary, VerificationReport};

pub enum AnyContext {
    Q(AlgebraContext<Rational>),
    F2(AlgebraContext<F2RatFunc>),
}

macro_rules! with_ctx {
    ($any:expr, $c:ident => $body:expr) => {
        match $any {
            AnyContext::Q($c) => $body,
            AnyContext::F2($c) => $body,
        }
    };
}

impl AnyContext {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        Ok(match cfg.z_field {
            ZKind::Q => AnyContext::Q(cfg.context()?),
            ZKind::F2T => AnyContext::F2(cfg.context()?),
        })
    }

    pub fn is_galois(&self) -> bool {
        with_ctx!(self, c => c.is_galois())
    }

    pub fn descriptor(&self) -> String {
        with_ctx!(self, c => c.descriptor())
    }
}

pub fn cmd_verify(
    cfg: &RunConfig,
    theorem_id: &str,
    seed: Option<u64>,
    samples: Option<usize>,
) -> Result<VerificationReport, CliError> {
    let ctx = AnyContext::from_config(cfg)?;
    let seed = seed.unwrap_or(cfg.seed);
    let samples = samples.or(cfg.samples);
    with_ctx!(&ctx, c => suites::run_suite(c, theorem_id, seed, samples, cfg.height))
}

pub fn cmd_classify(cfg: &RunConfig, transversal: &str) -> Result<String, CliError> {
    let ctx = AnyContext::from_config(cfg)?;
    with_ctx!(&ctx, c => classify::classify(c, transversal, cfg.seed))
}

/// Runs every configured suite valid for the context, concurrently.
pub fn cmd_all(cfg: &RunConfig, seed: Option<u64>) -> Result<Summary, CliError> {
    let ctx = AnyContext::from_config(cfg)?;
    let seed = seed.unwrap_or(cfg.seed);
    let ids: Vec<String> = match &cfg.suites {
        Some(list) => list.clone(),
        None => suites::THEOREMS.iter().map(|t| t.id.to_string()).collect(),
    };
    let mut run = Vec::new();
    let mut skipped = Vec::new();
    for id in ids {
        let t = suites::lookup(&id)?;
        if t.galois_only && !ctx.is_galois() {
            skipped.push(SkippedSuite { theorem_id: id, reason: "requires K/Z to be Galois".into() });
        } else {
            run.push(id);
        }
    }
    let reports = run
        .par_iter()
        .map(|id| with_ctx!(&ctx, c => suites::run_suite(c, id, seed, cfg.samples, cfg.height)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Summary::new(ctx.descriptor(), seed, reports, skipped))
}
