//! Line-oriented `key = value` run configuration.

use std::path::Path;

use chaingeo_core::{AlgebraContext, Scalar, ZKind};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub z_field: ZKind,
    pub lambda1: String,
    pub mu1: String,
    pub lambda2: String,
    pub mu2: String,
    /// Overrides every suite's default sample count.
    pub samples: Option<usize>,
    pub seed: u64,
    pub height: u32,
    /// `None` runs every suite valid for the context.
    pub suites: Option<Vec<String>>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut z_field = None;
        let (mut lambda1, mut mu1, mut lambda2, mut mu2) = (None, None, None, None);
        let mut samples = None;
        let mut seed = 0;
        let mut height = 8;
        let mut suites = None;
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected 'key = value'", n + 1)))?;
            let value = value.trim().to_string();
            let bad = |what: &str| CliError::Config(format!("line {}: bad {what} '{value}'", n + 1));
            match key.trim() {
                "z_field" => {
                    z_field = Some(match value.as_str() {
                        "Q" => ZKind::Q,
                        "F2T" => ZKind::F2T,
                        _ => return Err(bad("z_field")),
                    })
                }
                "lambda1" => lambda1 = Some(value),
                "mu1" => mu1 = Some(value),
                "lambda2" => lambda2 = Some(value),
                "mu2" => mu2 = Some(value),
                "samples" => samples = Some(value.parse().map_err(|_| bad("samples"))?),
                "seed" => seed = value.parse().map_err(|_| bad("seed"))?,
                "height" => height = value.parse().map_err(|_| bad("height"))?,
                "suites" => {
                    suites = Some(value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
                }
                other => return Err(CliError::Config(format!("line {}: unknown key '{other}'", n + 1))),
            }
        }
        let need = |v: Option<String>, k: &str| v.ok_or_else(|| CliError::Config(format!("missing key '{k}'")));
        Ok(RunConfig {
            z_field: z_field.ok_or_else(|| CliError::Config("missing key 'z_field'".into()))?,
            lambda1: need(lambda1, "lambda1")?,
            mu1: need(mu1, "mu1")?,
            lambda2: need(lambda2, "lambda2")?,
            mu2: need(mu2, "mu2")?,
            samples,
            seed,
            height,
            suites,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn context<F: Scalar>(&self) -> Result<AlgebraContext<F>, CliError> {
        if F::KIND != self.z_field {
            return Err(CliError::Config(format!("config is over {}, not {}", self.z_field, F::KIND)));
        }
        let p = |s: &str| F::parse_canonical(s).map_err(CliError::from);
        Ok(AlgebraContext::build(p(&self.lambda1)?, p(&self.mu1)?, p(&self.lambda2)?, p(&self.mu2)?)?)
    }
}
