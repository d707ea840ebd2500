use std::fmt;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

/// A counterexample, written in the canonical text syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub theorem_id: String,
    pub context: String,
    pub seed: u64,
    pub samples_requested: usize,
    pub samples_run: usize,
    pub skipped: usize,
    pub passed: bool,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedSuite {
    pub theorem_id: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: String,
    pub context: String,
    pub seed: u64,
    pub suites_run: usize,
    pub suites_passed: usize,
    pub passed: bool,
    pub reports: Vec<VerificationReport>,
    pub skipped_suites: Vec<SkippedSuite>,
}

impl Summary {
    pub fn new(
        context: String,
        seed: u64,
        reports: Vec<VerificationReport>,
        skipped_suites: Vec<SkippedSuite>,
    ) -> Self {
        let suites_passed = reports.iter().filter(|r| r.passed).count();
        Summary {
            schema_version: SCHEMA_VERSION.into(),
            context,
            seed,
            suites_run: reports.len(),
            suites_passed,
            passed: suites_passed == reports.len(),
            reports,
            skipped_suites,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {}: {} run, {} skipped, {} failures ({} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.theorem_id,
            self.samples_run,
            self.skipped,
            self.failures.len(),
            self.elapsed_ms
        )?;
        for x in &self.failures {
            writeln!(f, "  inputs:   {}", x.inputs)?;
            writeln!(f, "  expected: {}", x.expected)?;
            writeln!(f, "  got:      {}", x.got)?;
        }
        Ok(())
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "context {} seed {}", self.context, self.seed)?;
        for r in &self.reports {
            write!(f, "{r}")?;
        }
        for s in &self.skipped_suites {
            writeln!(f, "SKIP {}: {}", s.theorem_id, s.reason)?;
        }
        writeln!(f, "{}/{} suites passed", self.suites_passed, self.suites_run)
    }
}

/// JSON with the timing fields zeroed, for comparing runs.
pub fn without_timing(json: &str) -> serde_json::Result<String> {
    let mut v: serde_json::Value = serde_json::from_str(json)?;
    zero_elapsed(&mut v);
    serde_json::to_string(&v)
}

fn zero_elapsed(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(m) => {
            for (k, x) in m.iter_mut() {
                if k == "elapsed_ms" {
                    *x = serde_json::Value::from(0);
                } else {
                    zero_elapsed(x);
                }
            }
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(zero_elapsed),
        _ => {}
    }
}
