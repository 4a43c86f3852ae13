//! Machine-readable run reports.
//!
//! One schema for every verb, with stable field names; optional sections are
//! omitted rather than emitted as null so that reports stay diffable. Wall
//! clock timings are opt-in (`--timings`) because they are the one field that
//! breaks byte-for-byte reproducibility between runs.

use serde::Serialize;

#[derive(Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// "pass" | "fail" | "skip"
    pub verdict: &'static str,
    pub detail: serde_json::Value,
}

impl CheckRecord {
    pub fn pass(name: &str, detail: serde_json::Value) -> Self {
        CheckRecord { name: name.into(), verdict: "pass", detail }
    }

    pub fn fail(name: &str, detail: serde_json::Value) -> Self {
        CheckRecord { name: name.into(), verdict: "fail", detail }
    }

    pub fn skip(name: &str, detail: serde_json::Value) -> Self {
        CheckRecord { name: name.into(), verdict: "skip", detail }
    }
}

#[derive(Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub verb: String,
    pub seed: u64,
    pub params: serde_json::Value,
    /// "pass" | "fail" | "obstruction" | "error"
    pub verdict: &'static str,
    pub checks: Vec<CheckRecord>,
    pub counts: serde_json::Value,
    pub constants: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_lengths: Option<serde_json::Value>,
    /// Self-contained reproduction of a failed check: every input needed to
    /// replay it, serialized inline.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<serde_json::Value>,
    /// When the verb's artifact goes to stdout, the human summary is
    /// suppressed so stdout stays parseable.
    #[serde(skip)]
    pub quiet: bool,
}

impl RunReport {
    pub fn new() -> Self {
        RunReport {
            tool: "fullshift",
            version: env!("CARGO_PKG_VERSION"),
            verb: String::new(),
            seed: 0,
            params: serde_json::json!({}),
            verdict: "pass",
            checks: Vec::new(),
            counts: serde_json::json!({}),
            constants: serde_json::json!({}),
            word_lengths: None,
            counterexample: None,
            error: None,
            timings_ms: None,
            quiet: false,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != "fail")
    }
}
