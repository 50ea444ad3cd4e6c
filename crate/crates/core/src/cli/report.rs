//! Machine-readable command reports.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::document::{Document, FORMAT_VERSION};
use crate::linalg::NormEstimate;

/// Outcome of a command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Only bounds are available; the value lies in `[lower, upper]`.
    Approx { lower: f64, upper: f64 },
    /// The inputs or flags were rejected.
    Error,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Pass | Status::Approx { .. } => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub kind: String,
    /// SHA-256 of the canonical serialization of the input document.
    pub sha256: String,
}

impl InputDigest {
    pub fn of(doc: &Document) -> Self {
        let canonical = serde_json::to_vec(&doc.to_value()).expect("documents serialize");
        Self { kind: doc.kind().to_string(), sha256: hex::encode(Sha256::digest(&canonical)) }
    }
}

/// A named result. Numbers carry the tolerance they were judged against;
/// booleans and labels carry `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultEntry {
    pub name: String,
    pub value: Value,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub name: String,
    pub document: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
    /// Input file, plus a line/column or field path for document errors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parameters {
    pub seed: u64,
    pub samples: usize,
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub kind: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: Parameters,
    pub inputs: Vec<InputDigest>,
    pub results: Vec<ResultEntry>,
    pub witnesses: Vec<Witness>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl Report {
    pub fn new(command: &str, parameters: Parameters) -> Self {
        Self {
            kind: "report",
            version: FORMAT_VERSION,
            command: command.to_string(),
            parameters,
            inputs: Vec::new(),
            results: Vec::new(),
            witnesses: Vec::new(),
            status: Status::Pass,
            error: None,
        }
    }

    pub fn number(&mut self, name: &str, value: f64, tolerance: f64) {
        self.results.push(ResultEntry { name: name.into(), value: Value::from(value), tolerance: Some(tolerance) });
    }

    pub fn integer(&mut self, name: &str, value: usize) {
        self.results.push(ResultEntry { name: name.into(), value: Value::from(value), tolerance: Some(0.0) });
    }

    pub fn flag(&mut self, name: &str, value: bool) {
        self.results.push(ResultEntry { name: name.into(), value: Value::from(value), tolerance: None });
    }

    pub fn label(&mut self, name: &str, value: Value) {
        self.results.push(ResultEntry { name: name.into(), value, tolerance: None });
    }

    /// `name`, plus `name.lower`/`name.upper` and `name.exact`.
    pub fn estimate(&mut self, name: &str, est: NormEstimate, tolerance: f64) {
        self.number(name, est.value, tolerance);
        self.flag(&format!("{name}.exact"), est.exact);
        if !est.exact {
            self.number(&format!("{name}.lower"), est.lower, tolerance);
            self.number(&format!("{name}.upper"), est.upper, tolerance);
        }
    }

    pub fn witness(&mut self, name: &str, doc: &Document) {
        self.witnesses.push(Witness { name: name.into(), document: doc.to_value() });
    }

    pub fn result(&self, name: &str) -> Option<&Value> {
        self.results.iter().find(|r| r.name == name).map(|r| &r.value)
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
