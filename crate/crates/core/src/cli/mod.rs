//! Command-line front end: documents in, one report out.
//!
//! Every command reads its inputs as JSON documents (see [`document`]) and
//! writes a single [`Report`]. Commands that produce a value embed it as the
//! witness named `output`; a report passed as an input stands for that
//! embedded document, so commands chain through pipes.
//!
//! Exit codes: 0 for pass or approximate results, 1 when a check fails, 2
//! for rejected input.

mod commands;
pub mod document;
pub mod report;

use std::io::Read;

use serde_json::Value;

pub use document::{document_from_value, parse_document, Document, DocumentError, DocumentErrorKind};
pub use report::{Report, Status};

use report::{ErrorInfo, InputDigest, Parameters};

/// Every command name accepted by [`run`].
pub const COMMANDS: [&str; 18] = [
    "represent",
    "derepresent",
    "apply",
    "norm",
    "check-isometry",
    "extract-density",
    "pi-norm",
    "check-l1-product",
    "check-commutativity",
    "check-positive",
    "regular-norm",
    "check-regular-kernel",
    "counterexample",
    "check-local",
    "extract-multiplier",
    "check-multiplier-positive",
    "hs-norm",
    "check-hs",
];

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Flags shared by all commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub samples: usize,
    /// Overrides the command's default tolerance.
    pub tolerance: Option<f64>,
    pub max_n: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES, tolerance: None, max_n: None }
    }
}

/// A rejected input or failed precondition.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: String,
    pub message: String,
    pub location: Option<String>,
}

impl Failure {
    pub(crate) fn new(code: &str, message: impl Into<String>) -> Self {
        Self { code: code.into(), message: message.into(), location: None }
    }

    fn document(source: &str, e: DocumentError) -> Self {
        let location = Some(format!("{source}:{}", e.location()));
        Self { code: e.code().into(), message: e.message, location }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::new(e.code(), e.to_string())
    }
}

/// Reads, parses and runs. `-` reads standard input.
pub fn run(command: &str, options: &Options, sources: &[String]) -> Report {
    let mut docs = Vec::with_capacity(sources.len());
    for source in sources {
        match load(source) {
            Ok(d) => docs.push(d),
            Err(f) => return error_report(command, options, f),
        }
    }
    run_documents(command, options, &docs)
}

/// Runs a command on already parsed documents.
pub fn run_documents(command: &str, options: &Options, docs: &[Document]) -> Report {
    if !COMMANDS.contains(&command) {
        return error_report(command, options, Failure::new("E_UNKNOWN_COMMAND", format!("unknown command {command:?}")));
    }
    if let Some(t) = options.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return error_report(command, options, Failure::new("E_USAGE", format!("tolerance {t} must be finite and >= 0")));
        }
    }
    let mut report = Report::new(command, parameters(command, options));
    report.inputs = docs.iter().map(InputDigest::of).collect();
    if let Err(f) = commands::dispatch(command, options, docs, &mut report) {
        report.results.clear();
        report.status = Status::Error;
        report.error = Some(ErrorInfo { code: f.code, message: f.message, location: f.location });
    }
    report
}

fn parameters(command: &str, options: &Options) -> Parameters {
    Parameters {
        seed: options.seed,
        samples: options.samples,
        tolerance: options.tolerance.or_else(|| commands::default_tolerance(command)),
        max_n: if command == "counterexample" {
            Some(options.max_n.unwrap_or(commands::DEFAULT_MAX_N))
        } else {
            None
        },
    }
}

/// A report with status `error` and no results.
pub fn error_report(command: &str, options: &Options, f: Failure) -> Report {
    let mut report = Report::new(command, parameters(command, options));
    report.status = Status::Error;
    report.error = Some(ErrorInfo { code: f.code, message: f.message, location: f.location });
    report
}

fn read_source(source: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if source == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(source).map(|t| text = t)
    };
    res.map_err(|e| Failure { code: "E_IO".into(), message: e.to_string(), location: Some(source.into()) })?;
    Ok(text)
}

/// Loads one input; a report stands for its `output` witness.
pub fn load(source: &str) -> Result<Document, Failure> {
    let text = read_source(source)?;
    load_text(source, &text)
}

pub fn load_text(source: &str, text: &str) -> Result<Document, Failure> {
    let value: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(_) => return parse_document(text).map_err(|e| Failure::document(source, e)),
    };
    let value = if value.get("kind").and_then(Value::as_str) == Some("report") {
        output_witness(&value).ok_or_else(|| Failure {
            code: "E_SCHEMA".into(),
            message: "report has no output witness".into(),
            location: Some(format!("{source}:witnesses")),
        })?
    } else {
        value
    };
    document_from_value(value).map_err(|e| Failure::document(source, e))
}

fn output_witness(report: &Value) -> Option<Value> {
    report
        .get("witnesses")?
        .as_array()?
        .iter()
        .find(|w| w.get("name").and_then(Value::as_str) == Some("output"))?
        .get("document")
        .cloned()
}
