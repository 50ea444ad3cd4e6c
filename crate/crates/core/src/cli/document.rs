//! The JSON document format shared by every command.
//!
//! Each document is an object with a `kind`, a `version` (currently `"1"`)
//! and kind-specific fields. Matrices are arrays of rows. Kernel blocks are
//! indexed `blocks[ω₁][ω₂]` and hold the unweighted `k(ω₁,ω₂)`; operator
//! blocks are indexed `blocks[ω₂][ω₁]` and act on raw function values, so
//! `B(ω₂,ω₁) = μ₁(ω₁)·k(ω₁,ω₂)` for the operator of a kernel.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Error;
use crate::kernels::Kernel;
use crate::multiplication::Multiplier;
use crate::operators::{BlockOperator, Endpoint};
use crate::spaces::{Exponent, LpFunction, MeasureSpace, SpaceSpec};
use crate::tensor::{Factor, TensorElement};

pub const FORMAT_VERSION: &str = "1";

/// A parsed document: exactly one domain value.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    MeasureSpace(MeasureSpace),
    SpaceSpec(SpaceSpec),
    LpFunction(LpFunction),
    Kernel(Kernel),
    Operator(BlockOperator),
    Multiplier(Multiplier),
    TensorElement(TensorElement),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentErrorKind {
    /// Not valid JSON.
    Syntax { line: usize, column: usize },
    /// Valid JSON with missing, unknown or mistyped fields, or inconsistent
    /// shapes.
    Schema,
    /// Well-shaped but violating a domain invariant, such as a zero weight.
    Invariant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentError {
    pub kind: DocumentErrorKind,
    /// Field path such as `blocks[0][1]`; empty for the document root.
    pub path: String,
    pub message: String,
}

impl DocumentError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { kind: DocumentErrorKind::Schema, path: path.into(), message: message.into() }
    }

    fn invariant(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { kind: DocumentErrorKind::Invariant, path: path.into(), message: message.into() }
    }

    // Shape errors from constructors are schema errors; the rest are invariants.
    fn from_domain(path: impl Into<String>, e: Error) -> Self {
        match e {
            Error::ShapeMismatch(_) | Error::DimensionMismatch { .. } | Error::FactorCount { .. } => {
                Self::schema(path, e.to_string())
            }
            _ => Self::invariant(path, e.to_string()),
        }
    }

    pub fn code(&self) -> &'static str {
        match self.kind {
            DocumentErrorKind::Syntax { .. } => "E_SYNTAX",
            DocumentErrorKind::Schema => "E_SCHEMA",
            DocumentErrorKind::Invariant => "E_INVARIANT",
        }
    }

    /// `line:column` for syntax errors, the field path otherwise.
    pub fn location(&self) -> String {
        match self.kind {
            DocumentErrorKind::Syntax { line, column } => format!("{line}:{column}"),
            _ if self.path.is_empty() => ".".to_string(),
            _ => self.path.clone(),
        }
    }
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code(), self.location(), self.message)
    }
}

impl std::error::Error for DocumentError {}

type Matrix = Vec<Vec<f64>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    atoms: Vec<String>,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    dim: usize,
    norm: Exponent,
    ordered: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EndpointDoc {
    space: SpaceDoc,
    spec: SpecDoc,
    exponent: Exponent,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LpFunctionDoc {
    space: SpaceDoc,
    spec: SpecDoc,
    exponent: Exponent,
    values: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelDoc {
    space1: SpaceDoc,
    space2: SpaceDoc,
    domain_spec: SpecDoc,
    codomain_spec: SpecDoc,
    blocks: Vec<Vec<Matrix>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorDoc {
    domain: EndpointDoc,
    codomain: EndpointDoc,
    blocks: Vec<Vec<Matrix>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MultiplierDoc {
    space: SpaceDoc,
    spec: SpecDoc,
    blocks: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum FactorDoc {
    Space { spec: SpecDoc },
    Lp { space: SpaceDoc, exponent: Exponent },
    Product { left: Box<FactorDoc>, right: Box<FactorDoc> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorDoc {
    factors: Vec<FactorDoc>,
    /// Row-major over the factor axes.
    coefficients: Vec<f64>,
}

/// Parses a document from text.
pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DocumentError {
        kind: DocumentErrorKind::Syntax { line: e.line(), column: e.column() },
        path: String::new(),
        message: e.to_string(),
    })?;
    document_from_value(value)
}

/// Interprets an already parsed JSON value as a document.
pub fn document_from_value(value: Value) -> Result<Document, DocumentError> {
    let Value::Object(mut obj) = value else {
        return Err(DocumentError::schema("", "document must be a JSON object"));
    };
    let kind = match obj.remove("kind") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(DocumentError::schema("kind", "must be a string")),
        None => return Err(DocumentError::schema("kind", "missing field")),
    };
    match obj.remove("version") {
        Some(Value::String(v)) if v == FORMAT_VERSION => {}
        Some(Value::String(v)) => {
            return Err(DocumentError::schema("version", format!("unsupported version {v:?}, expected \"1\"")))
        }
        Some(_) => return Err(DocumentError::schema("version", "must be a string")),
        None => return Err(DocumentError::schema("version", "missing field")),
    }
    let body = Value::Object(obj);
    match kind.as_str() {
        "measure_space" => Ok(Document::MeasureSpace(space(decode(body)?, "")?)),
        "space_spec" => Ok(Document::SpaceSpec(spec(decode(body)?, "")?)),
        "lp_function" => lp_function(decode(body)?).map(Document::LpFunction),
        "kernel" => kernel(decode(body)?).map(Document::Kernel),
        "operator" => operator(decode(body)?).map(Document::Operator),
        "multiplier" => multiplier(decode(body)?).map(Document::Multiplier),
        "tensor_element" => tensor(decode(body)?).map(Document::TensorElement),
        other => Err(DocumentError::schema("kind", format!("unknown kind {other:?}"))),
    }
}

fn decode<T: DeserializeOwned>(body: Value) -> Result<T, DocumentError> {
    serde_path_to_error::deserialize(body).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        DocumentError::schema(path, e.into_inner().to_string())
    })
}

fn join(prefix: &str, field: &str) -> String {
    if prefix.is_empty() {
        field.to_string()
    } else {
        format!("{prefix}.{field}")
    }
}

fn space(d: SpaceDoc, path: &str) -> Result<MeasureSpace, DocumentError> {
    if d.atoms.len() != d.weights.len() {
        return Err(DocumentError::schema(
            join(path, "weights"),
            format!("{} weights for {} atoms", d.weights.len(), d.atoms.len()),
        ));
    }
    MeasureSpace::new(d.atoms, d.weights).map_err(|e| DocumentError::invariant(path, e.to_string()))
}

fn spec(d: SpecDoc, path: &str) -> Result<SpaceSpec, DocumentError> {
    SpaceSpec::new(d.dim, d.norm, d.ordered).map_err(|e| DocumentError::invariant(join(path, "dim"), e.to_string()))
}

fn endpoint(d: EndpointDoc, path: &str) -> Result<Endpoint, DocumentError> {
    Ok(Endpoint::new(space(d.space, &join(path, "space"))?, spec(d.spec, &join(path, "spec"))?, d.exponent))
}

fn matrix(rows: Matrix, shape: (usize, usize), path: &str) -> Result<DMatrix<f64>, DocumentError> {
    let (r, c) = shape;
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        let found_cols = rows.first().map_or(0, Vec::len);
        return Err(DocumentError::schema(
            path,
            format!("block is {}x{found_cols}, expected {r}x{c}", rows.len()),
        ));
    }
    Ok(DMatrix::from_row_iterator(r, c, rows.into_iter().flatten()))
}

fn lp_function(d: LpFunctionDoc) -> Result<LpFunction, DocumentError> {
    let s = space(d.space, "space")?;
    let sp = spec(d.spec, "spec")?;
    if d.values.len() != s.len() {
        return Err(DocumentError::schema("values", format!("{} values for {} atoms", d.values.len(), s.len())));
    }
    let mut values = Vec::with_capacity(s.len());
    for (i, v) in d.values.into_iter().enumerate() {
        if v.len() != sp.dim {
            return Err(DocumentError::schema(format!("values[{i}]"), format!("length {}, expected {}", v.len(), sp.dim)));
        }
        values.push(DVector::from_vec(v));
    }
    LpFunction::new(s, sp, d.exponent, values).map_err(|e| DocumentError::from_domain("values", e))
}

fn block_grid(
    blocks: Vec<Vec<Matrix>>,
    outer: usize,
    inner: usize,
    shape: (usize, usize),
) -> Result<Vec<Vec<DMatrix<f64>>>, DocumentError> {
    if blocks.len() != outer {
        return Err(DocumentError::schema("blocks", format!("{} block rows, expected {outer}", blocks.len())));
    }
    blocks
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != inner {
                return Err(DocumentError::schema(
                    format!("blocks[{i}]"),
                    format!("{} blocks, expected {inner}", row.len()),
                ));
            }
            row.into_iter().enumerate().map(|(j, b)| matrix(b, shape, &format!("blocks[{i}][{j}]"))).collect()
        })
        .collect()
}

fn kernel(d: KernelDoc) -> Result<Kernel, DocumentError> {
    let s1 = space(d.space1, "space1")?;
    let s2 = space(d.space2, "space2")?;
    let e = spec(d.domain_spec, "domain_spec")?;
    let f = spec(d.codomain_spec, "codomain_spec")?;
    let blocks = block_grid(d.blocks, s1.len(), s2.len(), (f.dim, e.dim))?;
    Kernel::new(s1, s2, e, f, blocks).map_err(|e| DocumentError::from_domain("blocks", e))
}

fn operator(d: OperatorDoc) -> Result<BlockOperator, DocumentError> {
    let dom = endpoint(d.domain, "domain")?;
    let cod = endpoint(d.codomain, "codomain")?;
    let blocks = block_grid(d.blocks, cod.space.len(), dom.space.len(), (cod.spec.dim, dom.spec.dim))?;
    BlockOperator::new(dom, cod, blocks).map_err(|e| DocumentError::from_domain("blocks", e))
}

fn multiplier(d: MultiplierDoc) -> Result<Multiplier, DocumentError> {
    let s = space(d.space, "space")?;
    let sp = spec(d.spec, "spec")?;
    if d.blocks.len() != s.len() {
        return Err(DocumentError::schema("blocks", format!("{} blocks for {} atoms", d.blocks.len(), s.len())));
    }
    let blocks = d
        .blocks
        .into_iter()
        .enumerate()
        .map(|(i, b)| matrix(b, (sp.dim, sp.dim), &format!("blocks[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Multiplier::new(s, sp, blocks).map_err(|e| DocumentError::from_domain("blocks", e))
}

fn factor(d: FactorDoc, path: &str) -> Result<Factor, DocumentError> {
    match d {
        FactorDoc::Space { spec: s } => Ok(Factor::Space(spec(s, &join(path, "spec"))?)),
        FactorDoc::Lp { space: s, exponent } => Ok(Factor::lp(space(s, &join(path, "space"))?, exponent)),
        FactorDoc::Product { left, right } => Ok(Factor::Product(
            Box::new(factor(*left, &join(path, "left"))?),
            Box::new(factor(*right, &join(path, "right"))?),
        )),
    }
}

fn tensor(d: TensorDoc) -> Result<TensorElement, DocumentError> {
    let factors = d
        .factors
        .into_iter()
        .enumerate()
        .map(|(i, f)| factor(f, &format!("factors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if factors.is_empty() {
        return Err(DocumentError::schema("factors", "at least one factor is required"));
    }
    TensorElement::new(factors, d.coefficients).map_err(|e| DocumentError::from_domain("coefficients", e))
}

fn space_doc(s: &MeasureSpace) -> SpaceDoc {
    SpaceDoc { atoms: s.atoms().to_vec(), weights: s.weights().to_vec() }
}

fn spec_doc(s: &SpaceSpec) -> SpecDoc {
    SpecDoc { dim: s.dim, norm: s.norm, ordered: s.ordered }
}

fn endpoint_doc(e: &Endpoint) -> EndpointDoc {
    EndpointDoc { space: space_doc(&e.space), spec: spec_doc(&e.spec), exponent: e.exponent }
}

fn rows(m: &DMatrix<f64>) -> Matrix {
    m.row_iter().map(|r| r.iter().cloned().collect()).collect()
}

fn factor_doc(f: &Factor) -> FactorDoc {
    match f {
        Factor::Space(s) => FactorDoc::Space { spec: spec_doc(s) },
        Factor::Lp { space, exponent } => FactorDoc::Lp { space: space_doc(space), exponent: *exponent },
        Factor::Product(a, b) => FactorDoc::Product { left: Box::new(factor_doc(a)), right: Box::new(factor_doc(b)) },
    }
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::MeasureSpace(_) => "measure_space",
            Document::SpaceSpec(_) => "space_spec",
            Document::LpFunction(_) => "lp_function",
            Document::Kernel(_) => "kernel",
            Document::Operator(_) => "operator",
            Document::Multiplier(_) => "multiplier",
            Document::TensorElement(_) => "tensor_element",
        }
    }

    pub fn to_value(&self) -> Value {
        let body = match self {
            Document::MeasureSpace(s) => serde_json::to_value(space_doc(s)),
            Document::SpaceSpec(s) => serde_json::to_value(spec_doc(s)),
            Document::LpFunction(f) => serde_json::to_value(LpFunctionDoc {
                space: space_doc(f.space()),
                spec: spec_doc(f.spec()),
                exponent: f.exponent(),
                values: f.values().iter().map(|v| v.iter().cloned().collect()).collect(),
            }),
            Document::Kernel(k) => serde_json::to_value(KernelDoc {
                space1: space_doc(k.space1()),
                space2: space_doc(k.space2()),
                domain_spec: spec_doc(k.domain_spec()),
                codomain_spec: spec_doc(k.codomain_spec()),
                blocks: (0..k.space1().len())
                    .map(|a| (0..k.space2().len()).map(|b| rows(k.block(a, b))).collect())
                    .collect(),
            }),
            Document::Operator(t) => serde_json::to_value(OperatorDoc {
                domain: endpoint_doc(t.domain()),
                codomain: endpoint_doc(t.codomain()),
                blocks: (0..t.codomain().space.len())
                    .map(|i| (0..t.domain().space.len()).map(|j| rows(t.block(i, j))).collect())
                    .collect(),
            }),
            Document::Multiplier(m) => serde_json::to_value(MultiplierDoc {
                space: space_doc(m.space()),
                spec: spec_doc(m.spec()),
                blocks: m.blocks().iter().map(rows).collect(),
            }),
            Document::TensorElement(z) => serde_json::to_value(TensorDoc {
                factors: z.factors().iter().map(factor_doc).collect(),
                coefficients: z.coefficients().to_vec(),
            }),
        }
        .expect("documents serialize");
        let Value::Object(fields) = body else { unreachable!("document bodies are objects") };
        let mut obj = Map::new();
        obj.insert("kind".into(), Value::String(self.kind().into()));
        obj.insert("version".into(), Value::String(FORMAT_VERSION.into()));
        obj.extend(fields);
        Value::Object(obj)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("documents serialize");
        s.push('\n');
        s
    }
}

impl From<MeasureSpace> for Document {
    fn from(v: MeasureSpace) -> Self {
        Document::MeasureSpace(v)
    }
}

impl From<SpaceSpec> for Document {
    fn from(v: SpaceSpec) -> Self {
        Document::SpaceSpec(v)
    }
}

impl From<LpFunction> for Document {
    fn from(v: LpFunction) -> Self {
        Document::LpFunction(v)
    }
}

impl From<Kernel> for Document {
    fn from(v: Kernel) -> Self {
        Document::Kernel(v)
    }
}

impl From<BlockOperator> for Document {
    fn from(v: BlockOperator) -> Self {
        Document::Operator(v)
    }
}

impl From<Multiplier> for Document {
    fn from(v: Multiplier) -> Self {
        Document::Multiplier(v)
    }
}

impl From<TensorElement> for Document {
    fn from(v: TensorElement) -> Self {
        Document::TensorElement(v)
    }
}
