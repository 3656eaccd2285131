//! JSON formats for complexes, symmetric forms, Gram matrices, split
//! specifications and acyclicity verdicts.
//!
//! Object keys are sorted (degrees are written as decimal strings), and
//! polynomials use the canonical text format, so serialization is
//! byte-stable.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde_json::{json, Map, Value};

use hermkos_core::complex::{GradedMap, TwistedFreeComplex, TwistedFreeModule};
use hermkos_core::duality::{dualize_complex, DualityDatum, SymmetricFormData};
use hermkos_core::koszul::{middle_split_injected, MiddleSplit};
use hermkos_core::verify::{AcyclicityVerdict, ChartHomology, Evidence, PointWitness, WindowTable};
use hermkos_core::{FieldSpec, GradedMatrix, HomogPoly, Mat, PolyRing, Sign};

/// Failure to read or interpret a document.
#[derive(Debug)]
pub enum FormatError {
    Io(std::io::Error),
    Json(serde_json::Error),
    /// The document does not follow the schema.
    Schema(String),
    /// The data violates a mathematical precondition.
    Core(hermkos_core::Error),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Io(e) => write!(f, "i/o error: {e}"),
            FormatError::Json(e) => write!(f, "invalid JSON: {e}"),
            FormatError::Schema(s) => write!(f, "schema error: {s}"),
            FormatError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<std::io::Error> for FormatError {
    fn from(e: std::io::Error) -> Self {
        FormatError::Io(e)
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

impl From<hermkos_core::Error> for FormatError {
    fn from(e: hermkos_core::Error) -> Self {
        FormatError::Core(e)
    }
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn schema(msg: impl Into<String>) -> FormatError {
    FormatError::Schema(msg.into())
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

fn field_of(v: &Value) -> Result<FieldSpec> {
    match v.get("field") {
        None => Ok(FieldSpec::Rationals),
        Some(Value::String(s)) => Ok(FieldSpec::parse(s)?),
        Some(_) => Err(schema("`field` must be a string")),
    }
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| schema(format!("{what} must be an integer")))
}

fn degree_key(k: &str) -> Result<i64> {
    k.parse().map_err(|_| schema(format!("degree key `{k}` is not an integer")))
}

fn object<'a>(v: &'a Value, key: &str) -> Result<&'a Map<String, Value>> {
    v.get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| schema(format!("missing object `{key}`")))
}

/// Rows of polynomial strings; rows index the target basis.
pub fn graded_matrix_to_json(m: &GradedMatrix) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|p| {
            Value::Array(
                (0..m.ncols())
                    .map(|q| Value::String(m.get(p, q).map_or_else(|| "0".to_string(), |v| v.to_string())))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

fn graded_matrix_from_json(v: &Value, ring: PolyRing, src: &[i64], tgt: &[i64]) -> Result<GradedMatrix> {
    let rows = v.as_array().ok_or_else(|| schema("matrix must be an array of rows"))?;
    if rows.len() != tgt.len() {
        return Err(schema(format!("matrix has {} rows, expected {}", rows.len(), tgt.len())));
    }
    let mut m = GradedMatrix::zero(ring, src.to_vec(), tgt.to_vec());
    for (p, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| schema("matrix row must be an array"))?;
        if row.len() != src.len() {
            return Err(schema(format!("matrix row has {} entries, expected {}", row.len(), src.len())));
        }
        for (q, cell) in row.iter().enumerate() {
            let s = cell.as_str().ok_or_else(|| schema("matrix entries must be strings"))?;
            let deg = tgt[p] - src[q];
            if s.trim() == "0" {
                continue;
            }
            if deg < 0 {
                return Err(schema(format!("entry ({p},{q}) must be 0: twist drops by {}", -deg)));
            }
            let poly = HomogPoly::parse(s, ring, Some(deg as u32))?;
            if !poly.is_zero() {
                m.set(p, q, poly)?;
            }
        }
    }
    Ok(m)
}

/// `{"field", "r", "terms": {degree: [twists]}, "diff": {degree: [[poly]]}}`.
pub fn complex_to_json(c: &TwistedFreeComplex) -> Value {
    let terms: Map<String, Value> = c
        .terms()
        .iter()
        .map(|(i, m)| (i.to_string(), json!(m.twists)))
        .collect();
    let diff: Map<String, Value> = c
        .diffs()
        .iter()
        .map(|(i, d)| (i.to_string(), graded_matrix_to_json(d)))
        .collect();
    json!({
        "field": c.ring().field().to_string(),
        "r": c.r(),
        "terms": terms,
        "diff": diff,
    })
}

/// Reads a complex and checks `d ∘ d = 0`; `field` defaults to the rationals.
pub fn complex_from_json(v: &Value) -> Result<TwistedFreeComplex> {
    let field = field_of(v)?;
    let r = as_i64(v.get("r").ok_or_else(|| schema("missing `r`"))?, "`r`")?;
    if r < 1 {
        return Err(schema("`r` must be at least 1"));
    }
    let ring = PolyRing::projective(r as usize, field);
    let mut terms = BTreeMap::new();
    for (k, tw) in object(v, "terms")? {
        let twists = tw
            .as_array()
            .ok_or_else(|| schema("term must be an array of twists"))?
            .iter()
            .map(|t| as_i64(t, "twist"))
            .collect::<Result<Vec<i64>>>()?;
        terms.insert(degree_key(k)?, TwistedFreeModule::new(twists));
    }
    let empty = Map::new();
    let diffs_json = match v.get("diff") {
        None => &empty,
        Some(d) => d.as_object().ok_or_else(|| schema("`diff` must be an object"))?,
    };
    let mut diffs = BTreeMap::new();
    for (k, m) in diffs_json {
        let i = degree_key(k)?;
        let src = terms.get(&i).map_or(Vec::new(), |t: &TwistedFreeModule| t.twists.clone());
        let tgt = terms.get(&(i + 1)).map_or(Vec::new(), |t| t.twists.clone());
        diffs.insert(i, graded_matrix_from_json(m, ring, &src, &tgt)?);
    }
    let c = TwistedFreeComplex::new(ring, terms, diffs)?;
    if let Some(v) = c.validate().first() {
        return Err(schema(format!("not a complex: {v:?}")));
    }
    Ok(c)
}

/// `{"complex", "datum": {"t", "n"}, "epsilon", "components": {degree: [[poly]]}}`.
pub fn form_to_json(phi: &SymmetricFormData) -> Value {
    let comps: Map<String, Value> = phi
        .form
        .components()
        .iter()
        .map(|(i, m)| (i.to_string(), graded_matrix_to_json(m)))
        .collect();
    json!({
        "complex": complex_to_json(phi.complex()),
        "datum": {"t": phi.datum.t, "n": phi.datum.n},
        "epsilon": phi.epsilon.as_i64(),
        "components": comps,
    })
}

/// Reads a form, checking that it is a chain map into the dual.
pub fn form_from_json(v: &Value) -> Result<SymmetricFormData> {
    let a = complex_from_json(v.get("complex").ok_or_else(|| schema("missing `complex`"))?)?;
    let d = v.get("datum").ok_or_else(|| schema("missing `datum`"))?;
    let datum = DualityDatum::new(
        as_i64(d.get("t").ok_or_else(|| schema("missing `datum.t`"))?, "`datum.t`")?,
        as_i64(d.get("n").ok_or_else(|| schema("missing `datum.n`"))?, "`datum.n`")?,
    );
    let eps = v
        .get("epsilon")
        .and_then(Value::as_i64)
        .and_then(Sign::from_i64)
        .ok_or_else(|| schema("`epsilon` must be 1 or -1"))?;
    let target = dualize_complex(&a, datum);
    let mut comps = BTreeMap::new();
    for (k, m) in object(v, "components")? {
        let i = degree_key(k)?;
        comps.insert(i, graded_matrix_from_json(m, a.ring(), a.term(i), target.term(i))?);
    }
    let form = GradedMap::new(a, target, 0, comps)?;
    Ok(SymmetricFormData::new(form, datum, eps)?)
}

/// A matrix of field elements as an array of rows of strings.
pub fn gram_to_json(m: &Mat) -> Value {
    Value::Array(
        m.to_strings()
            .into_iter()
            .map(|row| Value::Array(row.into_iter().map(Value::String).collect()))
            .collect(),
    )
}

/// Reads a matrix of field elements; `cols` fixes the width of an empty
/// matrix (ignored otherwise).
pub fn gram_from_json(v: &Value, field: FieldSpec, cols: usize) -> Result<Mat> {
    let rows = v.as_array().ok_or_else(|| schema("matrix must be an array of rows"))?;
    let width = rows.first().and_then(Value::as_array).map_or(cols, Vec::len);
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| schema("matrix row must be an array"))?;
        let parsed = row
            .iter()
            .map(|c| match c {
                Value::String(s) => Ok(field.parse_element(s)?),
                Value::Number(n) => n
                    .as_i64()
                    .map(|x| field.from_i64(x))
                    .ok_or_else(|| schema("matrix entries must be integers or strings")),
                _ => Err(schema("matrix entries must be integers or strings")),
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(parsed);
    }
    Ok(Mat::from_rows(field, out, width)?)
}

/// The nontrivial middle data for the odd construction:
/// `{"sigma": [[..]], "alpha": [[..]], "lagrangian": [[..]] (optional)}`.
///
/// `sigma` is the Gram matrix of `(𝒩, σ)`, `alpha` the `dim 𝒩 × rank 𝒮`
/// matrix of `α`, and `lagrangian` a basis (as columns) of the Lagrangian in
/// `K_{-s} ⊕ 𝒩` coordinates.
pub fn split_from_json(v: &Value, r: usize, field: FieldSpec) -> Result<MiddleSplit> {
    let sigma = gram_from_json(v.get("sigma").ok_or_else(|| schema("missing `sigma`"))?, field, 0)?;
    let alpha = match v.get("alpha") {
        Some(a) => gram_from_json(a, field, 0)?,
        None => Mat::zeros(field, sigma.rows(), 0),
    };
    let lagrangian = match v.get("lagrangian") {
        Some(l) => Some(gram_from_json(l, field, 0)?),
        None => None,
    };
    Ok(middle_split_injected(r, field, sigma, alpha, lagrangian)?)
}

pub fn split_to_json(s: &MiddleSplit) -> Value {
    json!({
        "sigma": gram_to_json(s.sigma.gram()),
        "alpha": gram_to_json(&s.alpha),
        "lagrangian": gram_to_json(&s.iota),
    })
}

/// Reads and parses a JSON file.
pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn witness_to_json(w: &PointWitness) -> Value {
    json!({
        "chart": w.chart,
        "point": w.point,
        "prime": w.prime,
        "degree": w.degree,
        "rank_out": w.rank_out,
        "rank_in": w.rank_in,
        "dim": w.dim,
    })
}

fn homology_to_json(charts: &[ChartHomology]) -> Value {
    Value::Array(
        charts
            .iter()
            .map(|c| {
                let degrees: Map<String, Value> = c
                    .degrees
                    .iter()
                    .map(|(i, h)| (i.to_string(), json!({"free_rank": h.free_rank, "torsion": h.torsion})))
                    .collect();
                json!({"chart": c.chart, "degrees": degrees})
            })
            .collect(),
    )
}

pub fn window_to_json(t: &WindowTable) -> Value {
    let dims: Map<String, Value> = t
        .dims
        .iter()
        .map(|(e, row)| {
            let row: Map<String, Value> = row.iter().map(|(i, d)| (i.to_string(), json!(d))).collect();
            (e.to_string(), Value::Object(row))
        })
        .collect();
    let flagged: Vec<Value> = t
        .flagged()
        .into_iter()
        .map(|(e, i, d)| json!({"internal_degree": e, "degree": i, "dim": d}))
        .collect();
    json!({
        "window": [t.window.0, t.window.1],
        "threshold": t.threshold,
        "sound_from": t.sound_from,
        "prime": t.prime,
        "dims": dims,
        "flagged": flagged,
    })
}

fn evidence_to_json(e: &Evidence) -> Value {
    match e {
        Evidence::Homology(h) => json!({"homology": homology_to_json(h)}),
        Evidence::Points { charts, trials } => json!({"points": {"charts": charts, "trials": trials}}),
        Evidence::Witness(w) => json!({"witness": witness_to_json(w)}),
        Evidence::Window(t) => json!({"window": window_to_json(t)}),
        Evidence::Combined(vs) => json!({"combined": vs.iter().map(verdict_to_json).collect::<Vec<_>>()}),
        Evidence::Note(s) => json!({"note": s}),
    }
}

/// `{"method", "verdict", "params", "evidence", "bound"}`.
pub fn verdict_to_json(v: &AcyclicityVerdict) -> Value {
    json!({
        "method": v.method.as_str(),
        "verdict": v.verdict.as_str(),
        "params": v.params,
        "evidence": evidence_to_json(&v.evidence),
        "bound": v.bound,
    })
}
