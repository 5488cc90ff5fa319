//! JSON file formats: field descriptors, modules, quivers, representations,
//! and classification reports.
//!
//! Conventions: little-endian coefficient arrays for extension-field
//! elements and polynomials; rationals as reduced strings "a/b"; words as
//! arrays of letters, most significant (last applied) first.

use std::ops::Range;

use serde_json::{json, Value};

use crate::classify::ClassificationReport;
use crate::field::{FieldCtx, FieldElem, FieldKind, SigmaKind};
use crate::field::{parse_rational, Ctx};
use crate::linalg::Matrix;
use crate::quiver::{KraftQuiver, LabeledGraph, Letter, Word};
use crate::repn::{GPModule, Representation};
use crate::Error;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parse a JSON document.
pub fn parse(s: &str) -> Result<Value, Error> {
    serde_json::from_str(s).map_err(|e| parse_err(format!("invalid JSON: {e}")))
}

/// Render a JSON value the way every command writes files: pretty-printed
/// with a trailing newline, byte-deterministic for a fixed value.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}

// ---- field descriptors ----

pub fn field_to_json(ctx: &Ctx) -> Value {
    match &ctx.kind {
        FieldKind::Rationals => json!({"kind": "Q"}),
        FieldKind::Prime { p } => json!({"kind": "Fq", "p": p, "k": 1}),
        FieldKind::Extension { p, k, modulus } => {
            json!({"kind": "Fq", "p": p, "k": k, "modulus": modulus})
        }
    }
}

pub fn field_from_json(v: &Value) -> Result<Ctx, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("field descriptor must be an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("field descriptor needs a \"kind\""))?;
    match kind {
        "Q" => Ok(FieldCtx::rationals()),
        "Fq" => {
            let p = obj
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| parse_err("Fq descriptor needs a prime \"p\""))?;
            let k = obj.get("k").and_then(Value::as_u64).unwrap_or(1) as usize;
            if k <= 1 {
                FieldCtx::prime(p)
            } else {
                match obj.get("modulus") {
                    None | Some(Value::Null) => {
                        let q = p
                            .checked_pow(k as u32)
                            .ok_or_else(|| parse_err("field size overflows"))?;
                        FieldCtx::gf(q)
                    }
                    Some(m) => {
                        let coeffs: Vec<u64> = m
                            .as_array()
                            .ok_or_else(|| parse_err("modulus must be an array"))?
                            .iter()
                            .map(|c| {
                                c.as_u64()
                                    .ok_or_else(|| parse_err("modulus coefficients must be integers"))
                            })
                            .collect::<Result<_, _>>()?;
                        FieldCtx::extension(p, k, coeffs, SigmaKind::Frobenius)
                    }
                }
            }
        }
        other => Err(parse_err(format!("unknown field kind {other:?}"))),
    }
}

// ---- field elements and matrices ----

pub fn elem_to_json(ctx: &Ctx, e: &FieldElem) -> Value {
    match e {
        FieldElem::Fp(v) => json!(v),
        FieldElem::Ext(coeffs) => json!(coeffs),
        FieldElem::Rat(_) => json!(ctx.show(e)),
    }
}

pub fn elem_from_json(ctx: &Ctx, v: &Value) -> Result<FieldElem, Error> {
    match (&ctx.kind, v) {
        (FieldKind::Rationals, Value::String(s)) => parse_rational(s),
        (FieldKind::Rationals, Value::Number(n)) => {
            let i = n
                .as_i64()
                .ok_or_else(|| parse_err(format!("not an integer rational: {n}")))?;
            Ok(ctx.from_int(i))
        }
        (FieldKind::Prime { .. }, Value::Number(n)) => {
            let i = n
                .as_i64()
                .ok_or_else(|| parse_err(format!("not an integer residue: {n}")))?;
            Ok(ctx.from_int(i))
        }
        (FieldKind::Extension { p, k, .. }, Value::Array(a)) => {
            if a.len() > *k {
                return Err(parse_err(format!(
                    "extension element has {} coefficients, field degree is {k}",
                    a.len()
                )));
            }
            let mut coeffs = vec![0u64; *k];
            for (i, c) in a.iter().enumerate() {
                let c = c
                    .as_u64()
                    .ok_or_else(|| parse_err("extension coefficients must be non-negative integers"))?;
                coeffs[i] = c % p;
            }
            Ok(FieldElem::Ext(coeffs))
        }
        (FieldKind::Extension { .. }, Value::Number(n)) => {
            // allow plain integers for prime-subfield elements
            let i = n
                .as_i64()
                .ok_or_else(|| parse_err(format!("not an integer: {n}")))?;
            Ok(ctx.from_int(i))
        }
        _ => Err(parse_err(format!("invalid field element encoding: {v}"))),
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|i| {
                Value::Array(
                    (0..m.cols)
                        .map(|j| elem_to_json(&m.ctx, &m[(i, j)]))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Parse a rows×cols matrix; the expected shape is part of the contract
/// (row count 0 is legal and encodes as []).
pub fn matrix_from_json(ctx: &Ctx, v: &Value, rows: usize, cols: usize) -> Result<Matrix, Error> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err("matrix must be an array of rows"))?;
    if arr.len() != rows {
        return Err(parse_err(format!(
            "matrix has {} rows, expected {rows}",
            arr.len()
        )));
    }
    let mut m = Matrix::zeros(ctx, rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| parse_err("matrix rows must be arrays"))?;
        if row.len() != cols {
            return Err(parse_err(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, e) in row.iter().enumerate() {
            m[(i, j)] = elem_from_json(ctx, e)?;
        }
    }
    Ok(m)
}

// ---- modules ----

pub fn module_to_json(m: &GPModule, blocks: Option<&[Range<usize>]>) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("field".into(), field_to_json(&m.ctx));
    obj.insert("dim".into(), json!(m.dim));
    obj.insert("F".into(), matrix_to_json(&m.f));
    obj.insert("V".into(), matrix_to_json(&m.v));
    if let Some(bs) = blocks {
        obj.insert(
            "blocks".into(),
            Value::Array(bs.iter().map(|r| json!([r.start, r.end])).collect()),
        );
    }
    Value::Object(obj)
}

pub fn module_from_json(v: &Value) -> Result<GPModule, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("module file must be an object"))?;
    let ctx = field_from_json(
        obj.get("field")
            .ok_or_else(|| parse_err("module file needs a \"field\""))?,
    )?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("module file needs an integer \"dim\""))? as usize;
    let f = matrix_from_json(
        &ctx,
        obj.get("F").ok_or_else(|| parse_err("module file needs \"F\""))?,
        dim,
        dim,
    )?;
    let vm = matrix_from_json(
        &ctx,
        obj.get("V").ok_or_else(|| parse_err("module file needs \"V\""))?,
        dim,
        dim,
    )?;
    GPModule::new(&ctx, f, vm)
}

// ---- words, quivers, representations ----

pub fn word_to_json(w: &Word) -> Value {
    Value::Array(w.0.iter().map(|l| json!(l.word_symbol())).collect())
}

pub fn word_from_json(v: &Value) -> Result<Word, Error> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err("word must be an array of letters"))?;
    let mut letters = Vec::with_capacity(arr.len());
    for l in arr {
        let s = l
            .as_str()
            .ok_or_else(|| parse_err("letters must be strings"))?;
        letters.push(Letter::parse(s)?);
    }
    Ok(Word(letters))
}

pub fn graph_to_json(g: &LabeledGraph) -> Value {
    json!({
        "vertices": (0..g.n_vertices()).collect::<Vec<usize>>(),
        "edges": g.edges.iter().map(|e| json!({
            "tail": e.tail,
            "head": e.head,
            "label": e.label.arrow_symbol(),
        })).collect::<Vec<Value>>(),
    })
}

pub fn graph_from_json(v: &Value) -> Result<LabeledGraph, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("quiver must be an object"))?;
    let ids: Vec<i64> = obj
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("quiver needs a \"vertices\" array"))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| parse_err("vertex ids must be integers")))
        .collect::<Result<_, _>>()?;
    let mut g = LabeledGraph::new();
    for id in &ids {
        g.add_vertex(id.to_string());
    }
    let index_of = |id: i64| -> Result<usize, Error> {
        ids.iter()
            .position(|&x| x == id)
            .ok_or_else(|| parse_err(format!("edge references unknown vertex {id}")))
    };
    for e in obj
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("quiver needs an \"edges\" array"))?
    {
        let eo = e
            .as_object()
            .ok_or_else(|| parse_err("edges must be objects"))?;
        let tail = eo
            .get("tail")
            .and_then(Value::as_i64)
            .ok_or_else(|| parse_err("edge needs an integer \"tail\""))?;
        let head = eo
            .get("head")
            .and_then(Value::as_i64)
            .ok_or_else(|| parse_err("edge needs an integer \"head\""))?;
        let label = Letter::parse(
            eo.get("label")
                .and_then(Value::as_str)
                .ok_or_else(|| parse_err("edge needs a \"label\""))?,
        )?;
        g.add_edge(index_of(tail)?, index_of(head)?, label);
    }
    Ok(g)
}

/// A parsed quiver-spec file: field, Kraft quiver, and a representation
/// on it.
pub struct QuiverSpec {
    pub ctx: Ctx,
    pub quiver: KraftQuiver,
    pub rep: Representation,
}

pub fn quiver_spec_from_json(v: &Value) -> Result<QuiverSpec, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("quiver spec must be an object"))?;
    let ctx = field_from_json(
        obj.get("field")
            .ok_or_else(|| parse_err("quiver spec needs a \"field\""))?,
    )?;
    let qv = obj
        .get("quiver")
        .ok_or_else(|| parse_err("quiver spec needs a \"quiver\""))?;
    let quiver = quiver_from_spec_value(qv)?;
    let rep = match obj.get("rep") {
        None | Some(Value::String(_)) => {
            if let Some(Value::String(s)) = obj.get("rep") {
                if s != "trivial" {
                    return Err(parse_err(format!("unknown representation shorthand {s:?}")));
                }
            }
            Representation::trivial(&ctx, quiver.graph())
        }
        Some(rv) => rep_from_json(&ctx, quiver.graph(), rv)?,
    };
    Ok(QuiverSpec { ctx, quiver, rep })
}

/// A quiver given in full, or as the word / periodic-word shorthands.
pub fn quiver_from_spec_value(v: &Value) -> Result<KraftQuiver, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("quiver must be an object"))?;
    if let Some(w) = obj.get("word") {
        return Ok(crate::quiver::quiver_of_word(&word_from_json(w)?));
    }
    if let Some(p) = obj.get("periodic") {
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err("periodic shorthand needs an integer \"m\""))?;
        return crate::quiver::quiver_of_periodic(&word_from_json(p)?, m as usize);
    }
    KraftQuiver::new(graph_from_json(v)?)
}

pub fn quiver_spec_to_json(spec: &QuiverSpec) -> Value {
    json!({
        "field": field_to_json(&spec.ctx),
        "quiver": graph_to_json(spec.quiver.graph()),
        "rep": rep_to_json(&spec.rep),
    })
}

pub fn rep_to_json(rep: &Representation) -> Value {
    let dims: serde_json::Map<String, Value> = rep
        .dims
        .iter()
        .enumerate()
        .map(|(i, d)| (i.to_string(), json!(d)))
        .collect();
    json!({
        "dims": dims,
        "maps": rep.maps.iter().enumerate().map(|(i, m)| json!({
            "edge": i,
            "matrix": matrix_to_json(m),
        })).collect::<Vec<Value>>(),
    })
}

pub fn rep_from_json(
    ctx: &Ctx,
    graph: &LabeledGraph,
    v: &Value,
) -> Result<Representation, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("representation must be \"trivial\" or an object"))?;
    let dims_obj = obj
        .get("dims")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("representation needs a \"dims\" object"))?;
    let mut dims = vec![0usize; graph.n_vertices()];
    for (key, d) in dims_obj {
        let i: usize = key
            .parse()
            .map_err(|_| parse_err(format!("dims key {key:?} is not a vertex index")))?;
        if i >= dims.len() {
            return Err(parse_err(format!("dims key {i} out of range")));
        }
        dims[i] = d
            .as_u64()
            .ok_or_else(|| parse_err("dims values must be integers"))? as usize;
    }
    if dims_obj.len() != graph.n_vertices() {
        return Err(parse_err(format!(
            "dims lists {} vertices, quiver has {}",
            dims_obj.len(),
            graph.n_vertices()
        )));
    }
    let maps_arr = obj
        .get("maps")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("representation needs a \"maps\" array"))?;
    let mut maps: Vec<Option<Matrix>> = vec![None; graph.edges.len()];
    for mv in maps_arr {
        let mo = mv
            .as_object()
            .ok_or_else(|| parse_err("map entries must be objects"))?;
        let e = mo
            .get("edge")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err("map entry needs an integer \"edge\""))? as usize;
        if e >= maps.len() {
            return Err(parse_err(format!("edge index {e} out of range")));
        }
        if maps[e].is_some() {
            return Err(parse_err(format!("edge {e} mapped twice")));
        }
        let edge = &graph.edges[e];
        let m = matrix_from_json(
            ctx,
            mo.get("matrix")
                .ok_or_else(|| parse_err("map entry needs a \"matrix\""))?,
            dims[edge.head],
            dims[edge.tail],
        )?;
        maps[e] = Some(m);
    }
    let maps: Vec<Matrix> = maps
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| parse_err(format!("edge {i} has no map"))))
        .collect::<Result<_, _>>()?;
    Representation::new(ctx, graph.clone(), dims, maps)
}

// ---- reports ----

pub fn report_to_json(r: &ClassificationReport) -> Value {
    json!({
        "linear": r.linear.iter().map(|(w, mult)| json!({
            "word": word_to_json(w),
            "mult": mult,
        })).collect::<Vec<Value>>(),
        "circular": r.circular.iter().map(|e| json!({
            "pattern": word_to_json(&e.pattern),
            "dim": e.dim,
            "monodromy": matrix_to_json(&e.monodromy.matrix),
            "twist": e.monodromy.twist,
            "canonical_form": match &e.canonical_form {
                None => Value::Null,
                Some(polys) => Value::Array(polys.iter().map(|p| Value::Array(
                    p.coeffs.iter().map(|c| elem_to_json(&r.ctx, c)).collect()
                )).collect()),
            },
        })).collect::<Vec<Value>>(),
        "dim": r.dim,
    })
}
