//! JSON file formats: partitions, factored values, series, reports, sign
//! files and chart files. Rationals are written as `"p/q"` strings.

use std::str::FromStr;

use dt4_core::localization::FormCoeff;
use dt4_core::verifier::{
    Provenance, SignAssignment, ToricChart, VerificationReport, Witness,
};
use dt4_core::{BigRational, CanonicalKey, DPartition, LinearFormFactored, PartitionError, TruncatedSeries};
use dt4_core::poly::Coeff;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
    #[error("invalid partition")]
    Partition(#[from] PartitionError),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

pub fn rational_to_string(q: &BigRational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<BigRational, FormatError> {
    BigRational::from_str(s.trim()).map_err(|_| invalid(format!("not a rational number: {s:?}")))
}

/// `{"dim": 3, "cells": [[i, j, k, l], ...]}` with 1-based cells, or
/// `{"monomials": [[a, b, c, e], ...]}` listing the exponents of `Z_π`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionFile {
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomials: Option<Vec<[u32; 4]>>,
}

fn default_dim() -> usize {
    3
}

pub fn parse_partition(text: &str) -> Result<DPartition, FormatError> {
    let file: PartitionFile = serde_json::from_str(text)?;
    match (file.cells, file.monomials) {
        (Some(cells), None) => Ok(DPartition::from_cells(file.dim, cells)?),
        (None, Some(mons)) if file.dim == 3 => Ok(DPartition::from_monomials(&mons)?),
        (None, Some(_)) => Err(invalid("monomials describe solid partitions only (dim 3)")),
        _ => Err(invalid("exactly one of \"cells\" or \"monomials\" is required")),
    }
}

pub fn partition_to_json(pi: &DPartition) -> Value {
    json!({ "dim": pi.dim(), "cells": pi.cells() })
}

/// `{"scalar": "p/q", "factors": [{"form": [c1, c2, c3], "exp": e}, ...]}`.
pub fn factored_to_json<R: FormCoeff>(f: &LinearFormFactored<R>) -> Value {
    let factors: Vec<Value> = f
        .factors()
        .map(|(form, e)| {
            let cs: Vec<String> = form.coeffs().iter().map(FormCoeff::render).collect();
            json!({ "form": cs, "exp": e })
        })
        .collect();
    json!({ "scalar": rational_to_string(f.scalar()), "factors": factors })
}

pub fn factored_from_json(v: &Value) -> Result<LinearFormFactored<BigRational>, FormatError> {
    let scalar = v
        .get("scalar")
        .and_then(Value::as_str)
        .ok_or_else(|| invalid("factored value needs a \"scalar\" string"))?;
    let scalar = parse_rational(scalar)?;
    let factors = v
        .get("factors")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("factored value needs a \"factors\" array"))?;
    let mut parts = Vec::with_capacity(factors.len());
    for f in factors {
        let form = f
            .get("form")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 3)
            .ok_or_else(|| invalid("each factor needs a 3-element \"form\""))?;
        let mut cs = Vec::with_capacity(3);
        for c in form {
            let s = c.as_str().ok_or_else(|| invalid("form coefficients are strings"))?;
            cs.push(parse_rational(s)?);
        }
        let exp = f
            .get("exp")
            .and_then(Value::as_i64)
            .ok_or_else(|| invalid("each factor needs an integer \"exp\""))?;
        let coeffs: [BigRational; 3] = cs.try_into().expect("length checked");
        parts.push((coeffs, exp));
    }
    LinearFormFactored::from_parts(scalar, parts).map_err(|e| invalid(e.to_string()))
}

/// `{"order": N, "coeffs": [...]}`.
pub fn series_to_json<C: Coeff>(s: &TruncatedSeries<C>, render: impl Fn(&C) -> String) -> Value {
    let coeffs: Vec<String> = s.coeffs().iter().map(render).collect();
    json!({ "order": s.order(), "coeffs": coeffs })
}

fn witness_to_json(w: &Witness) -> Value {
    json!({
        "q_power": w.q_power,
        "monomial": w.monomial,
        "point": w.point.iter().map(rational_to_string).collect::<Vec<_>>(),
        "key": w.key.as_ref().map(|k| k.as_str().to_string()),
        "detail": w.detail,
    })
}

pub fn report_to_json(r: &VerificationReport) -> Value {
    json!({
        "target": r.target.as_str(),
        "order": r.order,
        "trials": r.trials,
        "seed": r.seed,
        "status": r.status.as_str(),
        "witnesses": r.witnesses.iter().map(witness_to_json).collect::<Vec<_>>(),
        "notes": r.notes,
        "elapsed_ms": r.elapsed_ms,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct SignLine {
    key: String,
    sign: i8,
    #[serde(default)]
    provenance: Option<String>,
}

/// JSON lines `{"key": ..., "sign": 1 | -1, "provenance": ...}`; blank lines are skipped.
pub fn parse_signs(text: &str) -> Result<SignAssignment, FormatError> {
    let mut out = SignAssignment::new();
    for (no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let l: SignLine = serde_json::from_str(line)
            .map_err(|e| invalid(format!("sign file line {}: {e}", no + 1)))?;
        if l.sign != 1 && l.sign != -1 {
            return Err(invalid(format!("sign file line {}: sign must be 1 or -1", no + 1)));
        }
        let provenance = match l.provenance.as_deref() {
            None => Provenance::UserSupplied,
            Some(p) => Provenance::parse(p)
                .ok_or_else(|| invalid(format!("sign file line {}: unknown provenance {p:?}", no + 1)))?,
        };
        out.insert(CanonicalKey::from_string(l.key), l.sign, provenance);
    }
    Ok(out)
}

pub fn signs_to_lines(signs: &SignAssignment) -> String {
    let mut out = String::new();
    for (key, sign, prov) in signs.iter() {
        let line = SignLine {
            key: key.as_str().to_string(),
            sign,
            provenance: Some(prov.as_str().to_string()),
        };
        out.push_str(&serde_json::to_string(&line).expect("serializable"));
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartFile {
    charts: Vec<ChartSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartSpec {
    tangent: [[i64; 4]; 4],
    bundle: [i64; 4],
}

/// `{"charts": [{"tangent": [[..], [..], [..], [..]], "bundle": [d1, d2, d3, d4]}, ...]}`.
pub fn parse_charts(text: &str) -> Result<Vec<ToricChart>, FormatError> {
    let file: ChartFile = serde_json::from_str(text)?;
    if file.charts.is_empty() {
        return Err(invalid("chart file lists no charts"));
    }
    Ok(file
        .charts
        .into_iter()
        .map(|c| ToricChart {
            tangent: c.tangent,
            bundle: c.bundle,
        })
        .collect())
}

pub fn charts_to_json(charts: &[ToricChart]) -> Value {
    let charts: Vec<Value> = charts
        .iter()
        .map(|c| json!({ "tangent": c.tangent, "bundle": c.bundle }))
        .collect();
    json!({ "charts": charts })
}
