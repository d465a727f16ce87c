//! JSON operator files:
//!
//! ```json
//! {"name": "divergence", "n": 2, "k": 1, "dimV": 2, "dimW": 1,
//!  "terms": [{"alpha": [1, 0], "matrix": [[1, 0]]}, {"alpha": [0, 1], "matrix": [[0, 1]]}]}
//! ```
//!
//! Scalars are JSON numbers (integers or finite decimals, read exactly) or
//! `"p/q"` strings. Serialization writes integers as numbers and every other
//! rational as a `"p/q"` string, with terms in multi-index order.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde_json::{Map, Value};

use super::Operator;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::symbol::{Mat, MultiIndex};
use crate::Rational;

fn err(position: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        position: position.into(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(key, format!("missing field \"{key}\"")))
}

fn uint(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    field(obj, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| err(key, "expected a non-negative integer"))
}

fn scalar(value: &Value, position: &str) -> Result<Rational> {
    let text = match value {
        Value::Number(num) => num.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(err(position, "expected a number or a \"p/q\" string")),
    };
    parse_rational(&text).ok_or_else(|| err(position, format!("non-numeric coefficient entry {text:?}")))
}

/// Parses an operator definition.
pub fn parse_operator(text: &str) -> Result<Operator> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let obj = root.as_object().ok_or_else(|| err("$", "expected a JSON object"))?;

    let name = field(obj, "name")?
        .as_str()
        .ok_or_else(|| err("name", "expected a string"))?
        .to_string();
    let n = uint(obj, "n")?;
    let k = uint(obj, "k")? as u32;
    let dim_v = uint(obj, "dimV")?;
    let dim_w = uint(obj, "dimW")?;
    if n == 0 || dim_v == 0 || dim_w == 0 {
        return Err(err("$", "n, dimV and dimW must be positive"));
    }

    let terms = field(obj, "terms")?
        .as_array()
        .ok_or_else(|| err("terms", "expected an array"))?;
    let mut seen = BTreeSet::new();
    let mut parsed = Vec::with_capacity(terms.len());
    for (t, term) in terms.iter().enumerate() {
        let at = |suffix: &str| format!("terms[{t}]{suffix}");
        let term = term.as_object().ok_or_else(|| err(at(""), "expected an object"))?;

        let alpha = term
            .get("alpha")
            .and_then(Value::as_array)
            .ok_or_else(|| err(at(".alpha"), "expected an array of integers"))?;
        let entries = alpha
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.as_u64()
                    .and_then(|v| u32::try_from(v).ok())
                    .ok_or_else(|| err(at(&format!(".alpha[{i}]")), "expected a non-negative integer"))
            })
            .collect::<Result<Vec<u32>>>()?;
        if entries.len() != n {
            return Err(err(
                at(".alpha"),
                format!("dimension inconsistency: multi-index has {} entries, n = {n}", entries.len()),
            ));
        }
        let alpha = MultiIndex::new(entries);
        if alpha.order() != k {
            return Err(err(
                at(".alpha"),
                format!("index order mismatch: |alpha| = {}, k = {k}", alpha.order()),
            ));
        }
        if !seen.insert(alpha.clone()) {
            return Err(err(at(".alpha"), format!("duplicate multi-index {alpha:?}")));
        }

        let rows = term
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| err(at(".matrix"), "expected an array of rows"))?;
        if rows.len() != dim_w {
            return Err(err(
                at(".matrix"),
                format!("dimension inconsistency: {} rows, dimW = {dim_w}", rows.len()),
            ));
        }
        let mut data = Vec::with_capacity(dim_w * dim_v);
        for (r, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| err(at(&format!(".matrix[{r}]")), "expected an array"))?;
            if row.len() != dim_v {
                return Err(err(
                    at(&format!(".matrix[{r}]")),
                    format!("dimension inconsistency: {} columns, dimV = {dim_v}", row.len()),
                ));
            }
            for (c, v) in row.iter().enumerate() {
                data.push(scalar(v, &at(&format!(".matrix[{r}][{c}]")))?);
            }
        }
        parsed.push((alpha, Mat::from_vec(dim_w, dim_v, data)?));
    }
    Operator::new(name, n, k, dim_v, dim_w, parsed)
}

fn json_scalar(v: &Rational) -> String {
    let text = format_rational(v);
    if v.denom() == &num_bigint::BigInt::from(1) {
        text
    } else {
        format!("\"{text}\"")
    }
}

/// Canonical text form; `parse_operator(serialize_operator(op)) == op`.
pub fn serialize_operator(op: &Operator) -> String {
    let mut out = String::new();
    let name = serde_json::to_string(op.name()).expect("strings serialize");
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"name\": {name},");
    let _ = writeln!(out, "  \"n\": {},", op.n());
    let _ = writeln!(out, "  \"k\": {},", op.k());
    let _ = writeln!(out, "  \"dimV\": {},", op.dim_v());
    let _ = writeln!(out, "  \"dimW\": {},", op.dim_w());
    if op.symbol().terms().is_empty() {
        let _ = writeln!(out, "  \"terms\": []");
    } else {
        let _ = writeln!(out, "  \"terms\": [");
        let count = op.symbol().terms().len();
        for (t, (alpha, m)) in op.symbol().terms().iter().enumerate() {
            let alpha_text: Vec<String> = alpha.entries().iter().map(u32::to_string).collect();
            let rows: Vec<String> = (0..m.rows())
                .map(|r| {
                    let cells: Vec<String> = m.row(r).iter().map(json_scalar).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            let sep = if t + 1 < count { "," } else { "" };
            let _ = writeln!(
                out,
                "    {{\"alpha\": [{}], \"matrix\": [{}]}}{sep}",
                alpha_text.join(", "),
                rows.join(", ")
            );
        }
        let _ = writeln!(out, "  ]");
    }
    out.push_str("}\n");
    out
}
