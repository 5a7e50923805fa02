//! JSON frame files.
//!
//! ```json
//! {"field": "C", "d": 3, "c": 1, "n": 2,
//!  "bases": [[[[0.5, 0.0]], [[0.5, 0.5]], [[0.5, 0.0]]], ...]}
//! ```
//!
//! `bases[j]` is a `d×c` matrix given as `d` rows of `c` entries. Real
//! entries are numbers; complex entries are `[re, im]` pairs. Numbers are
//! written in shortest round-trip form, so write-then-read is bit-exact.

use std::fs;
use std::path::Path;

use grasspack::linalg::orthonormality_defect;
use grasspack::{Field, FusionFrame, Mat, SubspaceBasis, C64};
use serde_json::{json, Map, Number, Value};

use crate::CliError;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(format!("invalid frame file: {}", msg.into()))
}

fn number(x: f64) -> Value {
    Value::Number(Number::from_f64(x).expect("frame entries are finite"))
}

/// Serializes a frame to the JSON file format.
pub fn to_json(f: &FusionFrame) -> Value {
    let bases: Vec<Value> = f
        .bases()
        .iter()
        .map(|b| {
            let m = b.mat();
            let rows: Vec<Value> = (0..m.rows())
                .map(|i| {
                    let row: Vec<Value> = (0..m.cols())
                        .map(|k| {
                            let z = m[(i, k)];
                            match f.field() {
                                Field::Real => number(z.re),
                                Field::Complex => Value::Array(vec![number(z.re), number(z.im)]),
                            }
                        })
                        .collect();
                    Value::Array(row)
                })
                .collect();
            Value::Array(rows)
        })
        .collect();
    json!({
        "field": f.field(),
        "d": f.d(),
        "c": f.c(),
        "n": f.n(),
        "bases": bases,
    })
}

pub fn to_string(f: &FusionFrame) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(f)).expect("frame serializes");
    s.push('\n');
    s
}

pub fn write(path: &Path, f: &FusionFrame) -> Result<(), CliError> {
    fs::write(path, to_string(f))
        .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))
}

pub fn read(path: &Path, tol: f64) -> Result<FusionFrame, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, tol)
}

fn dim(obj: &Map<String, Value>, key: &str) -> Result<usize, CliError> {
    let v = obj
        .get(key)
        .ok_or_else(|| invalid(format!("missing field \"{key}\"")))?;
    match v.as_u64() {
        Some(x) if x > 0 => Ok(x as usize),
        _ => Err(invalid(format!("field \"{key}\" must be a positive integer"))),
    }
}

fn entry(v: &Value, field: Field, at: &str) -> Result<C64, CliError> {
    let num = |v: &Value, what: &str| {
        v.as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| invalid(format!("{at}: {what} is not a finite number")))
    };
    match (field, v) {
        (Field::Real, Value::Number(_)) => Ok(C64::new(num(v, "entry")?, 0.0)),
        (Field::Real, _) => Err(invalid(format!("{at}: real frames take plain numbers"))),
        (Field::Complex, Value::Number(_)) => Ok(C64::new(num(v, "entry")?, 0.0)),
        (Field::Complex, Value::Array(pair)) if pair.len() == 2 => {
            Ok(C64::new(num(&pair[0], "real part")?, num(&pair[1], "imaginary part")?))
        }
        (Field::Complex, _) => Err(invalid(format!("{at}: complex entries are [re, im] pairs"))),
    }
}

/// Parses and validates a frame file. Basis numbers in diagnostics are
/// 1-based.
pub fn parse(text: &str, tol: f64) -> Result<FusionFrame, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| invalid(format!("malformed JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| invalid("top level must be an object"))?;

    let field = match obj.get("field").and_then(Value::as_str) {
        Some("R") => Field::Real,
        Some("C") => Field::Complex,
        Some(other) => return Err(invalid(format!("field \"field\" must be \"R\" or \"C\", got \"{other}\""))),
        None => return Err(invalid("missing field \"field\"")),
    };
    let (d, c, n) = (dim(obj, "d")?, dim(obj, "c")?, dim(obj, "n")?);
    if c > d {
        return Err(invalid(format!("field \"c\" = {c} exceeds \"d\" = {d}")));
    }
    let bases = obj
        .get("bases")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("missing array field \"bases\""))?;
    if bases.len() != n {
        return Err(invalid(format!(
            "field \"bases\" has {} matrices but \"n\" = {n}",
            bases.len()
        )));
    }

    let mut out = Vec::with_capacity(n);
    for (j, basis) in bases.iter().enumerate() {
        let label = format!("basis {}", j + 1);
        let rows = basis
            .as_array()
            .ok_or_else(|| invalid(format!("{label}: not an array of rows")))?;
        if rows.len() != d {
            return Err(invalid(format!("{label}: {} rows, expected d = {d}", rows.len())));
        }
        let mut data = Vec::with_capacity(d * c);
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| invalid(format!("{label} row {}: not an array", i + 1)))?;
            if row.len() != c {
                return Err(invalid(format!(
                    "{label} row {}: {} entries, expected c = {c}",
                    i + 1,
                    row.len()
                )));
            }
            for (k, v) in row.iter().enumerate() {
                data.push(entry(v, field, &format!("{label} entry ({}, {})", i + 1, k + 1))?);
            }
        }
        let mat = Mat::from_complex(d, c, data, field).map_err(|e| invalid(format!("{label}: {e}")))?;
        let defect = orthonormality_defect(&mat);
        if defect.is_nan() || defect > tol {
            return Err(invalid(format!(
                "{label}: columns not orthonormal (deviation {defect:.3e} exceeds tolerance {tol:.1e})"
            )));
        }
        out.push(SubspaceBasis::with_tol(mat, tol).map_err(|e| invalid(format!("{label}: {e}")))?);
    }
    FusionFrame::new(field, out).map_err(|e| invalid(e.to_string()))
}
