//! Text file format for ensembles and POVMs.
//!
//! ```text
//! {
//!   "dim": 2,
//!   "priors": [5.0000000000000000e-1, 5.0000000000000000e-1],
//!   "states": [
//!     [[re, im], [re, im], [re, im], [re, im]],
//!     ...
//!   ]
//! }
//! ```
//!
//! Matrices are row-major lists of `[re, im]` pairs. POVM files have the same
//! shape without `"priors"` and with `"kind": "ambiguous" | "unambiguous"`;
//! their `"states"` list holds the measurement operators, and for the
//! unambiguous kind entry 0 is the inconclusive outcome. Numbers are written with 17 significant digits, so a save/load
//! cycle reproduces every scalar bit for bit.

use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::ensemble::{Ensemble, Povm, PovmKind};
use crate::error::{Error, Result};
use crate::json;
use crate::matrix::{ComplexMatrix, Tolerances};

fn field_error(field: impl Into<String>, message: impl AsRef<str>) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: format!("{}: {}", field.into(), message.as_ref()),
    }
}

fn parse_document(text: &str) -> Result<Map<String, Value>> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(field_error("<root>", "expected an object")),
    }
}

fn get<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    map.get(key)
        .ok_or_else(|| field_error(key, "missing field"))
}

fn as_f64(v: &Value, field: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| field_error(field, format!("expected a number, found {v}")))
}

fn as_array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| field_error(field, "expected an array"))
}

fn parse_dim(map: &Map<String, Value>) -> Result<usize> {
    let v = get(map, "dim")?;
    match v.as_u64() {
        Some(n) if n >= 1 => Ok(n as usize),
        _ => Err(field_error("dim", format!("expected a positive integer, found {v}"))),
    }
}

fn parse_matrix(v: &Value, dim: usize, field: &str) -> Result<ComplexMatrix> {
    let items = as_array(v, field)?;
    if items.len() != dim * dim {
        return Err(field_error(
            field,
            format!("expected {} entries for dim {dim}, found {}", dim * dim, items.len()),
        ));
    }
    let mut data = Vec::with_capacity(items.len());
    for (k, item) in items.iter().enumerate() {
        let name = format!("{field}[{k}]");
        let pair = as_array(item, &name)?;
        if pair.len() != 2 {
            return Err(field_error(&name, "expected a [re, im] pair"));
        }
        data.push(Complex64::new(as_f64(&pair[0], &name)?, as_f64(&pair[1], &name)?));
    }
    ComplexMatrix::new(dim, data).map_err(|e| field_error(field, e.to_string()))
}

fn parse_matrices(map: &Map<String, Value>, key: &str, dim: usize) -> Result<Vec<ComplexMatrix>> {
    as_array(get(map, key)?, key)?
        .iter()
        .enumerate()
        .map(|(i, v)| parse_matrix(v, dim, &format!("{key}[{i}]")))
        .collect()
}

/// Row-major list of `[re, im]` pairs.
pub fn matrix_value(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.entries()
            .iter()
            .map(|z| Value::Array(vec![json::number(z.re), json::number(z.im)]))
            .collect(),
    )
}

/// Parses an ensemble document and validates it.
pub fn parse_ensemble(text: &str, tol: &Tolerances) -> Result<Ensemble> {
    let map = parse_document(text)?;
    let dim = parse_dim(&map)?;
    let priors = as_array(get(&map, "priors")?, "priors")?
        .iter()
        .enumerate()
        .map(|(i, v)| as_f64(v, &format!("priors[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let states = parse_matrices(&map, "states", dim)?;
    Ensemble::new(states, priors, tol)
}

pub fn ensemble_to_value(e: &Ensemble) -> Value {
    json!({
        "dim": e.dim(),
        "priors": json::numbers(e.priors()),
        "states": e.states().iter().map(|s| matrix_value(s.matrix())).collect::<Vec<_>>(),
    })
}

pub fn ensemble_to_string(e: &Ensemble) -> String {
    json::render(&ensemble_to_value(e))
}

pub fn load_ensemble(path: impl AsRef<Path>, tol: &Tolerances) -> Result<Ensemble> {
    let text = std::fs::read_to_string(path)?;
    parse_ensemble(&text, tol)
}

pub fn save_ensemble(path: impl AsRef<Path>, e: &Ensemble) -> Result<()> {
    std::fs::write(path, ensemble_to_string(e))?;
    Ok(())
}

/// Parses a POVM document and validates it.
pub fn parse_povm(text: &str, tol: &Tolerances) -> Result<Povm> {
    let map = parse_document(text)?;
    let dim = parse_dim(&map)?;
    let kind_value = get(&map, "kind")?;
    let kind = kind_value
        .as_str()
        .and_then(PovmKind::parse)
        .ok_or_else(|| {
            field_error("kind", format!("expected \"ambiguous\" or \"unambiguous\", found {kind_value}"))
        })?;
    let elements = parse_matrices(&map, "states", dim)?;
    Povm::new(kind, elements, tol)
}

pub fn povm_to_value(p: &Povm) -> Value {
    json!({
        "dim": p.dim(),
        "kind": p.kind().as_str(),
        "states": p.elements().iter().map(matrix_value).collect::<Vec<_>>(),
    })
}

pub fn povm_to_string(p: &Povm) -> String {
    json::render(&povm_to_value(p))
}

pub fn load_povm(path: impl AsRef<Path>, tol: &Tolerances) -> Result<Povm> {
    let text = std::fs::read_to_string(path)?;
    parse_povm(&text, tol)
}

pub fn save_povm(path: impl AsRef<Path>, p: &Povm) -> Result<()> {
    std::fs::write(path, povm_to_string(p))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::pure_state;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn example_one() -> Ensemble {
        Ensemble::new(
            vec![
                ComplexMatrix::from_diag(&[0.5, 0.5, 0.0, 0.0]),
                ComplexMatrix::from_diag(&[1.0 / 3.0, 0.0, 2.0 / 3.0, 0.0]),
                ComplexMatrix::from_diag(&[0.25, 0.0, 0.0, 0.75]),
            ],
            vec![1.0 / 3.0; 3],
            &tol(),
        )
        .unwrap()
    }

    #[test]
    fn ensemble_round_trip_is_exact() {
        let e = example_one();
        let text = ensemble_to_string(&e);
        assert_eq!(parse_ensemble(&text, &tol()).unwrap(), e);
        assert_eq!(ensemble_to_string(&parse_ensemble(&text, &tol()).unwrap()), text);
    }

    #[test]
    fn povm_round_trip_is_exact() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = pure_state(&[h, h]);
        let minus = pure_state(&[h, -h]);
        let p = Povm::new(PovmKind::Ambiguous, vec![plus, minus], &tol()).unwrap();
        let text = povm_to_string(&p);
        assert!(text.contains("\"kind\": \"ambiguous\""));
        assert_eq!(parse_povm(&text, &tol()).unwrap(), p);
    }

    #[test]
    fn malformed_complex_entry_is_a_parse_error() {
        let text = r#"{"dim": 1, "priors": [0.5, 0.5], "states": [[[1.0, 0.0]], [[1.0]]]}"#;
        match parse_ensemble(text, &tol()) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("states[1][0]"), "{message}"),
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = r#"{"dim": 1, "priors": [0.5, 0.5], "states": [[[1.0, 0.0]], [["x", 0.0]]]}"#;
        assert!(matches!(parse_ensemble(text, &tol()), Err(Error::Parse { .. })));
    }

    #[test]
    fn syntax_error_reports_position() {
        let text = "{\n  \"dim\": 2,\n  \"priors\": [0.5,, 0.5]\n}";
        match parse_ensemble(text, &tol()) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unnormalized_priors_are_rejected() {
        let text = r#"{"dim": 1, "priors": [0.49, 0.49], "states": [[[1.0, 0.0]], [[1.0, 0.0]]]}"#;
        assert!(matches!(parse_ensemble(text, &tol()), Err(Error::BadPrior { .. })));
    }

    #[test]
    fn bad_kind_and_missing_fields() {
        let text = r#"{"dim": 1, "kind": "maybe", "states": [[[1.0, 0.0]]]}"#;
        assert!(matches!(parse_povm(text, &tol()), Err(Error::Parse { .. })));
        let text = r#"{"dim": 1, "states": []}"#;
        match parse_ensemble(text, &tol()) {
            Err(Error::Parse { message, .. }) => assert!(message.starts_with("priors")),
            other => panic!("{other:?}"),
        }
    }
}
