//! Deterministic JSON rendering.
//!
//! Objects keep insertion order, arrays of scalars stay on one line, and every
//! floating-point number is written with 17 significant digits so that a
//! parse gives back the identical `f64`.

use std::fmt::Write;

use serde_json::{Map, Number, Value};

/// Formats a float with 17 significant digits in scientific notation.
///
/// Non-finite values have no JSON spelling; they render as the strings
/// `"inf"`, `"-inf"` and `"nan"`.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "\"nan\"".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "\"inf\"" } else { "\"-inf\"" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Wraps a float as a JSON value, using a string sentinel for non-finite values.
pub fn number(x: f64) -> Value {
    match Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None if x.is_nan() => Value::String("nan".into()),
        None if x > 0.0 => Value::String("inf".into()),
        None => Value::String("-inf".into()),
    }
}

pub fn numbers(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| number(x)).collect())
}

/// Pretty-prints `value` with two-space indentation and a trailing newline.
pub fn render(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(is_scalar),
        _ => false,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(out, n),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => write_array(out, items, indent),
        Value::Object(map) => write_object(out, map, indent),
    }
}

fn write_number(out: &mut String, n: &Number) {
    if let Some(u) = n.as_u64() {
        let _ = write!(out, "{u}");
    } else if let Some(i) = n.as_i64() {
        let _ = write!(out, "{i}");
    } else {
        out.push_str(&format_f64(n.as_f64().unwrap_or(f64::NAN)));
    }
}

fn write_array(out: &mut String, items: &[Value], indent: usize) {
    if items.is_empty() {
        out.push_str("[]");
        return;
    }
    // Arrays of scalars, and arrays of such arrays (complex pairs), stay inline.
    if items.iter().all(is_scalar) || items.iter().all(is_flat) {
        out.push('[');
        for (k, item) in items.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            write_value(out, item, indent);
        }
        out.push(']');
        return;
    }
    out.push_str("[\n");
    for (k, item) in items.iter().enumerate() {
        pad(out, indent + 1);
        write_value(out, item, indent + 1);
        if k + 1 < items.len() {
            out.push(',');
        }
        out.push('\n');
    }
    pad(out, indent);
    out.push(']');
}

fn write_object(out: &mut String, map: &Map<String, Value>, indent: usize) {
    if map.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    for (k, (key, item)) in map.iter().enumerate() {
        pad(out, indent + 1);
        out.push_str(&Value::String(key.clone()).to_string());
        out.push_str(": ");
        write_value(out, item, indent + 1);
        if k + 1 < map.len() {
            out.push(',');
        }
        out.push('\n');
    }
    pad(out, indent);
    out.push('}');
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(format_f64(0.0), "0.0000000000000000e0");
        assert_eq!(format_f64(-2.5), "-2.5000000000000000e0");
        assert_eq!(format_f64(f64::INFINITY), "\"inf\"");
    }

    #[test]
    fn renders_nested_structures() {
        let v = json!({
            "dim": 2,
            "priors": [0.5, 0.5],
            "states": [[[1.0, 0.0], [0.0, 0.0]]],
            "tag": "x",
        });
        let text = render(&v);
        assert!(text.contains("\"dim\": 2,"));
        assert!(text.contains("\"priors\": [5.0000000000000000e-1, 5.0000000000000000e-1]"));
        assert!(text.contains("[[1.0000000000000000e0, 0.0000000000000000e0], [0.0000000000000000e0, 0.0000000000000000e0]]"));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}
