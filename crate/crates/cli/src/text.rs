//! Indented `key: value` rendering of a JSON tree.

use serde_json::Value;
use std::fmt::Write;

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::String(s) => Some(s.clone()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array() || is_flat(i)) => {
            let parts: Vec<String> = items.iter().map(|i| scalar(i).unwrap_or_default()).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

/// An array of scalars, such as a matrix row or an index pair.
fn is_flat(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()))
}

fn walk(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match scalar(val) {
                    Some(s) if !s.contains('\n') => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}:");
                        walk(val, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                let _ = writeln!(out, "{pad}-");
                walk(item, indent + 2, out);
            }
        }
        Value::String(s) if s.contains('\n') => {
            for line in s.lines() {
                let _ = writeln!(out, "{pad}{line}");
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}
