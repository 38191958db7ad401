//! Minimal JSON tree with deterministic rendering.
//!
//! Reports must re-serialize byte-identically across runs and carry floats
//! with 17 significant digits, which rules out shortest-representation
//! formatting; objects keep insertion order so the schema reads the same
//! way it is documented.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::numkit::ComplexMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn object() -> Json {
        Json::Object(Vec::new())
    }

    /// Append a field; panics on a duplicate key, which would be a schema bug.
    pub fn push(&mut self, key: &str, value: Json) {
        match self {
            Json::Object(fields) => {
                assert!(
                    fields.iter().all(|(k, _)| k != key),
                    "duplicate JSON key {key}"
                );
                fields.push((key.to_string(), value));
            }
            _ => panic!("push on a non-object"),
        }
    }

    pub fn from_str_slice(s: &str) -> Json {
        Json::Str(s.to_string())
    }

    pub fn opt_bool(v: Option<bool>) -> Json {
        v.map_or(Json::Null, Json::Bool)
    }

    pub fn opt_float(v: Option<f64>) -> Json {
        v.map_or(Json::Null, Json::Float)
    }

    pub fn matrix(m: &ComplexMatrix) -> Json {
        let entries = m
            .entries()
            .iter()
            .map(|z| Json::Array(vec![Json::Float(z.re), Json::Float(z.im)]))
            .collect();
        Json::Object(vec![
            ("rows".to_string(), Json::Int(m.rows() as i64)),
            ("cols".to_string(), Json::Int(m.cols() as i64)),
            ("entries".to_string(), Json::Array(entries)),
        ])
    }

    pub fn opt_matrix(m: Option<&ComplexMatrix>) -> Json {
        m.map_or(Json::Null, Json::matrix)
    }

    /// Pretty-printed rendering with two-space indentation and a trailing
    /// newline; stable for byte comparison.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, depth: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Float(x) => {
                assert!(x.is_finite(), "non-finite float in report: {x}");
                // 17 significant digits: one before the point, 16 after.
                let _ = write!(out, "{x:.16e}");
            }
            Json::Str(s) => write_escaped(out, s),
            Json::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                // Scalar-only arrays stay on one line.
                if items
                    .iter()
                    .all(|v| !matches!(v, Json::Array(_) | Json::Object(_)))
                {
                    out.push('[');
                    for (i, item) in items.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        item.write(out, depth);
                    }
                    out.push(']');
                    return;
                }
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    indent(out, depth + 1);
                    item.write(out, depth + 1);
                    if i + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                indent(out, depth);
                out.push(']');
            }
            Json::Object(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push_str("{\n");
                for (i, (k, v)) in fields.iter().enumerate() {
                    indent(out, depth + 1);
                    write_escaped(out, k);
                    out.push_str(": ");
                    v.write(out, depth + 1);
                    if i + 1 < fields.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                indent(out, depth);
                out.push('}');
            }
        }
    }
}

/// Complex scalar as a `[re, im]` pair.
pub fn complex(z: Complex64) -> Json {
    Json::Array(vec![Json::Float(z.re), Json::Float(z.im)])
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}
