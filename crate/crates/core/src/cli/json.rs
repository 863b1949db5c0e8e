//! Minimal JSON value with a writer that prints every float with 17
//! significant digits (`{:.16e}`), which round-trips `f64` exactly.

use std::fmt::Write;

use crate::linalg::{Complex64, ComplexMatrix};

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

/// 17 significant digits, scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Json {
    pub fn obj<K: Into<String>>(fields: impl IntoIterator<Item = (K, Json)>) -> Json {
        Json::Obj(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    pub fn strings<S: AsRef<str>>(items: &[S]) -> Json {
        Json::Arr(items.iter().map(|s| Json::str(s.as_ref())).collect())
    }

    pub fn complex(z: Complex64) -> Json {
        Json::Arr(vec![Json::Num(z.re), Json::Num(z.im)])
    }

    /// Row-major nested arrays of `[re, im]` pairs.
    pub fn matrix(m: &ComplexMatrix) -> Json {
        Json::Arr(
            (0..m.rows())
                .map(|i| Json::Arr((0..m.cols()).map(|j| Json::complex(m[(i, j)])).collect()))
                .collect(),
        )
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Json::Arr(_) | Json::Obj(_))
    }

    /// Arrays of scalars (and rows of complex pairs) stay on one line.
    fn is_flat(&self) -> bool {
        match self {
            Json::Arr(items) => items
                .iter()
                .all(|x| x.is_scalar() || matches!(x, Json::Arr(v) if v.iter().all(Json::is_scalar))),
            _ => true,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    /// Single-line rendering, used for `key=value` text reports. Strings
    /// are written bare at the top level.
    pub fn inline(&self) -> String {
        match self {
            Json::Str(s) => s.clone(),
            Json::Arr(items) => items.iter().map(Json::inline).collect::<Vec<_>>().join(","),
            other => {
                let mut out = String::new();
                other.write_inline(&mut out);
                out
            }
        }
    }

    fn write_inline(&self, out: &mut String) {
        match self {
            Json::Arr(items) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    item.write_inline(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (k, (key, value)) in fields.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                    out.push_str(": ");
                    value.write_inline(out);
                }
                out.push('}');
            }
            scalar => scalar.write(out, 0),
        }
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => write!(out, "{i}").unwrap(),
            Json::Num(x) => out.push_str(&format_f64(*x)),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
            Json::Arr(items) if items.is_empty() => out.push_str("[]"),
            Json::Arr(items) if self.is_flat() => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, indent);
                }
                out.push(']');
            }
            Json::Arr(items) => {
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    pad(out, indent + 1);
                    item.write(out, indent + 1);
                    if k + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                pad(out, indent);
                out.push(']');
            }
            Json::Obj(fields) if fields.is_empty() => out.push_str("{}"),
            Json::Obj(fields) => {
                out.push_str("{\n");
                for (k, (key, value)) in fields.iter().enumerate() {
                    pad(out, indent + 1);
                    out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                    out.push_str(": ");
                    value.write(out, indent + 1);
                    if k + 1 < fields.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                pad(out, indent);
                out.push('}');
            }
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(format_f64(-3.0), "-3.0000000000000000e0");
        let x = 0.1 + 0.2;
        assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn renders_valid_json() {
        let m = ComplexMatrix::scaled_identity(2, Complex64::new(1.0, -0.25));
        let doc = Json::obj([
            ("name", Json::str("a\"b")),
            ("m", Json::matrix(&m)),
            ("empty", Json::Arr(vec![])),
            ("none", Json::Null),
        ]);
        let text = doc.render();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["name"], "a\"b");
        assert_eq!(v["m"][0][0][1].as_f64(), Some(-0.25));
        assert!(text.contains(
            "[[1.0000000000000000e0, -2.5000000000000000e-1], [0.0000000000000000e0, 0.0000000000000000e0]]"
        ));
    }
}
