//! JSON run reports with a fixed key set.
//!
//! Serialization is hand-rolled: the report contract pins the number format
//! (17 significant digits, so `{:.16e}`), a stable key order, and `null` for
//! quantities a command does not produce — little enough that a serializer
//! dependency would be mostly configuration. Tests parse the output with
//! `serde_json` to keep it honest JSON.

use std::fs;
use std::path::Path;

/// Minimal JSON value: just what reports need.
#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(bool),
    /// Finite floats render as `{:.16e}`; non-finite values become `null`
    /// (valid reports never contain them, but a report writer must not emit
    /// invalid JSON under any input).
    Float(f64),
    UInt(u64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn floats(values: &[f64]) -> Json {
        Json::Array(values.iter().map(|&v| Json::Float(v)).collect())
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Float(x) => {
                if x.is_finite() {
                    out.push_str(&format!("{x:.16e}"));
                } else {
                    out.push_str("null");
                }
            }
            Json::UInt(u) => out.push_str(&u.to_string()),
            Json::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    item.render_into(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push(']');
            }
            Json::Object(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    out.push('"');
                    out.push_str(key);
                    out.push_str("\": ");
                    value.render_into(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out.push('\n');
        out
    }
}

fn push_indent(out: &mut String, levels: usize) {
    for _ in 0..levels {
        out.push_str("  ");
    }
}

fn opt_float(v: Option<f64>) -> Json {
    v.map_or(Json::Null, Json::Float)
}

fn opt_uint(v: Option<u64>) -> Json {
    v.map_or(Json::Null, Json::UInt)
}

/// One run's report. The thirteen fixed keys are always present (null where
/// the command has no such quantity); command-specific extras follow them.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub weights: Option<Vec<f64>>,
    pub values: Option<Vec<f64>>,
    pub kkt_residual: Option<f64>,
    pub offdiag_residual: Option<f64>,
    pub feasibility_residual: Option<f64>,
    pub classification: Option<String>,
    pub iterations: Option<u64>,
    pub f_value: Option<f64>,
    pub elapsed_ms: f64,
    pub seed: Option<u64>,
    pub extras: Vec<(&'static str, Json)>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            n: None,
            k: None,
            weights: None,
            values: None,
            kkt_residual: None,
            offdiag_residual: None,
            feasibility_residual: None,
            classification: None,
            iterations: None,
            f_value: None,
            elapsed_ms: 0.0,
            seed: None,
            extras: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Json {
        let mut fields: Vec<(&'static str, Json)> = vec![
            ("command", Json::Str(self.command.to_string())),
            ("n", opt_uint(self.n)),
            ("k", opt_uint(self.k)),
            (
                "weights",
                self.weights.as_deref().map_or(Json::Null, Json::floats),
            ),
            (
                "values",
                self.values.as_deref().map_or(Json::Null, Json::floats),
            ),
            ("kkt_residual", opt_float(self.kkt_residual)),
            ("offdiag_residual", opt_float(self.offdiag_residual)),
            ("feasibility_residual", opt_float(self.feasibility_residual)),
            (
                "classification",
                self.classification.clone().map_or(Json::Null, Json::Str),
            ),
            ("iterations", opt_uint(self.iterations)),
            ("f_value", opt_float(self.f_value)),
            ("elapsed_ms", Json::Float(self.elapsed_ms)),
            ("seed", opt_uint(self.seed)),
        ];
        fields.extend(self.extras.iter().cloned());
        Json::Object(fields)
    }

    /// Writes the rendered report to `path`, or to standard output when no
    /// path is given.
    pub fn write(&self, path: Option<&Path>) -> Result<(), String> {
        let text = self.to_json().render();
        match path {
            Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_keys_appear_in_order_with_nulls() {
        let r = Report::new("spectrum");
        let text = r.to_json().render();
        let command_at = text.find("\"command\"").unwrap();
        let n_at = text.find("\"n\"").unwrap();
        let seed_at = text.find("\"seed\"").unwrap();
        assert!(
            command_at < n_at && n_at < seed_at,
            "key order broke:\n{text}"
        );
        assert!(text.contains("\"values\": null"));
        assert!(text.contains("\"seed\": null"));
    }

    #[test]
    fn floats_carry_seventeen_significant_digits() {
        let mut r = Report::new("solve");
        r.f_value = Some(8.0);
        let text = r.to_json().render();
        assert!(
            text.contains("\"f_value\": 8.0000000000000000e0"),
            "formatting drifted:\n{text}"
        );
    }

    #[test]
    fn output_is_valid_json_and_round_trips() {
        let mut r = Report::new("solve");
        r.n = Some(5);
        r.k = Some(2);
        r.weights = Some(vec![1.05, 1.1]);
        r.values = Some(vec![0.5, 1.0]);
        r.kkt_residual = Some(3.25e-9);
        r.f_value = Some(2.2);
        r.seed = Some(42);
        r.extras.push(("converged", Json::Bool(true)));
        let text = r.to_json().render();
        let parsed: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
        assert_eq!(parsed["command"], "solve");
        assert_eq!(parsed["n"], 5);
        assert_eq!(parsed["values"][1], 1.0);
        assert_eq!(parsed["kkt_residual"], 3.25e-9);
        assert_eq!(parsed["converged"], true);
        assert_eq!(parsed["classification"], serde_json::Value::Null);
    }

    #[test]
    fn strings_are_escaped() {
        let text = Json::Str("a\"b\\c\nd".to_string()).render();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, "a\"b\\c\nd");
    }

    #[test]
    fn non_finite_floats_degrade_to_null() {
        let text = Json::Float(f64::NAN).render();
        assert_eq!(text.trim(), "null");
    }
}
