//! Deterministic report serialization: keys sorted (the underlying map is
//! ordered), floats printed with 17 significant digits, newline-terminated.
//! Identical configs produce byte-identical reports.

use serde_json::Value;

fn push_escaped(out: &mut String, s: &str) {
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

fn push_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let f = n.as_f64().unwrap();
                let f = if f == 0.0 { 0.0 } else { f }; // normalize -0.0
                if f.is_finite() {
                    // 17 significant digits
                    out.push_str(&format!("{f:.16e}"));
                } else {
                    push_escaped(out, &f.to_string());
                }
            }
        }
        Value::String(s) => push_escaped(out, s),
        Value::Array(items) => {
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
                out.push_str(&"  ".repeat(indent + 1));
                push_value(out, item, indent + 1);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            // serde_json's map iterates in sorted key order
            for (i, (k, val)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                push_escaped(out, k);
                out.push_str(": ");
                push_value(out, val, indent + 1);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

/// Render the report with sorted keys and fixed float formatting, ending in
/// a newline.
pub fn render(report: &Value) -> String {
    let mut out = String::new();
    push_value(&mut out, report, 0);
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_17_significant_digits() {
        let s = render(&json!({"pi": std::f64::consts::PI}));
        assert!(s.contains("3.1415926535897931e0"), "{s}");
    }

    #[test]
    fn keys_sorted_and_newline_terminated() {
        let s = render(&json!({"zebra": 1, "apple": 2}));
        assert!(s.find("apple").unwrap() < s.find("zebra").unwrap());
        assert!(s.ends_with('\n'));
    }

    #[test]
    fn round_trips_through_serde() {
        let v = json!({"a": [1.5, -2.25e-8], "b": {"c": "text \"quoted\""}});
        let s = render(&v);
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v, back);
    }
}
