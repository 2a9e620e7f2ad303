//! Report rendering. Keys are sorted, so output is byte-stable for equal input.

use ncphase_core::Mat;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn matrix(m: &Mat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::from(m.row(i).iter().copied().collect::<Vec<f64>>()))
            .collect(),
    )
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports always serialise");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            text_object(report, 0, &mut out);
            out
        }
    }
}

fn number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..12).contains(&e) {
        let decimals = (11 - e).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => i.to_string(),
            (None, Some(x)) => number(x),
            _ => n.to_string(),
        }),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| x.is_number()) => Some(format!(
            "[{}]",
            items
                .iter()
                .map(|x| scalar(x).unwrap())
                .collect::<Vec<_>>()
                .join(", ")
        )),
        _ => None,
    }
}

fn text_object(v: &Value, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    match v {
        Value::Object(map) => text_map(map, depth, out),
        Value::Array(rows) => {
            for row in rows {
                match scalar(row) {
                    Some(s) => out.push_str(&format!("{indent}{s}\n")),
                    None => {
                        out.push_str(&format!("{indent}-\n"));
                        text_object(row, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{indent}{}\n", scalar(other).unwrap())),
    }
}

fn text_map(map: &Map<String, Value>, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    for (key, value) in map {
        match scalar(value) {
            Some(s) => out.push_str(&format!("{indent}{key}: {s}\n")),
            None => {
                out.push_str(&format!("{indent}{key}:\n"));
                text_object(value, depth + 1, out);
            }
        }
    }
}
