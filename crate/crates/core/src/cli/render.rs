use serde_json::Value;

use super::Command;

/// Plain-text projection of a JSON document.
pub(super) fn text(command: &Command, doc: &Value) -> String {
    match command {
        Command::Count(_) => count(doc),
        Command::Verify(_) => verify(doc),
        _ => generic(&doc["result"], 0),
    }
}

fn count(doc: &Value) -> String {
    let r = &doc["result"];
    let rows = r["rows"].as_array().cloned().unwrap_or_default();
    let mut out = String::new();
    if let Some(first) = rows.first() {
        out.push_str(&format!("{:>4}", "k"));
        for c in first["counts"].as_array().into_iter().flatten() {
            out.push_str(&format!(" {:>18}", c["kind"].as_str().unwrap_or("?")));
        }
        out.push('\n');
    }
    for row in &rows {
        out.push_str(&format!("{:>4}", row["k"]));
        for c in row["counts"].as_array().into_iter().flatten() {
            out.push_str(&format!(" {:>18}", c["count"].as_str().unwrap_or("?")));
        }
        if let Some(b) = row["strict_chain"].as_bool() {
            out.push_str(if b { "  strict" } else { "  not strict" });
        }
        out.push('\n');
    }
    if let Some(v) = r["verdict"].as_str() {
        out.push_str(v);
        out.push('\n');
    }
    out
}

fn verify(doc: &Value) -> String {
    let mut out = String::new();
    for r in doc.as_array().into_iter().flatten() {
        let c = &r["claim"];
        let dir = if c["direction"] == "le" { "<=" } else { "!<=" };
        out.push_str(&format!(
            "{:<5} {:>15} {:<3} {:<15} {:<22} {:<22} candidates={} refuted={} survivors={}",
            c["model"].as_str().unwrap_or("?"),
            c["from"].as_str().unwrap_or("?"),
            dir,
            c["to"].as_str().unwrap_or("?"),
            c["method"].as_str().unwrap_or("?"),
            r["outcome"].as_str().unwrap_or("?"),
            r["metrics"]["candidates"],
            r["metrics"]["refuted"],
            r["metrics"]["survivors"],
        ));
        if let Some(n) = r["note"].as_str() {
            out.push_str(&format!("  ({n})"));
        }
        out.push('\n');
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Array(_) | Value::Object(_) => {
            let s = serde_json::to_string(v).unwrap_or_default();
            (s.len() <= 100).then_some(s)
        }
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
    }
}

fn generic(v: &Value, indent: usize) -> String {
    let pad = " ".repeat(indent);
    let mut out = String::new();
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        out.push_str(&generic(x, indent + 2));
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}- #{i}\n"));
                        out.push_str(&generic(x, indent + 2));
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
    out
}
