use serde::Serialize;
use serde_json::Value;

/// Result of one subcommand before it is wrapped in a [`RunReport`].
pub struct Outcome {
    pub params: Value,
    pub outcome: Value,
    pub nodes: Option<u64>,
    pub exit: u8,
}

impl Outcome {
    pub fn ok(params: Value, outcome: Value) -> Self {
        Outcome { params, outcome, nodes: None, exit: 0 }
    }
}

#[derive(Serialize)]
pub struct Stats {
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    /// Peak resident set size, where the platform reports it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub memory_kb: Option<u64>,
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub argv: Vec<String>,
    pub params: Value,
    pub outcome: Value,
    pub stats: Stats,
    pub version: String,
}

fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

impl RunReport {
    pub fn new(command: String, argv: Vec<String>, o: Outcome, seconds: f64) -> Self {
        RunReport {
            command,
            argv,
            params: o.params,
            outcome: o.outcome,
            stats: Stats { seconds, nodes: o.nodes, memory_kb: peak_rss_kb() },
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }

    pub fn pretty(&self) -> String {
        let v = serde_json::to_value(self).expect("report serialises");
        let mut out = String::new();
        render(&v, 0, &mut out);
        out.trim_end().to_string()
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

/// Indented `key: value` text; short arrays stay on one line.
fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
