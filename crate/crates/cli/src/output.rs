//! Report assembly and rendering.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Settings echoed in every report.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub restarts: usize,
    pub max_iterations: usize,
    pub step_tolerance: f64,
}

/// A named table, one row per grid point.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub formula: &'static str,
    pub result: Map<String, Value>,
    pub table: Option<Table>,
    /// Set when some optimizer run hit its iteration cap.
    pub unconverged: bool,
    /// Set when the input was checked and failed.
    pub rejected: bool,
}

impl Report {
    pub fn new(command: &'static str, formula: &'static str) -> Self {
        Self {
            command,
            formula,
            result: Map::new(),
            table: None,
            unconverged: false,
            rejected: false,
        }
    }

    pub fn set<T: Serialize>(&mut self, key: &str, value: T) -> &mut Self {
        let v = serde_json::to_value(value).expect("serializable report field");
        self.result.insert(key.to_string(), v);
        self
    }

    /// Records an optimizer report and tracks its convergence.
    pub fn measure(&mut self, key: &str, report: &qcoherence::MeasureReport) -> &mut Self {
        self.unconverged |= !report.converged;
        self.set(key, report)
    }

    pub fn render(&self, format: Format, settings: &Settings) -> String {
        match format {
            Format::Json => self.render_json(settings),
            Format::Csv => self.render_csv(settings),
        }
    }

    fn render_json(&self, settings: &Settings) -> String {
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command));
        top.insert("formula".into(), Value::from(self.formula));
        top.insert("settings".into(), serde_json::to_value(settings).expect("settings"));
        top.insert("result".into(), Value::Object(self.result.clone()));
        if let Some(t) = &self.table {
            top.insert("columns".into(), serde_json::to_value(&t.columns).expect("columns"));
            top.insert("rows".into(), serde_json::to_value(&t.rows).expect("rows"));
        }
        let mut out = serde_json::to_string_pretty(&Value::Object(top)).expect("json");
        out.push('\n');
        out
    }

    fn render_csv(&self, settings: &Settings) -> String {
        let mut out = format!(
            "# command={} seed={} restarts={} max_iterations={} step_tolerance={:e}\n",
            self.command, settings.seed, settings.restarts, settings.max_iterations, settings.step_tolerance
        );
        match &self.table {
            Some(t) => {
                out.push_str(&t.columns.join(","));
                out.push('\n');
                for row in &t.rows {
                    let cells: Vec<String> = row.iter().map(|&x| float_cell(x)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            None => {
                out.push_str("field,value\n");
                let mut flat = Vec::new();
                flatten("", &Value::Object(self.result.clone()), &mut flat);
                for (k, v) in flat {
                    out.push_str(&format!("{k},{v}\n"));
                }
            }
        }
        out
    }
}

/// Full double precision, 17 significant digits.
pub fn float_cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::Number(n) => {
            let cell = match (n.as_u64(), n.as_i64()) {
                (Some(u), _) => u.to_string(),
                (_, Some(i)) => i.to_string(),
                _ => float_cell(n.as_f64().unwrap_or(f64::NAN)),
            };
            out.push((prefix.to_string(), cell));
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
    }
}
