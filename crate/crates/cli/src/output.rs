//! Rendering of command results as JSON lines, CSV or aligned text.

use clap::ValueEnum;
use serde_json::{Map, Value};
use umetrics::inequalities::TrialReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn params_text(params: &Map<String, Value>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={}", scalar(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// A flat result object (`metric`, `cost`, …).
pub fn object(format: Format, obj: &Map<String, Value>) -> String {
    match format {
        Format::Json => format!("{}\n", Value::Object(obj.clone())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(obj.keys()).expect("in-memory write");
            w.write_record(obj.values().map(scalar)).expect("in-memory write");
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Human => {
            let width = obj.keys().map(|k| k.len()).max().unwrap_or(0);
            obj.iter()
                .map(|(k, v)| format!("{k:<width$}  {}\n", scalar(v)))
                .collect()
        }
    }
}

/// Suite reports: one JSON object per line, one CSV row each, or a table.
pub fn reports(format: Format, reports: &[TrialReport]) -> serde_json::Result<String> {
    Ok(match format {
        Format::Json => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&serde_json::to_string(r)?);
                out.push('\n');
            }
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "suite",
                "params",
                "trials",
                "violations",
                "worst_margin",
                "seed",
                "worst_check",
            ])
            .expect("in-memory write");
            for r in reports {
                w.write_record([
                    r.suite.clone(),
                    params_text(&r.params),
                    r.trials.to_string(),
                    r.violations.to_string(),
                    format!("{:e}", r.worst_margin),
                    r.seed.to_string(),
                    scalar(&r.worst_case["check"]),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Human => {
            let rows: Vec<[String; 6]> = reports
                .iter()
                .map(|r| {
                    [
                        if r.passed() { "ok" } else { "FAIL" }.to_string(),
                        r.suite.clone(),
                        params_text(&r.params),
                        r.trials.to_string(),
                        r.violations.to_string(),
                        format!("{:.3e}", r.worst_margin),
                    ]
                })
                .collect();
            let header = ["status", "suite", "params", "trials", "violations", "worst margin"].map(String::from);
            let mut widths = header.clone().map(|h| h.len());
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |row: &[String; 6]| {
                let cells: Vec<String> = row.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
                format!("{}\n", cells.join("  ").trim_end())
            };
            let mut out = line(&header);
            for row in &rows {
                out.push_str(&line(row));
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            out.push_str(&format!("{} runs, {} with violations\n", reports.len(), failed));
            out
        }
    })
}
