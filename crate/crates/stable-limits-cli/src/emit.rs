//! Artifact rendering: a JSON envelope or a commented CSV table, both
//! carrying the fully resolved run configuration, both byte-stable for a
//! fixed seed.

use std::io::Write;

use crate::config::{Format, OutputSection, RunConfig};
use crate::run::Artifact;

/// Renders the artifact in the configured format.
pub fn render(config: &RunConfig, artifact: &Artifact) -> String {
    match config.output.format {
        Format::Json => render_json(config, artifact),
        Format::Csv => render_csv(config, artifact),
    }
}

/// Writes to `output.path`, or stdout when no path is set.
pub fn write_out(output: &OutputSection, text: &str) -> std::io::Result<()> {
    match &output.path {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn render_json(config: &RunConfig, artifact: &Artifact) -> String {
    let mut root = serde_json::Map::new();
    root.insert(
        "config".to_string(),
        serde_json::to_value(config).expect("run configs always serialize"),
    );
    match artifact {
        Artifact::Prediction { layers, output_law } => {
            let mut prediction = serde_json::Map::new();
            prediction.insert("layers".to_string(), to_value(layers));
            prediction.insert("output_law".to_string(), to_value(output_law));
            root.insert(
                "prediction".to_string(),
                serde_json::Value::Object(prediction),
            );
        }
        Artifact::Values(values) => {
            root.insert("values".to_string(), to_value(values));
        }
        Artifact::Report(report) => {
            root.insert("report".to_string(), to_value(report));
        }
        Artifact::TailTable(rows) => {
            root.insert("tail_table".to_string(), to_value(rows));
        }
        Artifact::Surface { t, values } => {
            let mut surface = serde_json::Map::new();
            surface.insert("t".to_string(), to_value(t));
            surface.insert("value".to_string(), to_value(values));
            root.insert("surface".to_string(), serde_json::Value::Object(surface));
        }
    }
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(root))
        .expect("artifacts always serialize");
    text.push('\n');
    text
}

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("artifacts always serialize")
}

fn render_csv(config: &RunConfig, artifact: &Artifact) -> String {
    let mut out = String::new();
    for line in config_echo_lines(config) {
        out.push_str("# ");
        out.push_str(&line);
        out.push('\n');
    }
    match artifact {
        Artifact::Prediction { layers, output_law } => {
            out.push_str(&format!(
                "# rows: hidden pre-activation laws for layers 1..{}, then the output law\n",
                layers.len() - 1
            ));
            out.push_str(&format!(
                "# output normalization: {}^(-1/{}) applied to the last hidden sum\n",
                if output_law.log_correction {
                    "(n log n)"
                } else {
                    "n"
                },
                fmt_f64(output_law.scaling_exponent),
            ));
            out.push_str("layer,stability,sigma\n");
            for (i, law) in layers.layers.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{}\n",
                    i + 1,
                    fmt_f64(law.stability),
                    fmt_f64(law.sigma)
                ));
            }
        }
        Artifact::Values(values) => {
            out.push_str("# rows: one draw per row, already normalized per the echoed scaling\n");
            out.push_str("value\n");
            for v in values {
                out.push_str(&fmt_f64(*v));
                out.push('\n');
            }
        }
        Artifact::Report(report) => {
            out.push_str(&format!("# alpha_hat = {}\n", fmt_f64(report.alpha_hat)));
            out.push_str(&format!("# sigma_hat = {}\n", fmt_f64(report.sigma_hat)));
            out.push_str(&format!(
                "# ks_distance = {}\n",
                fmt_f64(report.ks_distance)
            ));
            out.push_str("# rows: check name, largest passing value, observed value, pass flag\n");
            out.push_str("check,tolerance,observed,pass\n");
            for check in &report.checks {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    check.name,
                    fmt_f64(check.tolerance),
                    fmt_f64(check.observed),
                    check.pass
                ));
            }
        }
        Artifact::TailTable(rows) => {
            out.push_str(
                "# empirical = (1 - level) * threshold^index, divided by log(threshold) when \
                 the predicted asymptote carries the log factor\n",
            );
            out.push_str("level,threshold,empirical,predicted,ratio\n");
            for row in rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_f64(row.level),
                    fmt_f64(row.threshold),
                    fmt_f64(row.empirical),
                    fmt_f64(row.predicted),
                    fmt_f64(row.ratio)
                ));
            }
        }
        Artifact::Surface { t, values } => {
            out.push_str("# rows: fixed network evaluated at input t * network.input_x\n");
            out.push_str("t,value\n");
            for (ti, v) in t.iter().zip(values) {
                out.push_str(&format!("{},{}\n", fmt_f64(*ti), fmt_f64(*v)));
            }
        }
    }
    out
}

/// Shortest decimal that round-trips to the same f64.
fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// The resolved config as `section.key = value` lines, in declaration order.
fn config_echo_lines(config: &RunConfig) -> Vec<String> {
    let value = toml::Value::try_from(config).expect("run configs always serialize");
    let mut lines = Vec::new();
    flatten("", &value, &mut lines);
    lines
}

fn flatten(prefix: &str, value: &toml::Value, lines: &mut Vec<String>) {
    match value {
        toml::Value::Table(table) => {
            for (key, child) in table {
                let path = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                flatten(&path, child, lines);
            }
        }
        other => lines.push(format!("{prefix} = {other}")),
    }
}
