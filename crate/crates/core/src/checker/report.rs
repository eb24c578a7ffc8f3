use serde_json::{json, Value};

use super::{AxiomReport, Verdict};

fn witness_line(r: &AxiomReport) -> Option<String> {
    let w = r.witness.as_ref()?;
    let parts: Vec<String> = w.iter().map(ToString::to_string).collect();
    let mut line = format!("    witness: ({})", parts.join(", "));
    if let Some(c) = &r.context {
        line.push_str(&format!(" [{c}]"));
    }
    Some(line)
}

/// Plain-text table, one row per report, with the witness of each failure
/// on the following line.
pub fn render_table(reports: &[AxiomReport]) -> String {
    let id_w = reports
        .iter()
        .map(|r| r.id.chars().count())
        .max()
        .unwrap_or(2)
        .max(2);
    let mut out = format!(
        "{:<id_w$}  {:<13}  {:>10}  {:<7}  {}\n",
        "id", "verdict", "cost", "flags", "title"
    );
    for r in reports {
        let flags = if r.bounded { "bounded" } else { "" };
        out.push_str(&format!(
            "{:<id_w$}  {:<13}  {:>10}  {:<7}  {}\n",
            r.id,
            r.verdict.to_string(),
            r.cost,
            flags,
            r.title
        ));
        if r.verdict == Verdict::Fails {
            if let Some(line) = witness_line(r) {
                out.push_str(&line);
                out.push('\n');
            }
        }
    }
    out
}

pub fn reports_to_json(reports: &[AxiomReport]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "axiom": r.id,
                    "verdict": r.verdict.to_string(),
                    "witness": r
                        .witness
                        .as_ref()
                        .map(|w| w.iter().map(ToString::to_string).collect::<Vec<_>>()),
                    "cost": r.cost,
                    "bounded": r.bounded,
                    "title": r.title,
                    "context": r.context,
                })
            })
            .collect(),
    )
}
