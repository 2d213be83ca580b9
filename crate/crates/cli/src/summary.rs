use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::config::Command;
use crate::{write_atomically, Report, UsageError};

/// Columns of the CSV summary for one command kind.
pub fn summary_columns(command: Command) -> &'static [&'static str] {
    match command {
        Command::Neumann | Command::Inverse | Command::Resolvent => {
            &["model", "norm_x", "terms_used", "residual"]
        }
        Command::CheckTnorm => &["operation", "passed", "failed", "failed_ids", "idempotent"],
        Command::CheckAxioms => &[
            "model",
            "samples",
            "seed",
            "passed",
            "failed",
            "vacuous",
            "failed_ids",
        ],
        Command::Converge | Command::Cauchy => &["model", "status", "n0", "r", "t", "horizon"],
        Command::ProductLimit => &["model", "x_n0", "y_n0", "product_n0", "consistent"],
        Command::ProbeOpen => &[
            "model",
            "r_star",
            "r",
            "crisp_radius",
            "samples",
            "non_invertible",
        ],
        Command::ProbeClosed => &["model", "sequences", "singular_limits", "generator_faults"],
        Command::ProbeContinuity => &["model", "epsilon", "samples", "holds_count", "fails_count"],
        Command::Tdz => &["model", "found", "side", "product_norm"],
        Command::TdzPopulation => &[
            "model",
            "samples",
            "constructed_singular",
            "witnesses",
            "non_invertible",
            "violations",
        ],
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn axiom_counts(axioms: Option<&Value>) -> (usize, usize, usize, String) {
    let list = axioms
        .and_then(Value::as_array)
        .cloned()
        .unwrap_or_default();
    let status = |a: &Value| {
        a.get("status")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string()
    };
    let failed: Vec<String> = list
        .iter()
        .filter(|a| status(a) == "fail")
        .map(|a| cell(a.get("id")))
        .collect();
    let passed = list.iter().filter(|a| status(a) == "pass").count();
    let vacuous = list.iter().filter(|a| status(a) == "vacuous").count();
    (passed, failed.len(), vacuous, failed.join(" "))
}

fn row(report: &Report) -> Vec<String> {
    let r = &report.result;
    let p = |ptr: &str| cell(r.pointer(ptr));
    let model = report.config.model.clone().unwrap_or_default();
    match report.command {
        Command::Neumann | Command::Inverse | Command::Resolvent => {
            if r.get("approx_inverse").is_some() {
                vec![
                    model,
                    p("/crisp_certificate/norm_x"),
                    p("/terms_used"),
                    p("/residual"),
                ]
            } else {
                vec![model, String::new(), p("/terms"), String::new()]
            }
        }
        Command::CheckTnorm => {
            let (pass, fail, _, ids) = axiom_counts(r.pointer("/report/axioms"));
            vec![
                p("/operation"),
                pass.to_string(),
                fail.to_string(),
                ids,
                p("/idempotency/holds"),
            ]
        }
        Command::CheckAxioms => {
            let (pass, fail, vac, ids) = axiom_counts(r.pointer("/report/axioms"));
            vec![
                model,
                p("/report/samples"),
                p("/report/seed"),
                pass.to_string(),
                fail.to_string(),
                vac.to_string(),
                ids,
            ]
        }
        Command::Converge | Command::Cauchy => vec![
            model,
            p("/verdict/status/kind"),
            p("/verdict/status/n0"),
            p("/verdict/r"),
            p("/verdict/t"),
            p("/verdict/horizon"),
        ],
        Command::ProductLimit => vec![
            model,
            p("/report/x_verdict/status/n0"),
            p("/report/y_verdict/status/n0"),
            p("/report/product_verdict/status/n0"),
            p("/report/consistent"),
        ],
        Command::ProbeOpen => vec![
            model,
            p("/r_star"),
            p("/r"),
            p("/crisp_radius"),
            p("/samples"),
            p("/non_invertible"),
        ],
        Command::ProbeClosed => vec![
            model,
            p("/sequences"),
            p("/singular_limits"),
            p("/generator_faults"),
        ],
        Command::ProbeContinuity => vec![
            model,
            p("/epsilon"),
            p("/samples"),
            p("/holds_count"),
            p("/fails_count"),
        ],
        Command::Tdz => vec![
            model,
            (p("/outcome/outcome") == "found").to_string(),
            p("/outcome/side"),
            p("/checks/product_norm"),
        ],
        Command::TdzPopulation => vec![
            model,
            p("/samples"),
            p("/constructed_singular"),
            p("/witnesses"),
            p("/non_invertible"),
            r.get("violations")
                .and_then(Value::as_array)
                .map_or(String::new(), |v| v.len().to_string()),
        ],
    }
}

/// One CSV row per report. All reports must come from the same command; an
/// empty list yields the header of `kind`, or a bare `model` header.
pub fn emit_csv_summary(
    reports: &[PathBuf],
    out: &Path,
    kind: Option<Command>,
) -> Result<(), UsageError> {
    let mut parsed = Vec::with_capacity(reports.len());
    for path in reports {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError::new(format!("reports: {}: {e}", path.display())))?;
        let rep: Report = serde_json::from_str(&text)
            .map_err(|e| UsageError::new(format!("reports: {}: {e}", path.display())))?;
        parsed.push(rep);
    }
    let command = match (parsed.first(), kind) {
        (Some(first), Some(k)) if first.command != k => {
            return Err(UsageError::new(format!(
                "reports: expected {k} reports, found {}",
                first.command
            )))
        }
        (Some(first), _) => Some(first.command),
        (None, k) => k,
    };
    if let Some(bad) = parsed.iter().find(|r| Some(r.command) != command) {
        return Err(UsageError::new(format!(
            "reports: mixed kinds {} and {}",
            command.expect("nonempty"),
            bad.command
        )));
    }
    let header: &[&str] = command.map_or(&["model"], summary_columns);
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| UsageError::new(format!("out: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for rep in &parsed {
        w.write_record(row(rep)).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| UsageError::new(format!("out: {e}")))?;
    write_atomically(out, &bytes)
}
