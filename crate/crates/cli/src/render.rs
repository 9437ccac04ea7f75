use abmod::script::to_script;
use abmod::{ABModule, BMatrix};
use serde_json::{json, Value};

use crate::Command;

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Show { .. } => "show",
        Command::Dual { .. } => "dual",
        Command::Adjoint { .. } => "adjoint",
        Command::Conjugate { .. } => "conjugate",
        Command::Tensor { .. } => "tensor",
        Command::Sum { .. } => "sum",
        Command::Homs { .. } => "homs",
        Command::Endos { .. } => "endos",
        Command::Isomorphic { .. } => "isomorphic",
        Command::Decompose { .. } => "decompose",
        Command::CompSeries { .. } => "comp-series",
        Command::Regular { .. } => "regular",
        Command::Forms { .. } => "forms",
        Command::Hermitianize { .. } => "hermitianize",
        Command::Classify { .. } => "classify",
        Command::SaitoExtract { .. } => "saito-extract",
        Command::SaitoCheck { .. } => "saito-check",
        Command::SaitoSymmetrize { .. } => "saito-symmetrize",
    }
}

pub fn command_args(c: &Command) -> Value {
    match c {
        Command::Validate { file }
        | Command::Show { file }
        | Command::Dual { file }
        | Command::Adjoint { file }
        | Command::Conjugate { file }
        | Command::Endos { file }
        | Command::Decompose { file }
        | Command::CompSeries { file }
        | Command::Forms { file }
        | Command::Hermitianize { file }
        | Command::Classify { file } => json!([file]),
        Command::Regular { file, max_steps } => json!({"file": file, "max_steps": max_steps}),
        Command::Tensor { left, right } | Command::Isomorphic { left, right } => json!([left, right]),
        Command::Homs { domain, codomain } => json!([domain, codomain]),
        Command::Sum { files } => json!(files),
        Command::SaitoExtract {
            file,
            delta,
            normalization,
        } => {
            json!({"file": file, "delta": delta, "normalization": normalization})
        }
        Command::SaitoCheck { file, module } | Command::SaitoSymmetrize { file, module } => {
            json!({"file": file, "module": module})
        }
    }
}

/// Rows of polynomial strings, columns aligned.
pub fn matrix(m: &BMatrix, indent: &str) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|s| s.to_poly_string()).collect())
        .collect();
    let widths: Vec<usize> = (0..m.cols())
        .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(1))
        .collect();
    let mut out = String::new();
    for row in &cells {
        out.push_str(indent);
        out.push('[');
        let parts: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}", w = *w))
            .collect();
        out.push_str(&parts.join("  "));
        out.push_str("]\n");
    }
    out
}

pub fn module(e: &ABModule) -> String {
    to_script(e)
}
