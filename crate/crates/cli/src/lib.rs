//! Command implementations behind the `fermicoh` binary. Each command maps
//! parsed input to a serializable value; `main.rs` only does argument
//! parsing, I/O and exit codes.

pub mod schema;

use std::time::{SystemTime, UNIX_EPOCH};

use fermicoh::coherent;
use fermicoh::fock::{self, FockState, ModeSpace};
use fermicoh::verify::{self, RunConfig, Suite, SuiteReport};
use fermicoh::FermiError;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use schema::{Decomposition, Entry, Expansion, Gram, Normal, Obstruction, Param, Term, Word};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] FermiError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Suite selector: one suite or `all`.
pub fn parse_suites(name: &str) -> Result<Vec<Suite>, CliError> {
    if name == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    name.parse::<Suite>().map(|s| vec![s]).map_err(CliError::Input)
}

pub fn cmd_verify(suite: &str, cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let suites = parse_suites(suite)?;
    cfg.validate()?;
    Ok(match suites.as_slice() {
        [one] => verify::run_suite(*one, cfg)?,
        many => verify::run_suites(suite, many, cfg)?,
    })
}

/// JSON form of a report. Without a timestamp the wall-clock fields are
/// dropped too, so equal configurations give byte-identical output.
pub fn report_json(report: &SuiteReport, timestamp: bool) -> serde_json::Value {
    let mut value = serde_json::to_value(report).expect("report serializes");
    if timestamp {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        value["timestamp"] = now.into();
    } else if let Some(checks) = value["checks"].as_array_mut() {
        for c in checks {
            if let Some(o) = c.as_object_mut() {
                o.remove("elapsed_ms");
            }
        }
    }
    value
}

/// Plain-text table of a report.
pub fn report_text(report: &SuiteReport, timestamp: bool) -> String {
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = format!(
        "suite {} (n = {}, trials = {}, seed = {})\n",
        report.suite, report.dim, report.trials, report.seed
    );
    for c in &report.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        out.push_str(&format!(
            "  {mark} {:<width$}  max residual {:.3e}  tol {:.0e}  trials {}",
            c.name, c.max_residual, c.tolerance, c.trials
        ));
        if c.errors > 0 {
            out.push_str(&format!("  errors {}", c.errors));
        }
        if timestamp {
            out.push_str(&format!("  {:.1} ms", c.elapsed_ms));
        }
        out.push('\n');
    }
    out.push_str(if report.passed { "PASS\n" } else { "FAIL\n" });
    out
}

/// Gram matrix of a JSON list of points. Failing entries carry an `error`
/// field instead of a value; the other entries are still computed.
pub fn cmd_kernel(input: &str) -> Result<Gram, CliError> {
    let raw: Vec<Param> = serde_json::from_str(input)?;
    let params = raw
        .iter()
        .enumerate()
        .map(|(k, p)| p.to_core().map_err(|e| CliError::Input(format!("point {k}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let Some(first) = params.first() else {
        return Err(CliError::Input("expected at least one point".into()));
    };
    let n = first.dim();
    if let Some((k, p)) = params.iter().enumerate().find(|(_, p)| p.dim() != n) {
        return Err(CliError::Input(format!(
            "point {k}: {} modes, point 0 has {n}",
            p.dim()
        )));
    }
    let m = params.len();
    let flat: Vec<Entry> = (0..m * m)
        .into_par_iter()
        .map(|idx| Entry::from_result(coherent::kernel(&params[idx / m], &params[idx % m])))
        .collect();
    let gram = flat.chunks(m).map(|row| row.to_vec()).collect();
    Ok(Gram { dim: n, gram })
}

/// Normal form of a JSON word, or where it got stuck.
pub fn cmd_decompose(input: &str) -> Result<Decomposition, CliError> {
    let word: Word = serde_json::from_str(input)?;
    if word.dim == 0 {
        return Err(CliError::Input("dim must be at least 1".into()));
    }
    let w = word.to_core()?;
    Ok(match fermicoh::decomposition::normal_form(word.dim, &w) {
        Ok(nf) => Decomposition::NormalForm(Normal::from_core(&nf)),
        Err(FermiError::DecompositionObstruction { step, cause }) => Decomposition::Obstruction(Obstruction {
            step,
            cause: cause.to_string(),
        }),
        Err(e) => return Err(e.into()),
    })
}

/// Coherent combination equal to `a†_{i₁}⋯a†_{i_k}ψ₀`, indices 1-based.
pub fn cmd_expand(dim: usize, indices: &[usize]) -> Result<Expansion, CliError> {
    if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > dim) {
        return Err(CliError::Input(format!("mode index {bad} outside 1..={dim}")));
    }
    let zero_based: Vec<usize> = indices.iter().map(|i| i - 1).collect();
    let terms = coherent::generating_expansion(dim, &zero_based)?;
    let ms = ModeSpace::new(dim)?;
    let mut target = FockState::vacuum(&ms);
    for &i in zero_based.iter().rev() {
        target = fock::creator(&ms, &ms.basis_vector(i))?.apply(&target);
    }
    let residual = coherent::combine(&ms, &terms)?.distance(&target);
    Ok(Expansion {
        dim,
        indices: indices.to_vec(),
        terms: terms.iter().map(Term::from_core).collect(),
        residual,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}
