use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::Value;

use opspectra::families::Decision;
use opspectra::spectralops::{adjoint_domain_test, closability, closure_condition, ClassVariant, DomainVerdict, OperatorClass};
use opspectra::thinmat::Closability;

use crate::commands::{rational, sequence};
use crate::config::RunConfig;
use crate::output::{Envelope, Failure};

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Artifact files (`.json` envelopes or `.csv` tables)
    pub inputs: Vec<PathBuf>,
    /// Add the computed comparison of the four operator classes
    #[arg(long)]
    pub four_class: bool,
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, default_value = "-2n+1", allow_hyphen_values = true)]
    pub d: String,
}

const MAX_ROWS: usize = 40;
const BAR: usize = 30;

pub fn render(a: &ReportArgs, cfg: &RunConfig) -> Result<String, Failure> {
    let mut out = String::new();
    if a.four_class {
        out.push_str(&four_class(a, cfg)?);
    }
    for p in &a.inputs {
        let section = if p.extension().is_some_and(|e| e == "csv") { csv_section(p)? } else { json_section(p)? };
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&section);
    }
    Ok(out)
}

fn read(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
}

fn short(v: &Value) -> String {
    match v {
        Value::Null => "undecided".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.len() <= 6 && items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            items.iter().map(short).collect::<Vec<_>>().join(", ")
        }
        Value::Array(items) => format!("[{} items]", items.len()),
        Value::Object(m) => format!("{{{} fields}}", m.len()),
        other => other.to_string(),
    }
}

fn json_section(p: &Path) -> Result<String, Failure> {
    let text = read(p)?;
    let env: Envelope = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}:{}:{}: {e}", p.display(), e.line(), e.column())))?;
    let mut s = format!("## {} [{}]\n\nstatus: {}\n\n", env.command, env.badge, env.status);
    match &env.result {
        Value::Object(m) => {
            s.push_str("| field | value |\n|---|---|\n");
            for (k, v) in m {
                let _ = writeln!(s, "| {k} | {} |", short(v).replace('|', "\\|"));
            }
        }
        other => {
            let _ = writeln!(s, "```\n{}\n```", serde_json::to_string_pretty(other).expect("serializable"));
        }
    }
    Ok(s)
}

/// `log10` bar between `1e-16` and `1e2`, for residual-like columns.
fn bar(v: f64) -> String {
    if !(v.is_finite() && v > 0.0) {
        return String::new();
    }
    let t = ((v.log10() + 16.0) / 18.0).clamp(0.0, 1.0);
    "#".repeat((t * BAR as f64).round() as usize)
}

fn csv_section(p: &Path) -> Result<String, Failure> {
    let text = read(p)?;
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let bad = |e: csv::Error| Failure::Usage(format!("{}: {e}", p.display()));
    let header: Vec<String> = r.headers().map_err(bad)?.iter().map(String::from).collect();
    let res = header.iter().position(|h| h == "residual" || h == "error_sq");
    let name = p.file_stem().map_or("table".into(), |s| s.to_string_lossy().into_owned());
    let mut s = format!("## {name} [numeric]\n\n");
    let mut cols = header.clone();
    if res.is_some() {
        cols.push("log scale".into());
    }
    let _ = writeln!(s, "| {} |", cols.join(" | "));
    let _ = writeln!(s, "|{}", "---|".repeat(cols.len()));
    let mut total = 0;
    for rec in r.records() {
        let rec = rec.map_err(bad)?;
        total += 1;
        if total > MAX_ROWS {
            continue;
        }
        let mut cells: Vec<String> = rec.iter().map(String::from).collect();
        if let Some(i) = res {
            cells.push(bar(cells[i].parse().unwrap_or(f64::NAN)));
        }
        let _ = writeln!(s, "| {} |", cells.join(" | "));
    }
    if total > MAX_ROWS {
        let _ = writeln!(s, "\n{} further rows omitted", total - MAX_ROWS);
    }
    Ok(s)
}

fn four_class(a: &ReportArgs, cfg: &RunConfig) -> Result<String, Failure> {
    const PROBES: usize = 8;
    let alpha = rational(&a.alpha, "--alpha")?;
    let d = sequence(&a.d, "--d")?;
    let mut s = format!(
        "## Operator classes [exact]\n\nalpha = {alpha}, d = {}\n\n| class | operator | basic vectors in the adjoint domain (first {PROBES}) | closure formula condition | closable |\n|---|---|---|---|---|\n",
        d.describe()
    );
    for v in [ClassVariant::A, ClassVariant::B, ClassVariant::C, ClassVariant::D] {
        let space = match v {
            ClassVariant::A => "E(L^a, d) in H(orthonormal L^(a+1))",
            ClassVariant::B => "E(L^(a+1), d) in H(orthonormal L^a)",
            ClassVariant::C => "E(L^a, d) in H(L^(a+1))",
            ClassVariant::D => "E(L^(a+1), d) in H(L^a)",
        };
        let cls = match OperatorClass::new(v, alpha.clone(), d.clone()) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(s, "| {v:?} | {space} | {e} | | |");
                continue;
            }
        };
        let mut present = Vec::new();
        let mut undecided = false;
        for k in 0..PROBES {
            match adjoint_domain_test(&cls, &cls.unit(k))?.verdict {
                DomainVerdict::InDomain => present.push(k),
                DomainVerdict::NotInDomain => {}
                DomainVerdict::Undecidable => undecided = true,
            }
        }
        let basic = if undecided {
            "undecided".to_string()
        } else if present.len() == PROBES {
            "all".into()
        } else if present.is_empty() {
            "none".into()
        } else {
            present.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", ")
        };
        let cond = match closure_condition(&cls) {
            Decision::Yes => "holds",
            Decision::No => "fails",
            Decision::Undecidable => "not available",
        };
        let closable = match closability(&cls, cfg.horizon.min(32)) {
            Ok(Closability::Closable) => "yes",
            Ok(Closability::NotClosable) => "no",
            Ok(Closability::Unknown) | Err(_) => "undecided",
        };
        let _ = writeln!(s, "| {v:?} | {space} | {basic} | {cond} | {closable} |");
    }
    Ok(s)
}
