//! Writing reports as JSON, flat CSV tables or whitespace-separated plot data.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::verify::Report;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
    PlotData,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "plot-data" => Ok(ReportFormat::PlotData),
            other => Err(Error::config(format!("unknown report format {other:?} (json, csv, plot-data)"))),
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn emit_csv(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    let d = report.entries.iter().map(|e| e.dim).max().unwrap_or(1);
    let mut header = vec!["entry".to_string()];
    header.extend((1..=d).map(|j| format!("t{j}")));
    header.extend(strings(&["sup", "coverage_error"]));
    let mut rows = Vec::new();
    for e in &report.entries {
        for n in e.lattice.iter().flat_map(|l| &l.nodes) {
            let mut row = vec![e.name.clone()];
            row.extend((0..d).map(|j| n.t.get(j).map_or_else(String::new, |t| t.to_string())));
            row.push(n.sup.map_or_else(|| "inf".into(), |s| s.to_string()));
            row.push(n.coverage_error.to_string());
            rows.push(row);
        }
    }
    let lattice = dir.join("lattice.csv");
    write_csv(&lattice, &header, &rows)?;

    let rows: Vec<Vec<String>> = report
        .entries
        .iter()
        .map(|e| {
            let v = e.verdict.as_ref();
            vec![
                e.name.clone(),
                e.dim.to_string(),
                e.truncation.to_string(),
                v.map_or_else(String::new, |v| v.label.to_string()),
                opt(v.and_then(|v| v.fitted_r)),
                v.map_or_else(String::new, |v| v.agreement.to_string()),
                e.truth.map_or_else(String::new, |t| t.to_string()),
                e.pass().to_string(),
            ]
        })
        .collect();
    let entries = dir.join("entries.csv");
    write_csv(
        &entries,
        &strings(&["entry", "dim", "truncation", "label", "fitted_r", "agreement", "truth", "pass"]),
        &rows,
    )?;

    let mut rows = Vec::new();
    for e in &report.entries {
        for rec in e.verdict.iter().flat_map(|v| &v.criteria) {
            for p in &rec.r_ladder {
                rows.push(vec![
                    e.name.clone(),
                    rec.name.to_string(),
                    rec.label.map_or_else(String::new, |l| l.to_string()),
                    p.r.to_string(),
                    opt(p.sup),
                    opt(p.log_sup),
                    p.pass.to_string(),
                ]);
            }
        }
    }
    let ladder = dir.join("ladder.csv");
    write_csv(&ladder, &strings(&["entry", "criterion", "label", "r", "sup", "log_sup", "pass"]), &rows)?;

    let rows: Vec<Vec<String>> = report
        .identities
        .iter()
        .map(|r| {
            vec![
                r.check.clone(),
                r.entry.clone().unwrap_or_default(),
                r.draws.to_string(),
                opt(r.max_residual),
                r.tolerance.to_string(),
                r.pass.to_string(),
            ]
        })
        .collect();
    let identities = dir.join("identities.csv");
    write_csv(&identities, &strings(&["check", "entry", "draws", "max_residual", "tolerance", "pass"]), &rows)?;
    Ok(vec![lattice, entries, ladder, identities])
}

fn emit_plot_data(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for (i, e) in report.entries.iter().enumerate() {
        let mut s = format!("# {}\n# k ln_shell_max\n", e.name);
        for p in &e.shells {
            writeln!(s, "{} {}", p.k, p.ln_max).expect("string write");
        }
        let path = dir.join(format!("entry{i:02}_shells.dat"));
        fs::write(&path, s)?;
        out.push(path);

        let mut s = format!("# {}\n# r log_sup pass, one block per criterion\n", e.name);
        for rec in e.verdict.iter().flat_map(|v| &v.criteria) {
            writeln!(s, "# criterion {}", rec.name).expect("string write");
            for p in &rec.r_ladder {
                let l = p.log_sup.map_or_else(|| "nan".into(), |v| v.to_string());
                writeln!(s, "{} {} {}", p.r, l, u8::from(p.pass)).expect("string write");
            }
            s.push_str("\n\n");
        }
        let path = dir.join(format!("entry{i:02}_ladder.dat"));
        fs::write(&path, s)?;
        out.push(path);
    }
    Ok(out)
}

/// Writes the report into `dir`, creating it if needed, and returns the files written.
pub fn emit_report(report: &Report, format: ReportFormat, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    match format {
        ReportFormat::Json => {
            let path = dir.join("report.json");
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            fs::write(&path, text)?;
            Ok(vec![path])
        }
        ReportFormat::Csv => emit_csv(report, dir),
        ReportFormat::PlotData => emit_plot_data(report, dir),
    }
}
