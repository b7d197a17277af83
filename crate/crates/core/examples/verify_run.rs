//! A full verification run, written out as JSON, CSV and plot data.

use pilipovic::harness::{emit_report, run_verify, ReportFormat, RunConfig};

fn main() -> pilipovic::Result<()> {
    let cfg = RunConfig { deterministic_sum: true, ..Default::default() };
    let report = run_verify(&cfg)?;
    let dir = std::env::temp_dir().join("pilipovic-verify");
    for format in [ReportFormat::Json, ReportFormat::Csv, ReportFormat::PlotData] {
        for p in emit_report(&report, format, &dir)? {
            println!("wrote {}", p.display());
        }
    }
    for r in report.identities.iter().take(5) {
        println!("{:28} max residual {:?}", r.check, r.max_residual);
    }
    for e in &report.entries {
        println!("{:32} {}", e.name, e.verdict.as_ref().map_or("-".into(), |v| v.label.to_string()));
    }
    println!("pass: {}", report.pass);
    std::process::exit(report.exit_code());
}
