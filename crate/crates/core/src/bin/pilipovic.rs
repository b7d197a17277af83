use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pilipovic::harness::{emit_report, gen_corpus, run_verify, Report, ReportFormat, RunConfig};
use pilipovic::hermite::io::{coeffs_from_json, coeffs_to_json, read_coeffs_csv, read_grid_csv, write_coeffs_csv};
use pilipovic::hermite::{analyze_with, CoeffTensor, TruncationBox};
use pilipovic::spaces::{classify_with, parse_criteria, Lattice};
use pilipovic::transforms::{frac_ft, FracOrder};
use pilipovic::{Error, Result};

#[derive(Parser)]
#[command(name = "pilipovic", version, about = "Hermite-spectral transforms and space-membership checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Coefficient box size per axis.
    #[arg(long, global = true)]
    truncation: Option<usize>,
    /// Lattice offset and step, `t0,u`.
    #[arg(long, global = true)]
    lattice: Option<String>,
    /// Comma-separated subset of coeff,stft,lattice,hn.
    #[arg(long, global = true)]
    criteria: Option<String>,
    /// Output directory or file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Fixed summation order and no timing fields, for byte-identical reports.
    #[arg(long, global = true)]
    deterministic_sum: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the configured corpus as coefficient files.
    GenCorpus,
    /// Apply the fractional Fourier transform of order `t` to a coefficient file.
    Transform {
        input: PathBuf,
        /// One order per axis, comma-separated; a single value is broadcast.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Hermite coefficients of a sampled function (grid CSV).
    Coeffs { input: PathBuf },
    /// Classify a coefficient file.
    Classify { input: PathBuf },
    /// Run the identity suite and classify the corpus.
    Verify,
    /// Re-emit a saved JSON report in another format.
    Report { input: PathBuf },
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(n) = cli.truncation {
        cfg.truncation = n;
    }
    if let Some(l) = &cli.lattice {
        cfg.lattice = l.parse::<Lattice>()?;
    }
    if let Some(c) = &cli.criteria {
        cfg.criteria = parse_criteria(c)?;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.display().to_string());
    }
    cfg.deterministic_sum |= cli.deterministic_sum;
    cfg.validate()?;
    Ok(cfg)
}

fn read_coeffs(path: &Path) -> Result<CoeffTensor> {
    if path.extension().is_some_and(|e| e == "csv") {
        read_coeffs_csv(BufReader::new(File::open(path)?))
    } else {
        coeffs_from_json(&fs::read_to_string(path)?)
    }
}

fn write_coeffs(c: &CoeffTensor, out: Option<&Path>, csv: bool) -> Result<()> {
    let mut sink: Box<dyn Write> = match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    if csv {
        write_coeffs_csv(c, sink)
    } else {
        writeln!(sink, "{}", coeffs_to_json(c)?)?;
        Ok(())
    }
}

fn write_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let format: ReportFormat = cli.format.parse()?;
    let csv = format == ReportFormat::Csv;
    let cfg = resolve(&cli)?;
    let out = cli.out.as_deref();
    match &cli.cmd {
        Cmd::GenCorpus => {
            let dir = out.unwrap_or(Path::new("corpus"));
            fs::create_dir_all(dir)?;
            let items = gen_corpus(&cfg.corpus, cfg.truncation, cfg.seed)?;
            let mut manifest = Vec::new();
            for (i, it) in items.iter().enumerate() {
                let file = dir.join(format!("entry{i:02}.{}", if csv { "csv" } else { "json" }));
                write_coeffs(&it.coeffs, Some(&file), csv)?;
                manifest.push(serde_json::json!({
                    "name": it.name, "file": file.file_name().map(|f| f.to_string_lossy()),
                    "entry": it.entry, "truth": it.truth, "note": it.note,
                }));
            }
            fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
            eprintln!("wrote {} entries to {}", items.len(), dir.display());
        }
        Cmd::Transform { input, t } => {
            let c = read_coeffs(input)?;
            let vals: Vec<f64> = t
                .split(',')
                .map(|v| v.trim().parse().map_err(|_| Error::Config(format!("bad order {v:?}"))))
                .collect::<Result<_>>()?;
            let t = if vals.len() == 1 { FracOrder::uniform(vals[0], c.dim())? } else { FracOrder::new(vals)? };
            write_coeffs(&frac_ft(&c, &t)?, out, csv)?;
        }
        Cmd::Coeffs { input } => {
            let f = read_grid_csv(BufReader::new(File::open(input)?))?;
            let bx = TruncationBox::cube(cfg.truncation, f.dim())?;
            write_coeffs(&analyze_with(&f, &bx, cfg.sum_mode())?, out, csv)?;
        }
        Cmd::Classify { input } => {
            let v = classify_with(&read_coeffs(input)?, &cfg.classify_options())?;
            eprintln!("label {} agreement {}", v.label, v.agreement);
            write_text(&serde_json::to_string_pretty(&v)?, out)?;
        }
        Cmd::Verify => {
            let report = run_verify(&cfg)?;
            let dir = out.unwrap_or(Path::new("out"));
            for p in emit_report(&report, format, dir)? {
                eprintln!("wrote {}", p.display());
            }
            summarize(&report);
            return Ok(ExitCode::from(report.exit_code() as u8));
        }
        Cmd::Report { input } => {
            let report: Report = serde_json::from_str(&fs::read_to_string(input)?)?;
            let dir = out.unwrap_or(Path::new("out"));
            for p in emit_report(&report, format, dir)? {
                eprintln!("wrote {}", p.display());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn summarize(r: &Report) {
    for e in &r.entries {
        let label = e.verdict.as_ref().map_or("-".into(), |v| v.label.to_string());
        eprintln!("{:40} {:10} {}", e.name, label, if e.pass() { "ok" } else { "FAIL" });
    }
    for f in &r.failures {
        eprintln!("failure: {f}");
    }
    eprintln!("{}", if r.pass { "verify: pass" } else { "verify: FAIL" });
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
