//! One PASS/FAIL line per acceptance criterion; run with `--nocapture` to see them.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use pilipovic::harness::{algebra_suite, Report, RunConfig};
use pilipovic::hermite::{CoeffTensor, TruncationBox};
use pilipovic::ln_factorial;
use pilipovic::spaces::{coeff_decay_fit, hn_growth_test, DecayModel, SpaceIndex};

struct Outcome {
    id: u8,
    what: &'static str,
    pass: bool,
    detail: String,
}

fn run_cli_verify(out: &std::path::Path) -> (Duration, bool) {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_pilipovic"))
        .args(["verify", "--deterministic-sum", "--out"])
        .arg(out)
        .status()
        .expect("spawn pilipovic");
    (start.elapsed(), status.success())
}

fn decay(n: usize, f: impl Fn(usize) -> f64) -> CoeffTensor {
    CoeffTensor::from_fn(TruncationBox::cube(n, 1).unwrap(), |a| Complex64::new(f(a[0]), 0.0))
}

fn algebra() -> Outcome {
    let cfg = RunConfig::default();
    let start = Instant::now();
    let res = algebra_suite(&cfg);
    let secs = start.elapsed().as_secs_f64();
    let tensors: usize = res.iter().filter(|r| r.check.starts_with("group-law")).map(|r| r.draws).sum();
    let worst = res.iter().filter_map(|r| r.max_residual).fold(0.0, f64::max);
    let ok = tensors == 100 && cfg.algebra_truncation == 64 && res.iter().all(|r| r.pass && r.tolerance <= 1e-14);
    Outcome {
        id: 1,
        what: "transform algebra on 100 tensors, N=64, tol 1e-14, < 10 s",
        pass: ok && secs < 10.0,
        detail: format!("{tensors} tensors, worst {worst:.2e}, {secs:.2} s"),
    }
}

fn fourier(r: &Report) -> Outcome {
    let oracle: Vec<_> = r.identities.iter().filter(|i| i.check == "fourier-oracle").collect();
    let parity: Vec<_> = r.identities.iter().filter(|i| i.check.starts_with("parity-exact")).collect();
    let worst = oracle.iter().filter_map(|i| i.max_residual).fold(0.0, f64::max);
    let pass = oracle.len() == r.entries.len()
        && oracle.iter().all(|i| i.pass && i.tolerance <= 1e-7)
        && !parity.is_empty()
        && parity.iter().all(|i| i.max_residual == Some(0.0));
    Outcome {
        id: 2,
        what: "F_1 vs quadrature <= 1e-7, F_2 is exact parity",
        pass,
        detail: format!("{} entries, worst {worst:.2e}", oracle.len()),
    }
}

fn identities(r: &Report) -> Outcome {
    let names = ["bargmann-stft", "stft-rotation", "stft-magnitude"];
    let rows: Vec<_> = r.identities.iter().filter(|i| names.contains(&i.check.as_str())).collect();
    let worst = rows.iter().filter_map(|i| i.max_residual).fold(0.0, f64::max);
    let pass = rows.len() == 3 * r.entries.len() && rows.iter().all(|i| i.pass && i.draws == 50 && i.tolerance <= 1e-7);
    Outcome { id: 3, what: "STFT/Bargmann identities, 50 draws, <= 1e-7", pass, detail: format!("{} rows, worst {worst:.2e}", rows.len()) }
}

fn recovery() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    for (s0, r0) in [(0.25, 1.0), (0.5, 2.0), (1.0, 1.0)] {
        let c = decay(256, |k| (-r0 * (k as f64).powf(1.0 / (2.0 * s0))).exp());
        match coeff_decay_fit(&c) {
            Ok(fit) => {
                let (p, want) = (fit.p().unwrap_or(f64::NAN), 1.0 / (2.0 * s0));
                let r = fit.r_hat.unwrap_or(f64::NAN);
                if !((p - want).abs() <= 0.10 * want && (r - r0).abs() <= 0.15 * r0) {
                    fails.push(format!("({s0},{r0}): p={p:.4} r={r:.4}"));
                }
            }
            Err(e) => fails.push(format!("({s0},{r0}): {e}")),
        }
    }
    let flat = decay(256, |k| (k as f64 * 0.25f64.ln() - 0.5 * ln_factorial(k)).exp());
    match coeff_decay_fit(&flat) {
        Ok(fit) if matches!(fit.model, DecayModel::Factorial { .. }) && matches!(fit.s_hat.index, SpaceIndex::Flat(_)) => {}
        Ok(fit) => fails.push(format!("flat entry fitted as {:?}", fit.model)),
        Err(e) => fails.push(format!("flat entry: {e}")),
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        id: 4,
        what: "decay fit recovers p within 10%, r0 within 15%, factorial model for flat, < 30 s",
        pass: fails.is_empty() && secs < 30.0,
        detail: if fails.is_empty() { format!("{secs:.2} s") } else { fails.join("; ") },
    }
}

fn entry_checks(r: &Report, id: u8, what: &'static str, check: &str) -> Outcome {
    let bad: Vec<String> = r
        .entries
        .iter()
        .filter(|e| !e.checks.iter().any(|c| c.name == check && c.pass))
        .map(|e| e.name.clone())
        .collect();
    Outcome { id, what, pass: bad.is_empty() && !r.entries.is_empty(), detail: format!("{} entries, failing: {bad:?}", r.entries.len()) }
}

fn hn_closed_form() -> Outcome {
    let mut worst: f64 = 0.0;
    for alpha in [vec![0], vec![3], vec![7], vec![2, 1], vec![0, 4]] {
        let d = alpha.len();
        let order: usize = alpha.iter().sum();
        let bx = TruncationBox::cube(order + 2, d).unwrap();
        let c = CoeffTensor::unit(bx, &alpha).unwrap();
        for (s, h) in [(0.5, 1.0), (1.0, 2.0), (0.25, 0.5)] {
            let t = hn_growth_test(&c, s, h, 32).unwrap();
            let base = t.rows[0].ln_q;
            for row in &t.rows {
                let n = row.n as f64;
                let want = n * ((2 * order + d) as f64 / h).ln() - 2.0 * s * ln_factorial(row.n);
                worst = worst.max((row.ln_q - base - want).abs());
            }
        }
    }
    Outcome { id: 7, what: "hn log-ratio for h_alpha matches closed form to 1e-10, N <= 32", pass: worst <= 1e-10, detail: format!("worst {worst:.2e}") }
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let (elapsed, ok) = run_cli_verify(&out);
    let first = fs::read(out.join("report.json")).expect("first report");
    let report: Report = serde_json::from_slice(&first).expect("parse report");
    let (_, ok2) = run_cli_verify(&out);
    let second = fs::read(out.join("report.json")).expect("second report");

    let mut outcomes = vec![algebra(), fourier(&report), identities(&report), recovery()];
    let mut agree = entry_checks(&report, 5, "coeff/stft/lattice labels agree on the default corpus, < 5 min", "agreement");
    agree.pass &= ok && report.entries.len() == 6 && elapsed < Duration::from_secs(300);
    agree.detail = format!("{}, {:.1} s", agree.detail, elapsed.as_secs_f64());
    outcomes.push(agree);
    outcomes.push(entry_checks(&report, 6, "weighted sup nonincreasing along the r-ladder", "ladder-monotone"));
    outcomes.push(hn_closed_form());
    outcomes.push(Outcome {
        id: 8,
        what: "two deterministic verify runs give byte-identical JSON",
        pass: ok && ok2 && first == second,
        detail: format!("{} bytes", first.len()),
    });

    for o in &outcomes {
        println!("{} [{}] {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.what, o.detail);
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
