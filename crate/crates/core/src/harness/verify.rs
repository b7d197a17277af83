//! End-to-end verification: transform identities, classification and agreement.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::corpus::{gen_corpus, generate_entry, CorpusItem};
use crate::error::Result;
use crate::hermite::{synthesize_with, CoeffTensor, Grid, TruncationBox};
use crate::numeric::SumMode;
use crate::spaces::{
    classify_with, lattice_table, LatticeSweep, MembershipVerdict, SpaceIndex, SpaceParam, WeightFamily,
    WeightSpec,
};
use crate::transforms::{
    fourier_grid, frac_ft, harmonic_apply, rotate_phase_point, stft_gaussian, stft_rotation_check,
    stft_via_bargmann, FracOrder, PhasePoint,
};

/// Stream offsets keep the random draws of different stages independent.
const ALGEBRA_STREAM: u64 = 1 << 32;
const IDENTITY_STREAM: u64 = 2 << 32;

/// Largest residual of one identity over its draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entry: Option<String>,
    pub draws: usize,
    /// `None` if some residual was not finite.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl Residual {
    fn new(check: &str, entry: Option<&str>, residuals: &[f64], tolerance: f64) -> Self {
        let max = residuals.iter().try_fold(0.0f64, |m, &r| r.is_finite().then(|| m.max(r)));
        Residual {
            check: check.into(),
            entry: entry.map(Into::into),
            draws: residuals.len(),
            max_residual: max,
            tolerance,
            pass: max.is_some_and(|m| m <= tolerance),
        }
    }

    fn error(check: &str, entry: Option<&str>, tolerance: f64) -> Self {
        Residual { check: check.into(), entry: entry.map(Into::into), draws: 0, max_residual: None, tolerance, pass: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &str, pass: bool, detail: Option<String>) -> Self {
        Check { name: name.into(), pass, detail }
    }
}

/// `(k, ln max_{|α|=k} |c(α)|)` for the nonzero shells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellPoint {
    pub k: usize,
    pub ln_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub truncation: usize,
    pub label: Option<SpaceParam>,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub name: String,
    pub dim: usize,
    pub truncation: usize,
    pub truth: Option<SpaceParam>,
    pub note: Option<String>,
    pub verdict: Option<MembershipVerdict>,
    pub error: Option<String>,
    pub refinement: Option<Refinement>,
    pub shells: Vec<ShellPoint>,
    /// Per-node lattice table at the weight named in `lattice_weight`.
    pub lattice: Option<LatticeSweep>,
    pub lattice_weight: Option<WeightSpec>,
    pub checks: Vec<Check>,
}

impl EntryReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub identities: Vec<Residual>,
    pub entries: Vec<EntryReport>,
    /// Absent in deterministic mode.
    pub timings: Option<Vec<Timing>>,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl Report {
    /// Process exit status: zero iff every check passed.
    pub fn exit_code(&self) -> i32 {
        if self.pass { 0 } else { 1 }
    }
}

/// Uniform draw in `[lo, hi)`, rounded to a multiple of `2⁻⁴⁰` so that sums of draws
/// and shifts by whole periods are exact.
fn dyadic(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let scale = (1u64 << 40) as f64;
    (rng.gen_range(lo..hi) * scale).round() / scale
}

fn order(rng: &mut ChaCha8Rng, d: usize) -> FracOrder {
    FracOrder::new((0..d).map(|_| dyadic(rng, -2.0, 2.0)).collect()).expect("finite")
}

fn max_diff(a: &CoeffTensor, b: &CoeffTensor) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn max_abs(c: &CoeffTensor) -> f64 {
    c.coeffs().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `𝓕_t`, optionally with the injected phase error `e^{iε|t|²|α|}`.
fn transform(c: &CoeffTensor, t: &FracOrder, fault: Option<f64>) -> CoeffTensor {
    let out = frac_ft(c, t).expect("dimensions match");
    match fault {
        None => out,
        Some(eps) => {
            let t2: f64 = t.values().iter().map(|v| v * v).sum();
            out.map_indexed(|a, v| v * Complex64::from_polar(1.0, eps * t2 * a.iter().sum::<usize>() as f64))
        }
    }
}

/// Group law, periodicity, unitarity, H-commutation and exact parity on seeded tensors.
pub fn algebra_suite(cfg: &RunConfig) -> Vec<Residual> {
    let tol = cfg.tolerances.algebra;
    let fault = cfg.phase_fault;
    let mut out = Vec::new();
    for d in [1usize, 2] {
        let bx = TruncationBox::cube(cfg.algebra_truncation, d).expect("positive truncation");
        let rows: Vec<[f64; 5]> = (0..cfg.algebra_draws)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(ALGEBRA_STREAM + (d as u64) * 1_000_000 + i as u64);
                let c = CoeffTensor::from_fn(bx.clone(), |_| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                let (s, t) = (order(&mut rng, d), order(&mut rng, d));
                let scale = max_abs(&c);
                let ft = transform(&c, &t, fault);
                let group = max_diff(&transform(&ft, &s, fault), &transform(&c, &s.add(&t).expect("same dim"), fault));
                let shifted = FracOrder::new(t.values().iter().map(|v| v + 4.0).collect()).expect("finite");
                let period = max_diff(&transform(&c, &shifted, fault), &ft);
                let n0 = c.l2_norm_with(SumMode::Pairwise).powi(2);
                let unitary = (ft.l2_norm_with(SumMode::Pairwise).powi(2) - n0).abs() / n0;
                let hc = harmonic_apply(&c, 1).expect("small box");
                let comm = max_diff(
                    &harmonic_apply(&ft, 1).expect("small box"),
                    &transform(&hc, &t, fault),
                ) / max_abs(&hc);
                let two = FracOrder::uniform(2.0, d).expect("finite");
                let parity = max_diff(
                    &transform(&c, &two, fault),
                    &c.map_indexed(|a, v| if a.iter().sum::<usize>() % 2 == 0 { v } else { -v }),
                );
                [group / scale, period / scale, unitary, comm, parity]
            })
            .collect();
        let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<f64>>();
        let tag = |name: &str| format!("{name} (d={d}, N={})", cfg.algebra_truncation);
        out.push(Residual::new(&tag("group-law"), None, &col(0), tol));
        out.push(Residual::new(&tag("periodicity"), None, &col(1), tol));
        out.push(Residual::new(&tag("unitarity"), None, &col(2), tol));
        out.push(Residual::new(&tag("h-commutation"), None, &col(3), tol));
        let mut parity = Residual::new(&tag("parity-exact"), None, &col(4), 0.0);
        parity.pass = parity.max_residual == Some(0.0);
        out.push(parity);
    }
    out
}

/// Uniform sampling grid and a frequency grid inside its Nyquist band.
fn fourier_grids(c: &CoeffTensor) -> Result<(Grid, Grid)> {
    let d = c.dim();
    let k = c.max_nonzero_order().unwrap_or(0);
    let extent = (3.125 * ((2 * k + d) as f64).sqrt()).max(8.0);
    let cap = if d == 1 { 4001 } else { 301 };
    let n = ((4.0 * extent * extent / std::f64::consts::PI).ceil() as usize).clamp(101, cap) | 1;
    let step = 2.0 * extent / (n - 1) as f64;
    let xi_extent = extent.min(0.9 * std::f64::consts::PI / step);
    let m = n.min(if d == 1 { 801 } else { 101 }) | 1;
    Ok((Grid::uniform_cube(extent, n, d)?, Grid::uniform_cube(xi_extent, m, d)?))
}

/// `sup |𝓕_1 f − quadrature Fourier transform of f|`.
pub fn fourier_residual(c: &CoeffTensor, mode: SumMode) -> Result<f64> {
    let c = c.trimmed();
    let (x, xi) = fourier_grids(&c)?;
    let f = synthesize_with(&c, &x, mode)?;
    let direct = fourier_grid(&f, &xi)?;
    let spectral = synthesize_with(&frac_ft(&c, &FracOrder::uniform(1.0, c.dim())?)?, &xi, mode)?;
    spectral.sup_distance(&direct)
}

/// STFT/Bargmann identity, rotation identity and magnitude invariance at seeded draws.
fn identity_residuals(item: &CorpusItem, cfg: &RunConfig, stream: u64) -> Vec<Residual> {
    let tol = cfg.tolerances.identity;
    let name = Some(item.name.as_str());
    let c = &item.coeffs;
    let d = c.dim();
    let draws: Vec<Result<[f64; 3]>> = (0..cfg.identity_draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(IDENTITY_STREAM + stream * 1_000_000 + i as u64);
            let t = order(&mut rng, d);
            let x = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let xi = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let p = PhasePoint::new(x, xi)?;
            let direct = stft_gaussian(c, &p)?;
            let bargmann = (direct - stft_via_bargmann(c, &p)?).norm();
            let rotation = stft_rotation_check(c, &t, &p)?;
            let lhs = stft_gaussian(&frac_ft(c, &t)?, &p)?.norm();
            let rhs = stft_gaussian(c, &rotate_phase_point(&p, &t.neg())?)?.norm();
            Ok([bargmann, rotation, (lhs - rhs).abs()])
        })
        .collect();
    let draws: Result<Vec<[f64; 3]>> = draws.into_iter().collect();
    let checks = ["bargmann-stft", "stft-rotation", "stft-magnitude"];
    match draws {
        Ok(rows) => checks
            .iter()
            .enumerate()
            .map(|(j, n)| Residual::new(n, name, &rows.iter().map(|r| r[j]).collect::<Vec<_>>(), tol))
            .collect(),
        Err(_) => checks.iter().map(|n| Residual::error(n, name, tol)).collect(),
    }
}

/// `ω_d` weight for the per-node lattice table: the label's index capped at `1/2`.
fn table_weight(label: &SpaceParam, r: f64, d: usize) -> Result<WeightSpec> {
    let s = if label.index.at_most_half() { label.index } else { SpaceIndex::Real(0.5) };
    WeightSpec::new(WeightFamily::OmegaD, s, r, d)
}

fn shells(c: &CoeffTensor) -> Vec<ShellPoint> {
    c.shell_maxima()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0.0)
        .map(|(k, &m)| ShellPoint { k, ln_max: m.ln() })
        .collect()
}

struct EntryRun {
    report: EntryReport,
    identities: Vec<Residual>,
    seconds: f64,
}

fn run_entry(item: &CorpusItem, index: usize, cfg: &RunConfig) -> EntryRun {
    let start = Instant::now();
    let opts = cfg.classify_options();
    let d = item.coeffs.dim();
    let mut identities = Vec::new();
    let fourier = match fourier_residual(&item.coeffs, cfg.sum_mode()) {
        Ok(r) => Residual::new("fourier-oracle", Some(&item.name), &[r], cfg.tolerances.fourier),
        Err(_) => Residual::error("fourier-oracle", Some(&item.name), cfg.tolerances.fourier),
    };
    identities.push(fourier);
    identities.extend(identity_residuals(item, cfg, index as u64));

    let mut checks = Vec::new();
    let (verdict, error) = match classify_with(&item.coeffs, &opts) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    checks.push(Check::new("classified", verdict.is_some(), error.clone()));
    let mut lattice = None;
    let mut lattice_weight = None;
    let mut refinement = None;
    if let Some(v) = &verdict {
        let disagree: Vec<String> = v
            .criteria
            .iter()
            .map(|r| format!("{}={}", r.name, r.label.map_or_else(|| "none".to_string(), |l| l.to_string())))
            .collect();
        checks.push(Check::new("agreement", v.agreement, (!v.agreement).then(|| disagree.join(" "))));
        let bad: Vec<String> = v.criteria.iter().filter(|r| !r.ladder_monotone()).map(|r| r.name.to_string()).collect();
        checks.push(Check::new("ladder-monotone", bad.is_empty(), (!bad.is_empty()).then(|| bad.join(","))));
        if let Some(truth) = item.truth.filter(|t| opts.candidates.iter().any(|c| c.index == t.index)) {
            checks.push(Check::new(
                "ground-truth",
                v.label == truth,
                (v.label != truth).then(|| format!("expected {truth}, got {}", v.label)),
            ));
        }
        if let Ok(spec) = table_weight(&v.label, cfg.r_ref, d) {
            lattice = lattice_table(&item.coeffs, &opts.lattice.with_dim(d), &spec).ok();
            lattice_weight = Some(spec);
        }
        if cfg.refine && !item.entry.is_finite_expansion() {
            let n = 2 * item.entry.truncation.unwrap_or(cfg.truncation);
            let mut entry = item.entry.clone();
            entry.truncation = Some(n);
            let label = generate_entry(&entry, n, cfg.seed, index as u64)
                .and_then(|fine| classify_with(&fine.coeffs, &opts))
                .ok()
                .map(|fine| fine.label);
            let stable = label == Some(v.label);
            checks.push(Check::new(
                "refinement-stable",
                stable,
                (!stable).then(|| format!("label at N={n}: {}", label.map_or("none".into(), |l| l.to_string()))),
            ));
            refinement = Some(Refinement { truncation: n, label, stable });
        }
    }
    let report = EntryReport {
        name: item.name.clone(),
        dim: d,
        truncation: item.coeffs.truncation().max_degree()[0],
        truth: item.truth,
        note: item.note.clone(),
        verdict,
        error,
        refinement,
        shells: shells(&item.coeffs),
        lattice,
        lattice_weight,
        checks,
    };
    EntryRun { report, identities, seconds: start.elapsed().as_secs_f64() }
}

/// Runs the identity suite and classifies every corpus entry.
pub fn run_verify(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let items = gen_corpus(&cfg.corpus, cfg.truncation, cfg.seed)?;
    let mut identities = algebra_suite(cfg);
    let mut timings = vec![Timing { stage: "algebra".into(), seconds: start.elapsed().as_secs_f64() }];
    let runs: Vec<EntryRun> = items.par_iter().enumerate().map(|(i, it)| run_entry(it, i, cfg)).collect();
    let mut entries = Vec::with_capacity(runs.len());
    for run in runs {
        identities.extend(run.identities);
        timings.push(Timing { stage: format!("entry {}", run.report.name), seconds: run.seconds });
        entries.push(run.report);
    }
    let mut failures: Vec<String> = identities
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            let at = r.entry.as_ref().map_or(String::new(), |e| format!(" [{e}]"));
            let val = r.max_residual.map_or("non-finite".into(), |m| format!("{m:.3e}"));
            format!("{}{at}: residual {val} > {:.1e}", r.check, r.tolerance)
        })
        .collect();
    for e in &entries {
        for c in e.checks.iter().filter(|c| !c.pass) {
            failures.push(format!("{} [{}]{}", c.name, e.name, c.detail.as_ref().map_or(String::new(), |d| format!(": {d}"))));
        }
    }
    timings.push(Timing { stage: "total".into(), seconds: start.elapsed().as_secs_f64() });
    Ok(Report {
        version: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        config: cfg.clone(),
        identities,
        entries,
        timings: (!cfg.deterministic_sum).then_some(timings),
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::CorpusSpec;

    fn small() -> RunConfig {
        RunConfig { corpus: CorpusSpec::default(), algebra_draws: 4, algebra_truncation: 16, ..Default::default() }
    }

    #[test]
    fn empty_corpus_runs_identities_only() {
        let r = run_verify(&small()).unwrap();
        assert!(r.entries.is_empty());
        assert_eq!(r.identities.len(), 10);
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn phase_fault_is_caught() {
        let r = run_verify(&RunConfig { phase_fault: Some(1e-6), ..small() }).unwrap();
        assert!(!r.pass);
        assert!(r.failures.iter().any(|f| f.starts_with("group-law")));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn dyadic_draws_shift_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let t = dyadic(&mut rng, -2.0, 2.0);
            assert_eq!((t + 4.0) - 4.0, t);
        }
    }

    #[test]
    fn fourier_oracle_on_h3() {
        let c = CoeffTensor::unit(TruncationBox::cube(8, 1).unwrap(), &[3]).unwrap();
        assert!(fourier_residual(&c, SumMode::Sequential).unwrap() < 1e-9);
    }
}
