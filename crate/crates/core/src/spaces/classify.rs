//! Membership verdicts from several independent criteria.
//!
//! Each criterion yields a growth class and a critical rate. The class is mapped to the
//! smallest candidate at or above it; a class strictly below its label is of Beurling
//! type there, an equal class of Roumieu type. The `r`-ladder then records the
//! weighted sup over the trusted window, with `pass` decided from the fitted rate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{coeff_decay_fit, growth_class, GrowthFit};
use super::hn::hn_growth_test;
use super::lattice::{finite, lattice_profile, sup_from_ln, Lattice};
use super::param::{default_candidates, Flavor, SpaceIndex, SpaceParam};
use super::profile::Profile;
use super::stft_fit::stft_profile;
use super::weights::{WeightFamily, WeightSpec};
use crate::error::{Error, Result};
use crate::hermite::CoeffTensor;
use crate::numeric::{least_squares, ln_factorial, r_squared};

/// Ladder factors applied to the reference rate.
pub const LADDER: [f64; 6] = [4.0, 2.0, 1.0, 0.5, 0.25, 0.125];

/// Relative distance within which a fitted index snaps to a candidate.
pub const SNAP: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Coeff,
    Stft,
    Lattice,
    Hn,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [Criterion::Coeff, Criterion::Stft, Criterion::Lattice, Criterion::Hn];
    pub const DEFAULT: [Criterion; 3] = [Criterion::Coeff, Criterion::Stft, Criterion::Lattice];

    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Coeff => "coeff",
            Criterion::Stft => "stft",
            Criterion::Lattice => "lattice",
            Criterion::Hn => "hn",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::config(format!("unknown criterion {s:?}")))
    }
}

/// Parses a comma-separated list such as `coeff,stft,lattice`.
pub fn parse_criteria(s: &str) -> Result<Vec<Criterion>> {
    let mut v: Vec<Criterion> = s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    v.sort();
    v.dedup();
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub criteria: Vec<Criterion>,
    pub candidates: Vec<SpaceParam>,
    /// One-dimensional lattices are broadcast to the dimension of the input.
    pub lattice: Lattice,
    /// Ladder reference when no critical rate applies.
    pub r_ref: f64,
    pub hn_max: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            criteria: Criterion::DEFAULT.to_vec(),
            candidates: default_candidates(),
            lattice: Lattice::uniform(0.0, 0.5, 1).expect("valid default lattice"),
            r_ref: 1.0,
            hn_max: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint {
    pub r: f64,
    /// Weighted sup over the trusted region; `None` if it overflows.
    pub sup: Option<f64>,
    /// `ln` of the sup; `None` when the weighted quantity vanishes.
    pub log_sup: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    /// Fitted exponent (`p`, `β`, `q` or `m` depending on the criterion).
    pub p: Option<f64>,
    /// Critical rate.
    pub r: Option<f64>,
    pub quality: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionRecord {
    pub name: Criterion,
    pub label: Option<SpaceParam>,
    pub class: Option<SpaceIndex>,
    pub r_ladder: Vec<LadderPoint>,
    pub fit: FitSummary,
    /// Direction in which the recorded sup must move as `r` grows.
    pub sup_increases_with_r: bool,
    pub trusted_radius: Option<f64>,
    pub beyond_candidates: bool,
    pub note: Option<String>,
    pub error: Option<String>,
}

impl CriterionRecord {
    fn failed(name: Criterion, e: Error) -> Self {
        CriterionRecord {
            name,
            label: None,
            class: None,
            r_ladder: Vec::new(),
            fit: FitSummary { p: None, r: None, quality: 0.0 },
            sup_increases_with_r: false,
            trusted_radius: None,
            beyond_candidates: false,
            note: None,
            error: Some(e.to_string()),
        }
    }

    /// Whether the recorded sups move monotonically in the declared direction.
    pub fn ladder_monotone(&self) -> bool {
        let mut pts: Vec<(f64, f64)> = self
            .r_ladder
            .iter()
            .map(|p| (p.r, p.log_sup.unwrap_or(f64::NEG_INFINITY)))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.windows(2).all(|w| {
            let (a, b) = (w[0].1, w[1].1);
            let slack = 1e-12 * a.abs().max(b.abs()).max(1.0);
            if self.sup_increases_with_r { b >= a - slack } else { b <= a + slack }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub label: SpaceParam,
    pub fitted_r: Option<f64>,
    pub criteria: Vec<CriterionRecord>,
    pub agreement: bool,
}

/// Smallest candidate at or above `class`, after snapping to a nearby candidate.
fn assign_label(class: SpaceIndex, candidates: &[SpaceParam]) -> (SpaceIndex, SpaceParam, bool) {
    let snapped = candidates
        .iter()
        .filter_map(|c| class.relative_gap(&c.index).filter(|g| *g <= SNAP).map(|g| (g, c.index)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map_or(class, |(_, i)| i);
    match candidates.iter().find(|c| c.index.cmp_index(&snapped) != Ordering::Less) {
        Some(c) => {
            let flavor = if c.index.cmp_index(&snapped) == Ordering::Equal { Flavor::Roumieu } else { Flavor::Beurling };
            (snapped, SpaceParam { index: c.index, flavor }, false)
        }
        None => (snapped, SpaceParam::roumieu(snapped), true),
    }
}

/// Everything a criterion measures before the ladder.
struct Measured {
    class: SpaceIndex,
    rate: f64,
    exponent: Option<f64>,
    quality: f64,
    trusted: Option<f64>,
    note: Option<String>,
}

fn from_growth(g: GrowthFit, p: &Profile) -> Measured {
    Measured {
        class: g.class,
        rate: g.rate,
        exponent: Some(g.exponent),
        quality: g.quality,
        trusted: Some(p.trusted_hi),
        note: None,
    }
}

fn profile_growth(p: &Profile) -> Result<GrowthFit> {
    let (rho, g) = p.fit_window();
    growth_class(&rho, &g, p.kappa)
}

fn ln_coeff_sup(c: &CoeffTensor, label: &SpaceIndex, r: f64) -> f64 {
    let spec = WeightSpec::formal(WeightFamily::Seq, *label, r, c.dim());
    c.truncation()
        .iter()
        .zip(c.coeffs())
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(a, v)| {
            let lf: f64 = a.iter().map(|&k| ln_factorial(k)).sum();
            v.norm().ln() + spec.ln_seq(a.iter().sum(), lf)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Log of the weighted profile sup for the label's weight at `r`.
fn ln_profile_sup(p: &Profile, label: &SpaceIndex, r: f64, d: usize, phase_space: bool) -> f64 {
    if label.at_most_half() {
        let dd = if phase_space { 2 * d } else { d };
        let spec = WeightSpec::formal(WeightFamily::OmegaD, *label, r, dd);
        return p.sup_radial(|rho| spec.ln_omega_radial(rho));
    }
    let s = label.value().expect("real index above 1/2");
    if phase_space {
        p.sup_samples(|nx, nxi| -(nx * nx + nxi * nxi) / 4.0 + r * (nx.powf(1.0 / s) + nxi.powf(1.0 / s)))
    } else {
        p.sup_radial(|rho| -rho * rho / 2.0 + r * rho.powf(1.0 / s))
    }
}

fn measure(c: &CoeffTensor, crit: Criterion, opts: &ClassifyOptions) -> Result<(Measured, Option<Profile>)> {
    match crit {
        Criterion::Coeff => {
            let fit = coeff_decay_fit(c)?;
            Ok((
                Measured {
                    class: fit.s_hat.index,
                    rate: fit.r_hat.unwrap_or(0.0),
                    exponent: fit.p(),
                    quality: fit.quality,
                    trusted: None,
                    note: fit.note,
                },
                None,
            ))
        }
        Criterion::Stft => {
            let p = stft_profile(c)?;
            Ok((from_growth(profile_growth(&p)?, &p), Some(p)))
        }
        Criterion::Lattice => {
            let p = lattice_profile(c, &opts.lattice.with_dim(c.dim()))?;
            Ok((from_growth(profile_growth(&p)?, &p), Some(p)))
        }
        Criterion::Hn => {
            let t = hn_growth_test(c, 0.0, 1.0, opts.hn_max)?;
            let rows: Vec<_> = t.rows.iter().filter(|r| !r.unresolved && r.ln_norm.is_finite()).collect();
            if rows.len() < 8 {
                return Err(Error::inference(format!("{} resolved H^N rows, at least 8 needed", rows.len())));
            }
            let x: Vec<Vec<f64>> = rows.iter().map(|r| vec![1.0, r.n as f64, ln_factorial(r.n)]).collect();
            let y: Vec<f64> = rows.iter().map(|r| r.ln_norm).collect();
            let (b, sse) = least_squares(&x, &y).ok_or_else(|| Error::inference("H^N regression failed"))?;
            let s = b[2] / 2.0;
            let class = if s < 0.05 { SpaceIndex::Zero } else { SpaceIndex::Real(s) };
            let note = t.any_unresolved().then(|| "some H^N rows are dominated by the box edge".to_string());
            Ok((
                Measured { class, rate: b[1].exp(), exponent: Some(b[2]), quality: r_squared(&y, sse), trusted: None, note },
                None,
            ))
        }
    }
}

fn evaluate(c: &CoeffTensor, crit: Criterion, opts: &ClassifyOptions) -> Result<CriterionRecord> {
    let (m, profile) = measure(c, crit, opts)?;
    let (snapped, label, beyond) = assign_label(m.class, &opts.candidates);
    let same = snapped.cmp_index(&label.index) == Ordering::Equal;
    let r_ref = if same && m.rate > 0.0 { m.rate } else { opts.r_ref };
    let d = c.dim();
    let mut note = m.note;
    let increasing = match crit {
        Criterion::Coeff => true,
        Criterion::Hn => false,
        Criterion::Stft | Criterion::Lattice => !label.index.at_most_half(),
    };
    let ln_sup = |r: f64| -> Option<f64> {
        match crit {
            Criterion::Coeff => match label.index {
                SpaceIndex::Zero => None,
                _ => Some(ln_coeff_sup(c, &label.index, r)),
            },
            Criterion::Stft => profile.as_ref().map(|p| ln_profile_sup(p, &label.index, r, d, true)),
            Criterion::Lattice => profile.as_ref().map(|p| ln_profile_sup(p, &label.index, r, d, false)),
            Criterion::Hn => match label.index {
                SpaceIndex::Real(s) => hn_growth_test(c, s, r, opts.hn_max)
                    .ok()
                    .map(|t| t.rows.iter().map(|row| row.ln_q).fold(f64::NEG_INFINITY, f64::max)),
                _ => None,
            },
        }
    };
    let r_ladder: Vec<LadderPoint> = LADDER
        .iter()
        .filter_map(|k| {
            let r = k * r_ref;
            let l = ln_sup(r)?;
            let pass = !same || if increasing { r <= m.rate } else { r >= m.rate };
            Some(LadderPoint { r, sup: sup_from_ln(l), log_sup: finite(l), pass })
        })
        .collect();
    if crit == Criterion::Lattice {
        if !label.index.at_most_half() {
            note = Some("extrapolation beyond the proven range".into());
        } else if let Err(e) = opts.lattice.with_dim(d).check_for(&label.index) {
            note = Some(e.to_string());
        }
    }
    if crit == Criterion::Hn && !matches!(label.index, SpaceIndex::Real(_)) {
        note = Some("no H^N condition at this index".into());
    }
    Ok(CriterionRecord {
        name: crit,
        label: Some(label),
        class: Some(snapped),
        r_ladder,
        fit: FitSummary { p: m.exponent, r: (m.rate > 0.0).then_some(m.rate), quality: m.quality },
        sup_increases_with_r: increasing,
        trusted_radius: m.trusted,
        beyond_candidates: beyond,
        note,
        error: None,
    })
}

fn zero_record(crit: Criterion, candidates: &[SpaceParam], r_ref: f64) -> CriterionRecord {
    let label = SpaceParam::beurling(candidates[0].index);
    CriterionRecord {
        name: crit,
        label: Some(label),
        class: Some(SpaceIndex::Zero),
        r_ladder: LADDER
            .iter()
            .map(|k| LadderPoint { r: k * r_ref, sup: Some(0.0), log_sup: None, pass: true })
            .collect(),
        fit: FitSummary { p: None, r: None, quality: 1.0 },
        sup_increases_with_r: false,
        trusted_radius: None,
        beyond_candidates: false,
        note: Some("zero function".into()),
        error: None,
    }
}

/// Runs one criterion; the STFT criterion on its own is `stft_decay_fit`.
pub fn criterion_record(c: &CoeffTensor, crit: Criterion, opts: &ClassifyOptions) -> Result<CriterionRecord> {
    c.check_finite()?;
    let mut candidates = opts.candidates.clone();
    candidates.sort();
    candidates.dedup_by(|a, b| a.index == b.index);
    if candidates.is_empty() {
        return Err(Error::config("empty candidate list"));
    }
    if c.max_nonzero_order().is_none() {
        return Ok(zero_record(crit, &candidates, opts.r_ref));
    }
    let opts = ClassifyOptions { candidates, ..opts.clone() };
    evaluate(c, crit, &opts)
}

/// STFT criterion record.
pub fn stft_decay_fit(c: &CoeffTensor, opts: &ClassifyOptions) -> Result<CriterionRecord> {
    criterion_record(c, Criterion::Stft, opts)
}

/// Classification with the given criteria and candidates, other options at their defaults.
pub fn classify(c: &CoeffTensor, criteria: &[Criterion], candidates: &[SpaceParam]) -> Result<MembershipVerdict> {
    classify_with(
        c,
        &ClassifyOptions { criteria: criteria.to_vec(), candidates: candidates.to_vec(), ..Default::default() },
    )
}

pub fn classify_with(c: &CoeffTensor, opts: &ClassifyOptions) -> Result<MembershipVerdict> {
    let mut criteria = opts.criteria.clone();
    criteria.sort();
    criteria.dedup();
    if criteria.is_empty() {
        return Err(Error::config("at least one criterion must be enabled"));
    }
    let records: Vec<CriterionRecord> = criteria
        .par_iter()
        .map(|&crit| match criterion_record(c, crit, opts) {
            Ok(r) => Ok(r),
            Err(e @ (Error::Inference(_) | Error::Precondition(_) | Error::Coverage { .. })) => {
                Ok(CriterionRecord::failed(crit, e))
            }
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let first = records
        .iter()
        .find(|r| r.label.is_some())
        .ok_or_else(|| Error::inference(format!("no criterion produced a label: {:?}", records.iter().filter_map(|r| r.error.as_deref()).collect::<Vec<_>>())))?;
    let label = first.label.expect("checked");
    let fitted_r = first.fit.r;
    let agreement = records.iter().all(|r| r.label == Some(label));
    Ok(MembershipVerdict { label, fitted_r, criteria: records, agreement })
}
