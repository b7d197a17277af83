//! Weighted sups of fractional Fourier transforms over a lattice of orders.

use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::param::SpaceIndex;
use super::profile::{Binner, Profile};
use super::weights::{WeightFamily, WeightSpec};
use crate::error::{Error, Result};
use crate::hermite::{ln_scaled_profile, unravel, CoeffTensor, GridFunction};
use crate::transforms::{frac_ft, FracOrder};

/// `Λ_{t₀,u} = { t₀ + k∘u : k ∈ ℤᵈ }`, taken one period (two units of `t`) per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeJson", into = "LatticeJson")]
pub struct Lattice {
    t0: Vec<f64>,
    u: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    t0: Vec<f64>,
    u: Vec<f64>,
}

impl TryFrom<LatticeJson> for Lattice {
    type Error = Error;
    fn try_from(j: LatticeJson) -> Result<Self> {
        Lattice::new(j.t0, j.u)
    }
}

impl From<Lattice> for LatticeJson {
    fn from(l: Lattice) -> Self {
        LatticeJson { t0: l.t0, u: l.u }
    }
}

impl Lattice {
    pub fn new(t0: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if t0.is_empty() || t0.len() != u.len() {
            return Err(Error::domain("lattice offset and step must have the same positive length"));
        }
        if t0.iter().any(|t| !t.is_finite()) {
            return Err(Error::domain("non-finite lattice offset"));
        }
        if u.iter().any(|&v| !(v > 0.0 && v <= 1.0)) {
            return Err(Error::domain(format!("lattice steps must lie in (0, 1], got {u:?}")));
        }
        Ok(Lattice { t0, u })
    }

    pub fn uniform(t0: f64, u: f64, d: usize) -> Result<Self> {
        Self::new(vec![t0; d], vec![u; d])
    }

    pub fn dim(&self) -> usize {
        self.t0.len()
    }

    pub fn t0(&self) -> &[f64] {
        &self.t0
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// The same lattice in another dimension, using the first axis' offset and step.
    pub fn with_dim(&self, d: usize) -> Lattice {
        if d == self.dim() {
            return self.clone();
        }
        Lattice { t0: vec![self.t0[0]; d], u: vec![self.u[0]; d] }
    }

    /// Per-axis node counts `⌈2/uⱼ⌉`.
    pub fn counts(&self) -> Vec<usize> {
        self.u.iter().map(|u| (2.0 / u - 1e-12).ceil() as usize).collect()
    }

    pub fn nodes(&self) -> Vec<FracOrder> {
        let counts = self.counts();
        let total: usize = counts.iter().product();
        (0..total)
            .map(|i| {
                let k = unravel(i, &counts);
                let t = k.iter().enumerate().map(|(j, &k)| self.t0[j] + k as f64 * self.u[j]).collect();
                FracOrder::new(t).expect("finite lattice node")
            })
            .collect()
    }

    /// Steps must lie in `(0,1)` except at `s = 1/2`, where `u = 1` is allowed.
    pub fn check_for(&self, s: &SpaceIndex) -> Result<()> {
        if *s != SpaceIndex::Real(0.5) && self.u.iter().any(|&u| u >= 1.0) {
            return Err(Error::domain(format!("lattice step 1 is only admissible at s = 1/2, not s = {s}")));
        }
        Ok(())
    }

    /// Same offset, step divided by `k`.
    pub fn refined(&self, k: usize) -> Lattice {
        Lattice { t0: self.t0.clone(), u: self.u.iter().map(|u| u / k as f64).collect() }
    }

    /// Shifts the offset by `t`.
    pub fn shifted(&self, t: &FracOrder) -> Result<Lattice> {
        let t0 = FracOrder::new(self.t0.clone())?.add(t)?;
        Lattice::new(t0.values().to_vec(), self.u.clone())
    }
}

impl FromStr for Lattice {
    type Err = Error;
    /// `"t0,u"`, one-dimensional; use [`Lattice::with_dim`] to broadcast.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::config(format!("lattice must be given as t0,u, got {s:?}"));
        if parts.len() != 2 {
            return Err(bad());
        }
        let t0: f64 = parts[0].parse().map_err(|_| bad())?;
        let u: f64 = parts[1].parse().map_err(|_| bad())?;
        Lattice::uniform(t0, u, 1)
    }
}

/// Box fraction above which a maximum counts as sitting at the edge of the grid.
const EDGE_BAND: f64 = 0.9;

fn box_fraction(x: &[f64], half: &[f64]) -> f64 {
    x.iter().zip(half).map(|(v, h)| v.abs() / h).fold(0.0, f64::max)
}

/// Log of the weighted sup, or `None` when the maximum sits in the outer band.
fn ln_sup_with_coverage(ln_vals: impl Iterator<Item = (f64, f64)>) -> (f64, bool) {
    let (mut inner, mut outer) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (frac, v) in ln_vals {
        if frac >= EDGE_BAND {
            outer = outer.max(v);
        } else {
            inner = inner.max(v);
        }
    }
    let rising = outer > inner + 1e-9;
    (inner.max(outer), !rising)
}

fn check_omega(spec: &WeightSpec, d: usize) -> Result<()> {
    if spec.family != WeightFamily::OmegaD {
        return Err(Error::domain(format!("weighted sup needs an omega_d weight, got {:?}", spec.family)));
    }
    if !spec.s.at_most_half() {
        return Err(Error::domain("omega_d is defined only for s <= 1/2"));
    }
    if !spec.r.is_finite() || spec.d != d {
        return Err(Error::domain("weight must have finite r and match the grid dimension"));
    }
    Ok(())
}

/// `max |f(x)| e^{|x|²/2} ω_{d,r,s}(x)` over the grid.
///
/// Formal (non-positive) `r` is accepted so growing weights can be probed.
pub fn weighted_sup(f: &GridFunction, spec: &WeightSpec) -> Result<f64> {
    check_omega(spec, f.dim())?;
    let grid = f.grid();
    let half: Vec<f64> = grid.axes().iter().map(|a| a[0].abs().max(a[a.len() - 1].abs())).collect();
    let vals = f.values().iter().enumerate().filter(|(_, v)| v.norm() > 0.0).map(|(i, v)| {
        let x = grid.point(i);
        let sq: f64 = x.iter().map(|v| v * v).sum();
        (box_fraction(&x, &half), v.norm().ln() + 0.5 * sq + spec.ln_omega_radial(sq.sqrt()))
    });
    let (ln, covered) = ln_sup_with_coverage(vals);
    if !covered {
        return Err(Error::Coverage { t: None, msg: "weighted values still rising at the grid boundary".into() });
    }
    Ok(if ln == f64::NEG_INFINITY { 0.0 } else { ln.exp() })
}

/// Uniform grid used for lattice sweeps and profiles.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SweepGrid {
    pub extent: f64,
    pub axes: Vec<Vec<f64>>,
}

/// Half-width `2.5·√(2K+d)·1.25` (at least 8) with `K` the largest nonzero order.
pub(crate) fn sweep_grid(c: &CoeffTensor) -> SweepGrid {
    let d = c.dim();
    let k = c.max_nonzero_order().unwrap_or(0);
    let turning = ((2 * k + d) as f64).sqrt();
    let extent = (2.5 * turning * 1.25).max(8.0);
    let step = 0.25 * std::f64::consts::PI / turning;
    let cap = match d {
        1 => 8001,
        2 => 241,
        _ => 61,
    };
    let n = ((((2.0 * extent / step).ceil() as usize) | 1).max(401)).min(cap) | 1;
    let axis: Vec<f64> = (0..n).map(|i| -extent + 2.0 * extent * i as f64 / (n - 1) as f64).collect();
    SweepGrid { extent, axes: vec![axis; d] }
}

/// Per-node result of a lattice sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeNode {
    pub t: Vec<f64>,
    /// Weighted sup at this node; `None` if it overflows `f64`.
    pub sup: Option<f64>,
    /// Its logarithm; `None` for an identically zero transform.
    pub ln_sup: Option<f64>,
    pub coverage_error: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSweep {
    pub sup: Option<f64>,
    pub ln_sup: Option<f64>,
    pub nodes: Vec<LatticeNode>,
}

pub(crate) fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// `e^l`, with `-inf` mapping to `0` and overflow to `None`.
pub(crate) fn sup_from_ln(l: f64) -> Option<f64> {
    if l == f64::NEG_INFINITY { Some(0.0) } else { finite(l.exp()) }
}

fn node_sup(c: &CoeffTensor, t: &FracOrder, spec: &WeightSpec, grid: &SweepGrid) -> Result<LatticeNode> {
    let ct = frac_ft(c, t)?;
    let ln = ln_scaled_profile(&ct, &grid.axes);
    let shape: Vec<usize> = grid.axes.iter().map(Vec::len).collect();
    let half = vec![grid.extent; grid.axes.len()];
    let vals = ln.iter().enumerate().filter(|(_, v)| v.is_finite()).map(|(i, &v)| {
        let x: Vec<f64> = unravel(i, &shape).iter().enumerate().map(|(j, &k)| grid.axes[j][k]).collect();
        let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        (box_fraction(&x, &half), v + spec.ln_omega_radial(rho))
    });
    let (l, covered) = ln_sup_with_coverage(vals);
    Ok(LatticeNode { t: t.values().to_vec(), sup: sup_from_ln(l), ln_sup: finite(l), coverage_error: !covered })
}

/// Per-node table without failing on coverage; see [`lattice_sweep`].
pub fn lattice_table(c: &CoeffTensor, lat: &Lattice, spec: &WeightSpec) -> Result<LatticeSweep> {
    check_omega(spec, c.dim())?;
    if lat.dim() != c.dim() {
        return Err(Error::domain("lattice and coefficients differ in dimension"));
    }
    lat.check_for(&spec.s)?;
    c.check_finite()?;
    let c = c.trimmed();
    let grid = sweep_grid(&c);
    let nodes: Vec<LatticeNode> = lat
        .nodes()
        .par_iter()
        .map(|t| node_sup(&c, t, spec, &grid))
        .collect::<Result<_>>()?;
    let ln = nodes.iter().filter_map(|n| n.ln_sup).fold(f64::NEG_INFINITY, f64::max);
    Ok(LatticeSweep { sup: sup_from_ln(ln), ln_sup: finite(ln), nodes })
}

/// `sup_{t∈Λ} ‖(𝓕_t f) e^{|·|²/2} ω_{d,r,s}‖_∞`, synthesized on a grid of half-width
/// `2.5·√(2K+d)·1.25`. A node whose maximum sits at the grid edge is a coverage error.
pub fn lattice_sweep(c: &CoeffTensor, lat: &Lattice, spec: &WeightSpec) -> Result<LatticeSweep> {
    let table = lattice_table(c, lat, spec)?;
    if let Some(bad) = table.nodes.iter().find(|n| n.coverage_error) {
        return Err(Error::Coverage {
            t: Some(bad.t.clone()),
            msg: "weighted values still rising at the grid boundary".into(),
        });
    }
    Ok(table)
}

/// CSV with columns `t1..td, sup, coverage_error`.
pub fn write_lattice_csv(table: &LatticeSweep, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let d = table.nodes.first().map_or(0, |n| n.t.len());
    let mut header: Vec<String> = (1..=d).map(|j| format!("t{j}")).collect();
    header.extend(["sup".into(), "coverage_error".into()]);
    w.write_record(&header)?;
    for n in &table.nodes {
        let mut row: Vec<String> = n.t.iter().map(|t| t.to_string()).collect();
        row.push(n.sup.map_or("inf".into(), |s| s.to_string()));
        row.push(n.coverage_error.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Radial profile `g(ρ) = max_{t∈Λ} ln(|𝓕_t f(x)| e^{|x|²/2})` with its trusted window.
pub(crate) fn lattice_profile(c: &CoeffTensor, lat: &Lattice) -> Result<Profile> {
    let finite_expansion = c.max_nonzero_order().is_some_and(|k| k < c.truncation().complete_order());
    let c = c.trimmed();
    let grid = sweep_grid(&c);
    let k = c.max_nonzero_order().unwrap_or(0);
    let cut = 3 * k / 4;
    let shape: Vec<usize> = grid.axes.iter().map(Vec::len).collect();
    let bins = if c.dim() == 1 { 400 } else { 120 };
    let per_node: Vec<Binner> = lat
        .nodes()
        .par_iter()
        .map(|t| -> Result<Binner> {
            let ct = frac_ft(&c, t)?;
            let tail = ct.map_indexed(|a, v| if a.iter().sum::<usize>() > cut { v } else { Complex64::new(0.0, 0.0) });
            let ln = ln_scaled_profile(&ct, &grid.axes);
            let lt = ln_scaled_profile(&tail, &grid.axes);
            let mut b = Binner::new(grid.extent, bins);
            for (i, (&v, &tv)) in ln.iter().zip(&lt).enumerate() {
                let rho = unravel(i, &shape)
                    .iter()
                    .enumerate()
                    .map(|(j, &k)| grid.axes[j][k].powi(2))
                    .sum::<f64>()
                    .sqrt();
                if v.is_finite() && rho <= grid.extent {
                    b.push(rho, v, tv);
                }
            }
            Ok(b)
        })
        .collect::<Result<_>>()?;
    let mut it = per_node.into_iter();
    let mut acc = it.next().ok_or_else(|| Error::domain("empty lattice"))?;
    for b in it {
        acc.merge(b);
    }
    Ok(acc.finish(0.5, finite_expansion, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{synthesize, Grid, TruncationBox, H0_AT_ZERO};

    fn omega(s: SpaceIndex, r: f64) -> WeightSpec {
        WeightSpec::formal(WeightFamily::OmegaD, s, r, 1)
    }

    #[test]
    fn lattice_nodes() {
        let l = Lattice::uniform(0.0, 0.5, 1).unwrap();
        let t: Vec<f64> = l.nodes().iter().map(|t| t.values()[0]).collect();
        assert_eq!(t, vec![0.0, 0.5, 1.0, 1.5]);
        let l = Lattice::uniform(0.25, 1.0, 1).unwrap();
        assert_eq!(l.nodes().len(), 2);
        assert!(l.check_for(&SpaceIndex::Real(0.5)).is_ok());
        assert!(l.check_for(&SpaceIndex::Real(0.25)).is_err());
        assert_eq!(Lattice::uniform(0.0, 0.5, 2).unwrap().nodes().len(), 16);
        assert!(Lattice::uniform(0.0, 1.5, 1).is_err());
        assert_eq!("0,0.5".parse::<Lattice>().unwrap(), Lattice::uniform(0.0, 0.5, 1).unwrap());
    }

    #[test]
    fn weighted_sup_of_gaussian() {
        let g = Grid::uniform_cube(8.0, 321, 1).unwrap();
        let f = GridFunction::sample(g, |x| Complex64::new(crate::hermite::hermite_eval(0, x[0]).unwrap(), 0.0));
        let v = weighted_sup(&f, &omega(SpaceIndex::Real(0.5), 0.3)).unwrap();
        assert!((v - H0_AT_ZERO).abs() < 1e-15);
        let err = weighted_sup(&f, &omega(SpaceIndex::Real(0.5), -0.1)).unwrap_err();
        assert!(matches!(err, Error::Coverage { t: None, .. }));
    }

    #[test]
    fn gaussian_sweep_is_constant() {
        let c = CoeffTensor::unit(TruncationBox::cube(8, 1).unwrap(), &[0]).unwrap();
        let lat = Lattice::uniform(0.0, 0.5, 1).unwrap();
        let sw = lattice_sweep(&c, &lat, &omega(SpaceIndex::Real(0.25), 1.0)).unwrap();
        assert_eq!(sw.nodes.len(), 4);
        for n in &sw.nodes {
            assert!((n.sup.unwrap() - H0_AT_ZERO).abs() < 1e-14);
        }
    }

    #[test]
    fn sweep_matches_direct_synthesis() {
        let bx = TruncationBox::cube(40, 1).unwrap();
        let c = CoeffTensor::from_fn(bx, |a| Complex64::new((-2.0 * a[0] as f64).exp(), 0.0));
        let spec = omega(SpaceIndex::Real(0.5), 0.1);
        let lat = Lattice::uniform(0.0, 0.5, 1).unwrap();
        let sw = lattice_sweep(&c, &lat, &spec).unwrap();
        let g = Grid::uniform_cube(12.0, 2401, 1).unwrap();
        for (n, t) in sw.nodes.iter().zip(lat.nodes()) {
            let f = synthesize(&frac_ft(&c, &t).unwrap(), &g).unwrap();
            let direct = weighted_sup(&f, &spec).unwrap();
            assert!((n.sup.unwrap() / direct - 1.0).abs() < 1e-3, "{} vs {direct}", n.sup.unwrap());
        }
    }

    #[test]
    fn csv_has_one_row_per_node() {
        let c = CoeffTensor::unit(TruncationBox::cube(3, 2).unwrap(), &[1, 0]).unwrap();
        let lat = Lattice::uniform(0.0, 0.5, 2).unwrap();
        let t = lattice_table(&c, &lat, &WeightSpec::formal(WeightFamily::OmegaD, SpaceIndex::Real(0.5), 0.2, 2)).unwrap();
        let mut buf = Vec::new();
        write_lattice_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 17);
        assert!(text.starts_with("t1,t2,sup,coverage_error"));
    }
}
