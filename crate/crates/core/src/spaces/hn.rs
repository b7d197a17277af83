//! Growth of `‖H^N f‖_∞` against `h^N N!^{2s}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::sweep_grid;
use crate::error::{Error, Result};
use crate::hermite::{ln_scaled_profile, unravel, CoeffTensor};
use crate::numeric::ln_factorial;
use crate::transforms::ln_harmonic_eigenvalue;

/// Largest `N` accepted by [`hn_growth_test`].
pub const HN_MAX: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HnRow {
    pub n: usize,
    /// `ln ‖H^N f‖_∞`.
    pub ln_norm: f64,
    /// `ln q(N) = ln ‖H^N f‖_∞ − N ln h − 2s ln N!`.
    pub ln_q: f64,
    /// The dominant scaled coefficient sits in the outer eighth of the box.
    pub unresolved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HnTable {
    pub s: f64,
    pub h: f64,
    pub rows: Vec<HnRow>,
}

impl HnTable {
    pub fn any_unresolved(&self) -> bool {
        self.rows.iter().any(|r| r.unresolved)
    }
}

/// `ln sup_x |Σ c(α) h_α(x)|` on the sweep grid.
fn ln_sup_norm(c: &CoeffTensor) -> f64 {
    let grid = sweep_grid(c);
    let shape: Vec<usize> = grid.axes.iter().map(Vec::len).collect();
    ln_scaled_profile(c, &grid.axes)
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let sq: f64 = unravel(i, &shape).iter().enumerate().map(|(j, &k)| grid.axes[j][k].powi(2)).sum();
            v - 0.5 * sq
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `ln q(N)` for `N = 0..=n_max`, in log space throughout.
pub fn hn_growth_test(c: &CoeffTensor, s: f64, h: f64, n_max: usize) -> Result<HnTable> {
    if !(s >= 0.0 && s.is_finite()) || !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain(format!("need s >= 0 and h > 0, got s = {s}, h = {h}")));
    }
    if n_max > HN_MAX {
        return Err(Error::precondition(format!("N_max = {n_max} exceeds {HN_MAX}")));
    }
    c.check_finite()?;
    let c = c.trimmed();
    let top = c.truncation().max_order();
    let ln_abs: Vec<f64> = c.coeffs().iter().map(|v| v.norm().ln()).collect();
    let alphas: Vec<Vec<usize>> = c.truncation().iter().collect();
    let rows = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let logs: Vec<f64> = alphas
                .iter()
                .zip(&ln_abs)
                .map(|(a, &l)| l + ln_harmonic_eigenvalue(a, n as u32))
                .collect();
            let (arg, peak) = logs
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
            if peak == f64::NEG_INFINITY {
                return HnRow { n, ln_norm: f64::NEG_INFINITY, ln_q: f64::NEG_INFINITY, unresolved: false };
            }
            let scaled = c.map_indexed(|a, v| {
                if v.norm() == 0.0 {
                    return v;
                }
                let i = c.truncation().flat_index(a).expect("own index");
                v / v.norm() * (logs[i] - peak).exp()
            });
            let ln_norm = ln_sup_norm(&scaled) + peak;
            let order: usize = alphas[arg].iter().sum();
            HnRow {
                n,
                ln_norm,
                ln_q: ln_norm - n as f64 * h.ln() - 2.0 * s * ln_factorial(n),
                unresolved: top >= 8 && 8 * order > 7 * top,
            }
        })
        .collect();
    Ok(HnTable { s, h, rows })
}
