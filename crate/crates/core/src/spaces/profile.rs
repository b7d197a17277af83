//! Radial profiles `g(ρ)` of log-weighted transforms, with the radius up to which the
//! truncated series can be trusted.

use serde::{Deserialize, Serialize};

/// Tail-to-total ratio above which a truncated series is no longer trusted.
pub const TRUST_RATIO: f64 = 1e-3;

/// A sample of a phase-space profile, kept when weights are not radial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSample {
    pub nx: f64,
    pub nxi: f64,
    /// `ln(|V(x,ξ)| e^{(|x|²+|ξ|²)/4})`.
    pub ln_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    /// Bin centres.
    pub rho: Vec<f64>,
    /// Per-bin maximum of the log-weighted values.
    pub g: Vec<f64>,
    /// Per-bin log tail ratio at the maximizing point.
    pub ln_tail: Vec<f64>,
    /// Largest radius up to which every bin past `ρ = 1` is trusted.
    pub trusted_hi: f64,
    /// Gaussian exponent folded into `g`.
    pub kappa: f64,
    pub samples: Vec<PhaseSample>,
}

/// Running per-bin maxima.
pub(crate) struct Binner {
    width: f64,
    g: Vec<f64>,
    tail: Vec<f64>,
}

impl Binner {
    pub fn new(extent: f64, bins: usize) -> Self {
        Binner {
            width: extent / bins as f64,
            g: vec![f64::NEG_INFINITY; bins + 1],
            tail: vec![f64::NEG_INFINITY; bins + 1],
        }
    }

    /// Records `ln_value` at radius `rho`, with `ln_tail` the log of the truncated tail.
    pub fn push(&mut self, rho: f64, ln_value: f64, ln_tail: f64) {
        let b = (rho / self.width).round() as usize;
        if b < self.g.len() && ln_value > self.g[b] {
            self.g[b] = ln_value;
            self.tail[b] = ln_tail - ln_value;
        }
    }

    pub fn merge(&mut self, other: Binner) {
        for (b, (g, t)) in other.g.into_iter().zip(other.tail).enumerate() {
            if g > self.g[b] {
                self.g[b] = g;
                self.tail[b] = t;
            }
        }
    }

    /// Finished profile; `finite` marks every bin as trusted.
    pub fn finish(self, kappa: f64, finite: bool, samples: Vec<PhaseSample>) -> Profile {
        let keep: Vec<usize> = (0..self.g.len()).filter(|&b| self.g[b].is_finite()).collect();
        let rho: Vec<f64> = keep.iter().map(|&b| b as f64 * self.width).collect();
        let g: Vec<f64> = keep.iter().map(|&b| self.g[b]).collect();
        let ln_tail: Vec<f64> = keep.iter().map(|&b| self.tail[b]).collect();
        let limit = TRUST_RATIO.ln();
        let mut trusted_hi = rho.last().copied().unwrap_or(0.0);
        if !finite {
            if let Some(i) = (0..rho.len()).find(|&i| rho[i] >= 1.0 && ln_tail[i] > limit) {
                trusted_hi = if i == 0 { 0.0 } else { rho[i - 1] };
            }
        }
        Profile { rho, g, ln_tail, trusted_hi, kappa, samples }
    }
}

impl Profile {
    /// Bins in `[max(ρ_hi/3, 1/4), ρ_hi]`.
    pub fn fit_window(&self) -> (Vec<f64>, Vec<f64>) {
        let lo = (self.trusted_hi / 3.0).max(0.25);
        self.rho
            .iter()
            .zip(&self.g)
            .filter(|(r, _)| **r >= lo && **r <= self.trusted_hi)
            .map(|(r, g)| (*r, *g))
            .unzip()
    }

    /// Maximum of `g(ρ) + w(ρ)` over trusted bins.
    pub fn sup_radial(&self, w: impl Fn(f64) -> f64) -> f64 {
        self.rho
            .iter()
            .zip(&self.g)
            .filter(|(r, _)| **r <= self.trusted_hi)
            .map(|(r, g)| g + w(*r))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Maximum of `ln_value + w(|x|, |ξ|)` over trusted samples.
    pub fn sup_samples(&self, w: impl Fn(f64, f64) -> f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.nx.hypot(s.nxi) <= self.trusted_hi)
            .map(|s| s.ln_value + w(s.nx, s.nxi))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
