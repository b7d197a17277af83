//! Run configuration, read from JSON with every field optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::corpus::CorpusSpec;
use crate::error::{Error, Result};
use crate::numeric::SumMode;
use crate::spaces::{default_candidates, ClassifyOptions, Criterion, Lattice, SpaceParam};

/// Residual tolerances for every check in a verify run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Group law, periodicity, unitarity and H-commutation, relative to the input size.
    pub algebra: f64,
    /// `𝓕_1` against direct quadrature, sup norm.
    pub fourier: f64,
    /// STFT/Bargmann identities, absolute.
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { algebra: 1e-14, fourier: 1e-7, identity: 1e-7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: CorpusSpec,
    pub criteria: Vec<Criterion>,
    pub candidates: Vec<SpaceParam>,
    pub lattice: Lattice,
    pub r_ref: f64,
    /// Default box size per axis.
    pub truncation: usize,
    /// Re-classify at twice the truncation and require the same label.
    pub refine: bool,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Fixed reduction order and no wall-clock fields.
    pub deterministic_sum: bool,
    /// Random tensors per dimension in the transform-algebra suite.
    pub algebra_draws: usize,
    /// Box size of those tensors.
    pub algebra_truncation: usize,
    /// Seeded `(t, x, ξ)` draws per entry for the STFT identities.
    pub identity_draws: usize,
    pub hn_max: usize,
    /// Output directory for `emit_report`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    /// Test hook: multiplies every `𝓕_t` in the algebra suite by `e^{iε t²|α|}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_fault: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = ClassifyOptions::default();
        RunConfig {
            corpus: CorpusSpec::standard(),
            criteria: c.criteria,
            candidates: default_candidates(),
            lattice: c.lattice,
            r_ref: c.r_ref,
            truncation: 128,
            refine: true,
            seed: 42,
            tolerances: Tolerances::default(),
            deterministic_sum: false,
            algebra_draws: 50,
            algebra_truncation: 64,
            identity_draws: 50,
            hn_max: c.hn_max,
            out: None,
            phase_fault: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.criteria.is_empty() {
            return Err(Error::config("at least one criterion must be enabled"));
        }
        if self.candidates.is_empty() {
            return Err(Error::config("empty candidate list"));
        }
        if !(self.r_ref > 0.0 && self.r_ref.is_finite()) {
            return Err(Error::config(format!("r_ref must be positive, got {}", self.r_ref)));
        }
        if self.truncation == 0 || self.algebra_truncation == 0 {
            return Err(Error::config("truncation must be positive"));
        }
        let t = self.tolerances;
        if [t.algebra, t.fourier, t.identity].iter().any(|v| !(*v > 0.0)) {
            return Err(Error::config("tolerances must be positive"));
        }
        Ok(())
    }

    pub fn sum_mode(&self) -> SumMode {
        if self.deterministic_sum { SumMode::Pairwise } else { SumMode::Sequential }
    }

    pub fn classify_options(&self) -> ClassifyOptions {
        ClassifyOptions {
            criteria: self.criteria.clone(),
            candidates: self.candidates.clone(),
            lattice: self.lattice.clone(),
            r_ref: self.r_ref,
            hn_max: self.hn_max,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_json_fills_defaults() {
        let c = RunConfig::from_json(r#"{"seed": 7, "criteria": ["coeff"], "corpus": {"entries": []}}"#).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.truncation, 128);
        assert!(c.corpus.entries.is_empty());
        assert_eq!(c.tolerances, Tolerances::default());
    }

    #[test]
    fn round_trip_and_rejects() {
        let c = RunConfig::default();
        let back = RunConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(RunConfig::from_json(r#"{"criteria": []}"#).is_err());
        assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"r_ref": 0}"#).is_err());
    }
}
