//! Test functions with known membership.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::{analyze_fn, CoeffTensor, TruncationBox};
use crate::numeric::ln_factorial;
use crate::spaces::{SpaceIndex, SpaceParam};

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EntryKind {
    /// A single Hermite function `h_α`.
    HermiteBasis { alpha: Vec<usize> },
    /// `e^{-a|x|²}` in `dim` variables.
    Gaussian {
        a: f64,
        #[serde(default = "one")]
        dim: usize,
    },
    /// `e^{-r₀|α|^{1/(2s₀)}}` for real `s₀`, `r₀^{|α|}(α!)^{-1/(2σ)}` for `s₀ = ♭_σ`.
    SyntheticDecay {
        s0: SpaceIndex,
        r0: f64,
        #[serde(default = "one")]
        dim: usize,
        /// Multiply by seeded unit-modulus phases.
        #[serde(default)]
        phases: bool,
    },
    /// Random complex coefficients on `|α| ≤ support`.
    FiniteRandom {
        support: usize,
        #[serde(default = "one")]
        dim: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    #[serde(flatten)]
    pub kind: EntryKind,
    /// Overrides the run-wide truncation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

impl CorpusEntry {
    pub fn new(kind: EntryKind) -> Self {
        CorpusEntry { kind, truncation: None }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            EntryKind::HermiteBasis { alpha } => alpha.len(),
            EntryKind::Gaussian { dim, .. }
            | EntryKind::SyntheticDecay { dim, .. }
            | EntryKind::FiniteRandom { dim, .. } => *dim,
        }
    }

    /// Space the entry belongs to by construction, if it is sharp.
    pub fn ground_truth(&self) -> Option<SpaceParam> {
        match &self.kind {
            EntryKind::SyntheticDecay { s0, .. } => Some(SpaceParam::roumieu(*s0)),
            _ => None,
        }
    }

    /// Entries whose coefficients are all zero past a fixed order.
    pub fn is_finite_expansion(&self) -> bool {
        matches!(self.kind, EntryKind::HermiteBasis { .. } | EntryKind::FiniteRandom { .. })
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::config(m));
        match &self.kind {
            EntryKind::HermiteBasis { alpha } if alpha.is_empty() => bad("hermite-basis needs a non-empty alpha".into()),
            EntryKind::Gaussian { a, .. } if !(*a > 0.0 && a.is_finite()) => bad(format!("gaussian needs a > 0, got {a}")),
            EntryKind::SyntheticDecay { r0, .. } if !(*r0 > 0.0 && r0.is_finite()) => {
                bad(format!("synthetic-decay needs r0 > 0, got {r0}"))
            }
            EntryKind::SyntheticDecay { s0: SpaceIndex::Zero, .. } => bad("synthetic-decay needs a positive s0".into()),
            _ if self.dim() == 0 => bad("dimension must be positive".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CorpusEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EntryKind::HermiteBasis { alpha } => {
                let a: Vec<String> = alpha.iter().map(usize::to_string).collect();
                write!(f, "h_({})", a.join(","))
            }
            EntryKind::Gaussian { a, dim } => write!(f, "gaussian(a={a},d={dim})"),
            EntryKind::SyntheticDecay { s0, r0, dim, phases } => {
                write!(f, "synthetic(s0={s0},r0={r0},d={dim}{})", if *phases { ",phases" } else { "" })
            }
            EntryKind::FiniteRandom { support, dim } => write!(f, "finite-random(K={support},d={dim})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub entries: Vec<CorpusEntry>,
}

impl CorpusSpec {
    /// `h_0, h_3, h_(2,1)` and one synthetic entry per weight branch.
    pub fn standard() -> Self {
        let syn = |s0, r0| CorpusEntry::new(EntryKind::SyntheticDecay { s0, r0, dim: 1, phases: false });
        CorpusSpec {
            entries: vec![
                CorpusEntry::new(EntryKind::HermiteBasis { alpha: vec![0] }),
                CorpusEntry::new(EntryKind::HermiteBasis { alpha: vec![3] }),
                CorpusEntry::new(EntryKind::HermiteBasis { alpha: vec![2, 1] }),
                syn(SpaceIndex::Real(0.5), 2.0),
                syn(SpaceIndex::Real(1.0), 1.0),
                syn(SpaceIndex::Flat(1.0), 0.25),
            ],
        }
    }
}

/// A generated entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub name: String,
    pub entry: CorpusEntry,
    pub coeffs: CoeffTensor,
    pub truth: Option<SpaceParam>,
    pub note: Option<String>,
}

/// Coefficients of one entry; `stream` selects the random stream for seeded draws.
pub fn generate_entry(entry: &CorpusEntry, truncation: usize, seed: u64, stream: u64) -> Result<CorpusItem> {
    entry.validate()?;
    let n = entry.truncation.unwrap_or(truncation);
    let bx = TruncationBox::cube(n, entry.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut note = None;
    let coeffs = match &entry.kind {
        EntryKind::HermiteBasis { alpha } => CoeffTensor::unit(bx, alpha)?,
        EntryKind::Gaussian { a, .. } => {
            let c = analyze_fn(&bx, |x| Complex64::new((-a * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0))?;
            if (a - 0.5).abs() < 1e-15 {
                let scale = std::f64::consts::PI.powf(entry.dim() as f64 / 4.0);
                note = Some(format!("equals {scale:.15} h_0 (normalization factor pi^(d/4))"));
            }
            c
        }
        EntryKind::SyntheticDecay { s0, r0, phases, .. } => {
            let ln_mag = |a: &[usize]| -> f64 {
                let k: usize = a.iter().sum();
                match s0 {
                    SpaceIndex::Real(s) => -r0 * (k as f64).powf(1.0 / (2.0 * s)),
                    SpaceIndex::Flat(sigma) => {
                        k as f64 * r0.ln() - a.iter().map(|&j| ln_factorial(j)).sum::<f64>() / (2.0 * sigma)
                    }
                    SpaceIndex::Zero => unreachable!("validated"),
                }
            };
            CoeffTensor::from_fn(bx, |a| {
                let m = ln_mag(a).exp();
                if *phases {
                    Complex64::from_polar(m, rng.gen_range(0.0..std::f64::consts::TAU))
                } else {
                    Complex64::new(m, 0.0)
                }
            })
        }
        EntryKind::FiniteRandom { support, .. } => CoeffTensor::from_fn(bx, |a| {
            if a.iter().sum::<usize>() <= *support {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    };
    Ok(CorpusItem { name: entry.to_string(), entry: entry.clone(), coeffs, truth: entry.ground_truth(), note })
}

/// Generates every entry; the seed fixes all random phases and coefficients.
pub fn gen_corpus(spec: &CorpusSpec, truncation: usize, seed: u64) -> Result<Vec<CorpusItem>> {
    spec.entries
        .iter()
        .enumerate()
        .map(|(i, e)| generate_entry(e, truncation, seed, i as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_real_half() {
        let e = CorpusEntry::new(EntryKind::SyntheticDecay { s0: SpaceIndex::Real(0.5), r0: 2.0, dim: 1, phases: false });
        let it = generate_entry(&e, 16, 0, 0).unwrap();
        assert_eq!(it.coeffs.coeffs().len(), 17);
        for (k, v) in it.coeffs.coeffs().iter().enumerate() {
            assert!((v.re - (-2.0 * k as f64).exp()).abs() <= 1e-15 * v.re.max(1e-300));
        }
        assert_eq!(it.truth, Some(SpaceParam::roumieu(SpaceIndex::Real(0.5))));
    }

    #[test]
    fn gaussian_half_is_h0() {
        let e = CorpusEntry::new(EntryKind::Gaussian { a: 0.5, dim: 1 });
        let it = generate_entry(&e, 16, 0, 0).unwrap();
        let c = it.coeffs.coeffs();
        assert!((c[0].re - std::f64::consts::PI.powf(0.25)).abs() < 1e-13);
        assert!(c[1..].iter().all(|v| v.norm() < 1e-13));
        assert!(it.note.is_some());
    }

    #[test]
    fn spec_json_shape() {
        let text = r#"{"entries":[{"kind":"hermite-basis","alpha":[3]},
            {"kind":"synthetic-decay","s0":{"variant":"flat","value":1.0},"r0":0.25,"truncation":64}]}"#;
        let s: CorpusSpec = serde_json::from_str(text).unwrap();
        assert_eq!(s.entries[1].truncation, Some(64));
        assert_eq!(s.entries[1].ground_truth().unwrap().index, SpaceIndex::Flat(1.0));
        let back: CorpusSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn seeded_draws_repeat() {
        let e = CorpusEntry::new(EntryKind::FiniteRandom { support: 5, dim: 2 });
        let a = generate_entry(&e, 8, 7, 3).unwrap();
        assert_eq!(a.coeffs, generate_entry(&e, 8, 7, 3).unwrap().coeffs);
        assert_ne!(a.coeffs, generate_entry(&e, 8, 8, 3).unwrap().coeffs);
        assert_eq!(a.coeffs.max_nonzero_order(), Some(5));
    }

    #[test]
    fn invalid_parameters() {
        let e = CorpusEntry::new(EntryKind::Gaussian { a: -1.0, dim: 1 });
        assert!(matches!(generate_entry(&e, 8, 0, 0), Err(Error::Config(_))));
    }
}
