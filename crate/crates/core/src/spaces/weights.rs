//! Weight families on ℂᵈ, phase space and multi-indices.
//!
//! Every weight is evaluated as a logarithm first; the plain value is its exponential.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::param::SpaceIndex;
use crate::error::{Error, Result};
use crate::numeric::ln_factorial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFamily {
    /// `ω_{d,r,s}` on ℂᵈ, defined for `s ≤ 1/2`.
    OmegaD,
    /// `ϑ_{r,s}(x, ξ)` on phase space.
    Theta2d,
    /// `ω_{r,s}(x)` on ℝᵈ.
    OmegaIntro,
    /// `ϑ_{r,s}(α)` on multi-indices.
    Seq,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub family: WeightFamily,
    pub s: SpaceIndex,
    pub r: f64,
    pub d: usize,
}

impl WeightSpec {
    /// A weight with `(family, s, r)` checked against the family's admissible range.
    pub fn new(family: WeightFamily, s: SpaceIndex, r: f64, d: usize) -> Result<Self> {
        let spec = WeightSpec { family, s, r, d };
        spec.check()?;
        Ok(spec)
    }

    /// A weight with no admissibility check, e.g. a negative `r` that makes the weight grow.
    pub fn formal(family: WeightFamily, s: SpaceIndex, r: f64, d: usize) -> Self {
        WeightSpec { family, s, r, d }
    }

    fn check(&self) -> Result<()> {
        let bad = |why: &str| {
            Err(Error::domain(format!(
                "inadmissible {:?} weight with s = {}, r = {}: {why}",
                self.family, self.s, self.r
            )))
        };
        if self.d == 0 {
            return bad("dimension must be >= 1");
        }
        if !(self.r > 0.0) || !self.r.is_finite() {
            return bad("r must be positive");
        }
        match (self.family, self.s) {
            (WeightFamily::OmegaD, s) if !s.at_most_half() => bad("defined only for s <= 1/2"),
            (WeightFamily::Theta2d, SpaceIndex::Real(s)) if s == 0.5 && self.r >= 0.25 => bad("needs 0 < r < 1/4"),
            (WeightFamily::OmegaIntro, SpaceIndex::Real(s)) if s == 0.5 && self.r >= 0.5 => bad("needs 0 < r < 1/2"),
            (WeightFamily::Theta2d | WeightFamily::OmegaIntro, SpaceIndex::Flat(_)) => bad("not defined at ♭_σ"),
            (WeightFamily::Seq, SpaceIndex::Zero) => bad("undefined at s = 0"),
            _ => Ok(()),
        }
    }

    fn expect(&self, family: WeightFamily) -> Result<()> {
        if self.family != family {
            return Err(Error::domain(format!("expected a {family:?} weight, got {:?}", self.family)));
        }
        Ok(())
    }

    /// `ln ω_{d,r,s}` at a point of modulus `|z|`.
    pub(crate) fn ln_omega_radial(&self, norm: f64) -> f64 {
        let r = self.r;
        match self.s {
            SpaceIndex::Zero => -r * (0.5 * norm.mul_add(norm, 1.0).ln()),
            SpaceIndex::Real(s) if s < 0.5 => {
                let l = 0.5 * norm.mul_add(norm, 1.0).ln();
                -r * l.powf(1.0 / (1.0 - 2.0 * s))
            }
            SpaceIndex::Flat(sigma) => -r * norm.powf(2.0 * sigma / (sigma + 1.0)),
            SpaceIndex::Real(_) => -r * norm * norm,
        }
    }

    /// `ln ω_{r,s}(x)` from `|x|`.
    pub(crate) fn ln_omega_intro_radial(&self, norm: f64) -> f64 {
        let r = self.r;
        match self.s {
            SpaceIndex::Real(s) if s > 0.5 => -r * norm.powf(1.0 / s),
            SpaceIndex::Real(0.5) => -(0.5 - r) * norm * norm,
            SpaceIndex::Real(s) => -0.5 * norm * norm + r * norm.ln_1p().powf(1.0 / (1.0 - 2.0 * s)),
            SpaceIndex::Zero => -0.5 * norm * norm + r * norm.ln_1p(),
            SpaceIndex::Flat(_) => f64::NAN,
        }
    }

    /// `ln ϑ_{r,s}(x, ξ)` from `|x|` and `|ξ|`.
    pub(crate) fn ln_theta_parts(&self, nx: f64, nxi: f64) -> f64 {
        let r = self.r;
        let sq = nx * nx + nxi * nxi;
        match self.s {
            SpaceIndex::Real(s) if s > 0.5 => -r * (nx.powf(1.0 / s) + nxi.powf(1.0 / s)),
            SpaceIndex::Real(0.5) => -(0.25 - r) * sq,
            SpaceIndex::Real(s) => -0.25 * sq + r * (nx + nxi).ln_1p().powf(1.0 / (1.0 - 2.0 * s)),
            SpaceIndex::Zero => -0.25 * sq + r * (nx + nxi).ln_1p(),
            SpaceIndex::Flat(_) => f64::NAN,
        }
    }

    /// `ln ϑ_{r,s}(α)` from `|α|` and `ln α!`.
    pub(crate) fn ln_seq(&self, order: usize, ln_alpha_fact: f64) -> f64 {
        match self.s {
            SpaceIndex::Real(s) => self.r * (order as f64).powf(1.0 / (2.0 * s)),
            SpaceIndex::Flat(sigma) => order as f64 * self.r.ln() + ln_alpha_fact / (2.0 * sigma),
            SpaceIndex::Zero => f64::NAN,
        }
    }

    /// Whether the weight decreases pointwise as `r` grows.
    pub fn decreasing_in_r(&self) -> bool {
        match self.family {
            WeightFamily::OmegaD => true,
            WeightFamily::Seq => false,
            WeightFamily::Theta2d | WeightFamily::OmegaIntro => {
                matches!(self.s, SpaceIndex::Real(s) if s > 0.5)
            }
        }
    }
}

fn check_dim(spec: &WeightSpec, n: usize) -> Result<()> {
    if n != spec.d {
        return Err(Error::domain(format!("point of dimension {n} for a weight on dimension {}", spec.d)));
    }
    Ok(())
}

fn norm(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `ω_{d,r,s}(z)`.
pub fn weight_omega(spec: &WeightSpec, z: &[Complex64]) -> Result<f64> {
    spec.expect(WeightFamily::OmegaD)?;
    spec.check()?;
    check_dim(spec, z.len())?;
    Ok(spec.ln_omega_radial(norm(z.iter().flat_map(|c| [c.re, c.im]))).exp())
}

/// `ϑ_{r,s}(x, ξ)`.
pub fn weight_theta(spec: &WeightSpec, x: &[f64], xi: &[f64]) -> Result<f64> {
    spec.expect(WeightFamily::Theta2d)?;
    spec.check()?;
    check_dim(spec, x.len())?;
    check_dim(spec, xi.len())?;
    Ok(spec.ln_theta_parts(norm(x.iter().copied()), norm(xi.iter().copied())).exp())
}

/// `ω_{r,s}(x)`.
pub fn weight_omega_intro(spec: &WeightSpec, x: &[f64]) -> Result<f64> {
    spec.expect(WeightFamily::OmegaIntro)?;
    spec.check()?;
    check_dim(spec, x.len())?;
    Ok(spec.ln_omega_intro_radial(norm(x.iter().copied())).exp())
}

/// `ln ϑ_{r,s}(α)`.
pub fn ln_seq_weight(spec: &WeightSpec, alpha: &[usize]) -> Result<f64> {
    spec.expect(WeightFamily::Seq)?;
    spec.check()?;
    check_dim(spec, alpha.len())?;
    let lf: f64 = alpha.iter().map(|&a| ln_factorial(a)).sum();
    Ok(spec.ln_seq(alpha.iter().sum(), lf))
}

/// `ϑ_{r,s}(α)`; may be `+inf` when the logarithm exceeds the `f64` range.
pub fn seq_weight(spec: &WeightSpec, alpha: &[usize]) -> Result<f64> {
    Ok(ln_seq_weight(spec, alpha)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;
    use SpaceIndex::*;

    fn spec(f: WeightFamily, s: SpaceIndex, r: f64, d: usize) -> WeightSpec {
        WeightSpec::new(f, s, r, d).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn omega_examples() {
        let w = weight_omega(&spec(WeightFamily::OmegaD, Real(0.5), 1.0, 1), &[c(1.0)]).unwrap();
        assert!((w - 1.0 / E).abs() < 1e-16);
        assert_eq!(weight_omega(&spec(WeightFamily::OmegaD, Real(0.25), 3.0, 1), &[c(0.0)]).unwrap(), 1.0);
        let w = weight_omega(&spec(WeightFamily::OmegaD, Flat(1.0), 2.0, 1), &[c(4.0)]).unwrap();
        assert!((w - (-8.0f64).exp()).abs() < 1e-18);
        assert!(WeightSpec::new(WeightFamily::OmegaD, Real(1.0), 1.0, 1).is_err());
    }

    #[test]
    fn theta_examples() {
        let s = spec(WeightFamily::Theta2d, Real(0.5), 0.125, 1);
        assert!((weight_theta(&s, &[2.0], &[2.0]).unwrap() - 1.0 / E).abs() < 1e-16);
        assert_eq!(weight_theta(&spec(WeightFamily::Theta2d, Real(1.0), 3.0, 1), &[0.0], &[0.0]).unwrap(), 1.0);
        assert!(WeightSpec::new(WeightFamily::Theta2d, Real(0.5), 0.25, 1).is_err());
    }

    #[test]
    fn omega_intro_examples() {
        let s = spec(WeightFamily::OmegaIntro, Real(0.5), 0.25, 1);
        assert!((weight_omega_intro(&s, &[2.0]).unwrap() - 1.0 / E).abs() < 1e-16);
        let s = spec(WeightFamily::OmegaIntro, Real(2.0), 1.0, 1);
        assert!((weight_omega_intro(&s, &[32.0]).unwrap() - (-(32f64).sqrt()).exp()).abs() < 1e-18);
        for sp in [Real(0.2), Real(0.5), Real(3.0), Zero] {
            let s = spec(WeightFamily::OmegaIntro, sp, 0.1, 2);
            assert_eq!(weight_omega_intro(&s, &[0.0, 0.0]).unwrap(), 1.0);
        }
    }

    #[test]
    fn seq_examples() {
        let s = spec(WeightFamily::Seq, Real(0.5), 1.0, 1);
        assert!((seq_weight(&s, &[9]).unwrap() - 9f64.exp()).abs() < 1e-11);
        let s = spec(WeightFamily::Seq, Flat(1.0), 2.0, 1);
        assert!((seq_weight(&s, &[3]).unwrap() - 8.0 * 6f64.sqrt()).abs() < 1e-13);
        assert_eq!(seq_weight(&s, &[0]).unwrap(), 1.0);
        assert!(WeightSpec::new(WeightFamily::Seq, Zero, 1.0, 1).is_err());
        assert!(seq_weight(&s, &[1, 2]).is_err());
    }

    #[test]
    fn family_mismatch_is_rejected() {
        let s = spec(WeightFamily::Seq, Real(1.0), 1.0, 1);
        assert!(weight_omega(&s, &[c(1.0)]).is_err());
    }
}
