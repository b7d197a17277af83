//! The extended index set `{0} ∪ ℝ₊ ∪ {♭_σ}` and its order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of the extended index set.
///
/// Order: `0 < s < ♭_σ < s'` whenever `s < 1/2 ≤ s'`, and `♭_σ₁ < ♭_σ₂` iff `σ₁ < σ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceIndex {
    Zero,
    Real(f64),
    Flat(f64),
}

impl SpaceIndex {
    pub fn real(s: f64) -> Result<Self> {
        if s > 0.0 && s.is_finite() {
            Ok(SpaceIndex::Real(s))
        } else {
            Err(Error::domain(format!("real index must be positive and finite, got {s}")))
        }
    }

    pub fn flat(sigma: f64) -> Result<Self> {
        if sigma > 0.0 && sigma.is_finite() {
            Ok(SpaceIndex::Flat(sigma))
        } else {
            Err(Error::domain(format!("σ must be positive and finite, got {sigma}")))
        }
    }

    fn key(&self) -> (u8, f64) {
        match *self {
            SpaceIndex::Zero => (0, 0.0),
            SpaceIndex::Real(s) if s < 0.5 => (1, s),
            SpaceIndex::Flat(sigma) => (2, sigma),
            SpaceIndex::Real(s) => (3, s),
        }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            SpaceIndex::Zero => None,
            SpaceIndex::Real(v) | SpaceIndex::Flat(v) => Some(v),
        }
    }

    /// Whether the index is at most `1/2` in the extended order.
    pub fn at_most_half(&self) -> bool {
        self.cmp_index(&SpaceIndex::Real(0.5)) != Ordering::Greater
    }

    pub fn cmp_index(&self, other: &SpaceIndex) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))
    }

    /// Relative distance to `other` when both lie in the same branch.
    pub(crate) fn relative_gap(&self, other: &SpaceIndex) -> Option<f64> {
        match (*self, *other) {
            (SpaceIndex::Zero, SpaceIndex::Zero) => Some(0.0),
            (SpaceIndex::Real(a), SpaceIndex::Real(b)) | (SpaceIndex::Flat(a), SpaceIndex::Flat(b)) => {
                Some((a - b).abs() / b)
            }
            _ => None,
        }
    }
}

impl fmt::Display for SpaceIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceIndex::Zero => write!(f, "0"),
            SpaceIndex::Real(s) => write!(f, "{s}"),
            SpaceIndex::Flat(sigma) => write!(f, "♭{sigma}"),
        }
    }
}

impl Serialize for SpaceIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpaceParam::roumieu(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpaceIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(SpaceParam::deserialize(d)?.index)
    }
}

/// Roumieu ("for some r") or Beurling ("for every r") type.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Beurling,
    #[default]
    Roumieu,
}

/// A space label: index plus flavor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceParamJson", into = "SpaceParamJson")]
pub struct SpaceParam {
    pub index: SpaceIndex,
    pub flavor: Flavor,
}

impl SpaceParam {
    pub fn roumieu(index: SpaceIndex) -> Self {
        SpaceParam { index, flavor: Flavor::Roumieu }
    }

    pub fn beurling(index: SpaceIndex) -> Self {
        SpaceParam { index, flavor: Flavor::Beurling }
    }
}

/// Total order on labels. Beurling spaces sit just below the Roumieu space of the
/// same index.
pub fn space_compare(a: &SpaceParam, b: &SpaceParam) -> Ordering {
    a.index.cmp_index(&b.index).then(a.flavor.cmp(&b.flavor))
}

impl Eq for SpaceParam {}

impl PartialOrd for SpaceParam {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SpaceParam {
    fn cmp(&self, other: &Self) -> Ordering {
        space_compare(self, other)
    }
}

impl fmt::Display for SpaceParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.flavor {
            Flavor::Roumieu => "H",
            Flavor::Beurling => "H0",
        };
        write!(f, "{kind}_{}", self.index)
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceParamJson {
    variant: String,
    #[serde(default)]
    value: Option<f64>,
    #[serde(default)]
    flavor: Flavor,
}

impl From<SpaceParam> for SpaceParamJson {
    fn from(p: SpaceParam) -> Self {
        let variant = match p.index {
            SpaceIndex::Zero => "zero",
            SpaceIndex::Real(_) => "real",
            SpaceIndex::Flat(_) => "flat",
        };
        SpaceParamJson { variant: variant.into(), value: p.index.value(), flavor: p.flavor }
    }
}

impl TryFrom<SpaceParamJson> for SpaceParam {
    type Error = Error;
    fn try_from(j: SpaceParamJson) -> Result<Self> {
        let need = || j.value.ok_or_else(|| Error::config(format!("variant {} needs a value", j.variant)));
        let index = match j.variant.as_str() {
            "zero" => SpaceIndex::Zero,
            "real" => SpaceIndex::real(need()?)?,
            "flat" => SpaceIndex::flat(need()?)?,
            other => return Err(Error::config(format!("unknown space variant {other:?}"))),
        };
        Ok(SpaceParam { index, flavor: j.flavor })
    }
}

/// `{1/4, ♭_{1/2}, ♭_1, ♭_2, 1/2, 1, 2}`, each of Roumieu type, in increasing order.
pub fn default_candidates() -> Vec<SpaceParam> {
    use SpaceIndex::*;
    let mut v: Vec<SpaceParam> = [Real(0.25), Flat(0.5), Flat(1.0), Flat(2.0), Real(0.5), Real(1.0), Real(2.0)]
        .into_iter()
        .map(SpaceParam::roumieu)
        .collect();
    v.sort();
    v
}

/// Parses `0`, `0.25`, `flat:1`, `♭1` (optionally prefixed by `beurling:`).
pub fn parse_space_param(text: &str) -> Result<SpaceParam> {
    let t = text.trim();
    let (flavor, rest) = match t.strip_prefix("beurling:") {
        Some(r) => (Flavor::Beurling, r),
        None => (Flavor::Roumieu, t.strip_prefix("roumieu:").unwrap_or(t)),
    };
    let bad = |_| Error::config(format!("cannot parse space parameter {text:?}"));
    let index = if let Some(v) = rest.strip_prefix("flat:").or_else(|| rest.strip_prefix('♭')) {
        SpaceIndex::flat(v.parse().map_err(bad)?)?
    } else if rest == "0" || rest == "zero" {
        SpaceIndex::Zero
    } else {
        SpaceIndex::real(rest.parse().map_err(bad)?)?
    };
    Ok(SpaceParam { index, flavor })
}
