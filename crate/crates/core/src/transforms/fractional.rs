//! Fractional Fourier transforms and powers of the harmonic oscillator, both diagonal
//! in the Hermite basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::CoeffTensor;

/// Per-axis fractional order `t`. `t = 1` on every axis is the Fourier transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FracOrder(Vec<f64>);

impl FracOrder {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::domain("fractional order needs at least one axis"));
        }
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite fractional order {t:?}")));
        }
        Ok(FracOrder(t))
    }

    pub fn uniform(t: f64, d: usize) -> Result<Self> {
        Self::new(vec![t; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Representative with every entry in `[0, 4)`.
    pub fn canonical(&self) -> FracOrder {
        FracOrder(self.0.iter().map(|t| t.rem_euclid(4.0)).collect())
    }

    pub fn neg(&self) -> FracOrder {
        FracOrder(self.0.iter().map(|t| -t).collect())
    }

    /// Entrywise sum. Dimensions must agree.
    pub fn add(&self, other: &FracOrder) -> Result<FracOrder> {
        if self.dim() != other.dim() {
            return Err(Error::domain("fractional orders of different dimension"));
        }
        FracOrder::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `Σ tⱼαⱼ mod 4`, with each product reduced exactly.
    pub fn turns(&self, alpha: &[usize]) -> f64 {
        let mut acc = 0.0;
        for (&t, &a) in self.0.iter().zip(alpha) {
            let t = t.rem_euclid(4.0);
            let a = a as f64;
            let p = t * a;
            let err = t.mul_add(a, -p);
            acc += p.rem_euclid(4.0) + err;
        }
        acc.rem_euclid(4.0)
    }
}

impl TryFrom<Vec<f64>> for FracOrder {
    type Error = Error;
    fn try_from(t: Vec<f64>) -> Result<Self> {
        FracOrder::new(t)
    }
}

impl From<FracOrder> for Vec<f64> {
    fn from(t: FracOrder) -> Self {
        t.0
    }
}

/// `(cos(θπ/2), sin(θπ/2))`, exact when `θ` is an integer.
pub fn quarter_turn(theta: f64) -> (f64, f64) {
    let n = theta.round();
    let f = theta - n;
    let (s, c) = (f * std::f64::consts::FRAC_PI_2).sin_cos();
    match (n.rem_euclid(4.0)) as u8 {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

/// `e^{-iπθ/2}`.
pub(crate) fn phase(theta: f64) -> Complex64 {
    let (c, s) = quarter_turn(theta);
    Complex64::new(c, -s)
}

fn check_dim(c: &CoeffTensor, t: &FracOrder) -> Result<()> {
    if c.dim() != t.dim() {
        return Err(Error::domain(format!(
            "order of dimension {} applied to coefficients of dimension {}",
            t.dim(),
            c.dim()
        )));
    }
    Ok(())
}

/// `𝓕_t`: `c(α) ↦ e^{-i(π/2)Σ tⱼαⱼ} c(α)`.
pub fn frac_ft(c: &CoeffTensor, t: &FracOrder) -> Result<CoeffTensor> {
    check_dim(c, t)?;
    Ok(c.map_indexed(|alpha, v| v * phase(t.turns(alpha))))
}

/// `H^N`: `c(α) ↦ (2|α| + d)^N c(α)`.
pub fn harmonic_apply(c: &CoeffTensor, n: u32) -> Result<CoeffTensor> {
    let d = c.dim();
    let mut out = c.clone();
    for (alpha, v) in c.truncation().iter().zip(out.coeffs_mut()) {
        if n == 0 {
            break;
        }
        if *v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let order: usize = alpha.iter().sum();
        let base = (2 * order + d) as f64;
        let factor = base.powf(n as f64);
        let scaled = *v * factor;
        if !factor.is_finite() || !scaled.re.is_finite() || !scaled.im.is_finite() {
            return Err(Error::Range {
                alpha,
                msg: format!("(2|α|+d)^N = {base}^{n} overflows"),
            });
        }
        *v = scaled;
    }
    Ok(out)
}

/// Natural log of `(2|α| + d)^N`; the overflow-free form of the eigenvalue power.
pub fn ln_harmonic_eigenvalue(alpha: &[usize], n: u32) -> f64 {
    let order: usize = alpha.iter().sum();
    n as f64 * ((2 * order + alpha.len()) as f64).ln()
}
