//! Small numerical helpers shared by the modules: summation modes, log-factorials,
//! binary scaling and least squares.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// How long sums are accumulated.
///
/// `Pairwise` is a fixed binary-tree reduction, so its result does not depend on how
/// the work was partitioned between threads.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumMode {
    #[default]
    Sequential,
    Pairwise,
}

impl SumMode {
    pub fn sum(self, xs: &[f64]) -> f64 {
        match self {
            SumMode::Sequential => xs.iter().sum(),
            SumMode::Pairwise => pairwise_sum(xs),
        }
    }
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

const LN_FACT_TABLE: usize = 1024;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACT_TABLE + 1);
        t.push(0.0);
        let mut acc = 0.0f64;
        for j in 1..=LN_FACT_TABLE {
            acc += (j as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    if n <= LN_FACT_TABLE {
        return ln_fact_table()[n];
    }
    // Stirling series, accurate to roundoff for n > 1024.
    let x = n as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// `m · 2^e` without intermediate overflow for large `|e|`.
pub fn ldexp(mut m: f64, mut e: i32) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
    }
    m * 2f64.powi(e)
}

/// Ordinary least squares `min ‖A β − y‖₂`, `A` given row-wise. Returns `(β, SSE)`.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let n = rows.len();
    let p = rows.first()?.len();
    if n < p || y.len() != n {
        return None;
    }
    let a = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let beta = svd.solve(&b, 1e-13).ok()?;
    let resid = &a * &beta - &b;
    let sse = resid.norm_squared();
    if !sse.is_finite() {
        return None;
    }
    Some((beta.iter().copied().collect(), sse))
}

/// Coefficient of determination of a fit with residual sum of squares `sse`.
pub fn r_squared(y: &[f64], sse: f64) -> f64 {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if sst <= 0.0 {
        return if sse <= 1e-24 { 1.0 } else { 0.0 };
    }
    1.0 - sse / sst
}
