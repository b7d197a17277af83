//! Decay and growth fits.
//!
//! Coefficient shells are fitted against `ln m(k) = a − r k^p` and against the factorial
//! model `ln m(k) = a + b k − β ln k!`. Weighted profiles `g(ρ)` (log of a transform
//! times its Gaussian envelope) are fitted to a growth class.

use serde::{Deserialize, Serialize};

use super::param::{SpaceIndex, SpaceParam};
use crate::error::{Error, Result};
use crate::hermite::{CoeffTensor, GridFunction};
use crate::numeric::{least_squares, ln_factorial, r_squared};

/// Minimum number of positive shell maxima for a coefficient fit.
pub const MIN_SHELLS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "model")]
pub enum DecayModel {
    /// `ln m(k) ≈ a − r k^p`.
    Real { p: f64 },
    /// `ln m(k) ≈ a + k ln(1/r) − β ln k!`.
    Factorial { beta: f64 },
    /// Finitely many nonzero shells.
    Finite { last_shell: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffFit {
    pub s_hat: SpaceParam,
    pub model: DecayModel,
    /// Critical parameter of the sequence weight; `None` for finite expansions.
    pub r_hat: Option<f64>,
    pub quality: f64,
    pub note: Option<String>,
}

impl CoeffFit {
    pub fn p(&self) -> Option<f64> {
        match self.model {
            DecayModel::Real { p } => Some(p),
            DecayModel::Factorial { beta } => Some(beta),
            DecayModel::Finite { .. } => None,
        }
    }
}

/// Golden-section refinement of a grid minimum.
fn refine_min(f: impl Fn(f64) -> f64, grid: &[f64]) -> f64 {
    let (mut best, mut best_v) = (grid[0], f64::INFINITY);
    let mut best_i = 0;
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v < best_v {
            best = x;
            best_v = v;
            best_i = i;
        }
    }
    let (mut lo, mut hi) = (
        grid[best_i.saturating_sub(1)],
        grid[(best_i + 1).min(grid.len() - 1)],
    );
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let mid = 0.5 * (lo + hi);
    if f(mid) <= best_v { mid } else { best }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `y ≈ a − r x^p`: returns `(p, a, r, sse)`.
fn fit_stretched(x: &[f64], y: &[f64], p_lo: f64, p_hi: f64) -> Option<(f64, f64, f64, f64)> {
    let solve = |p: f64| {
        let rows: Vec<Vec<f64>> = x.iter().map(|&k| vec![1.0, -k.powf(p)]).collect();
        least_squares(&rows, y)
    };
    let p = refine_min(|p| solve(p).map_or(f64::INFINITY, |s| s.1), &log_grid(p_lo, p_hi, 240));
    let (beta, sse) = solve(p)?;
    Some((p, beta[0], beta[1], sse))
}

/// Fits the two decay models to the shell maxima of `c`.
pub fn coeff_decay_fit(c: &CoeffTensor) -> Result<CoeffFit> {
    let shells = c.shell_maxima();
    let peak = shells.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::inference("all coefficients vanish"));
    }
    let positive: Vec<usize> = (0..shells.len()).filter(|&k| shells[k] > 0.0).collect();
    let last = *positive.last().expect("peak > 0");
    let trailing_zeros = last + 1 < shells.len();
    let finite = |why: &str| CoeffFit {
        s_hat: SpaceParam::beurling(SpaceIndex::Zero),
        model: DecayModel::Finite { last_shell: last },
        r_hat: None,
        quality: 1.0,
        note: Some(format!("superfast decay, H0-like ({why})")),
    };
    if positive.len() < MIN_SHELLS {
        if trailing_zeros {
            return Ok(finite("finite expansion"));
        }
        return Err(Error::inference(format!(
            "{} nonzero shells, at least {MIN_SHELLS} needed",
            positive.len()
        )));
    }
    let k: Vec<f64> = positive.iter().map(|&k| k as f64).collect();
    let y: Vec<f64> = positive.iter().map(|&k| shells[k].ln()).collect();

    let (p, _a, r, sse_real) = fit_stretched(&k, &y, 0.05, 6.0)
        .ok_or_else(|| Error::inference("real-index model could not be fitted"))?;
    let rows: Vec<Vec<f64>> = positive
        .iter()
        .map(|&kk| vec![1.0, kk as f64, -ln_factorial(kk)])
        .collect();
    let (fact, sse_fact) = least_squares(&rows, &y)
        .ok_or_else(|| Error::inference("factorial model could not be fitted"))?;
    let beta = fact[2];

    let noise_tail = shells[last] < 1e-13 * peak;
    let factorial = beta > 0.025 && sse_fact < 0.5 * sse_real;
    let (model, r_hat, sse) = if factorial {
        (DecayModel::Factorial { beta }, (-fact[1]).exp(), sse_fact)
    } else {
        (DecayModel::Real { p }, r, sse_real)
    };
    let quality = r_squared(&y, sse);
    if noise_tail && quality < 0.9 {
        return Ok(finite("shells fall to the noise floor"));
    }
    if !(r_hat > 0.0) || (!factorial && p <= 0.0) {
        return Err(Error::inference("coefficients do not decay"));
    }
    let index = match model {
        DecayModel::Factorial { beta } => SpaceIndex::Flat(1.0 / (2.0 * beta)),
        _ => SpaceIndex::Real(1.0 / (2.0 * p)),
    };
    Ok(CoeffFit { s_hat: SpaceParam::roumieu(index), model, r_hat: Some(r_hat), quality, note: None })
}

/// Growth class of a weighted profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub class: SpaceIndex,
    /// Coefficient of the dominant growth term, on the scale of the matching weight.
    pub rate: f64,
    /// Exponent of the dominant term (`q` for powers of `ρ`, `m` for powers of `ln ρ`).
    pub exponent: f64,
    pub quality: f64,
    pub stage: char,
}

/// `y ≈ a + B ρ^q (+ C ln ρ)` with `q` searched on a grid: `(q, [a, B, C?], sse)`.
fn fit_power_log(rho: &[f64], y: &[f64], with_log: bool) -> Option<(f64, Vec<f64>, f64)> {
    let solve = |q: f64| {
        let rows: Vec<Vec<f64>> = rho
            .iter()
            .map(|&p| if with_log { vec![1.0, p.powf(q), p.ln()] } else { vec![1.0, p.powf(q)] })
            .collect();
        least_squares(&rows, y)
    };
    let grid: Vec<f64> = (0..=220).map(|i| 0.3 + 0.01 * i as f64).collect();
    let q = refine_min(|q| solve(q).map_or(f64::INFINITY, |s| s.1), &grid);
    let (beta, sse) = solve(q)?;
    Some((q, beta, sse))
}

fn fit_fixed_power_log(rho: &[f64], y: &[f64], q: f64) -> Option<(Vec<f64>, f64)> {
    let rows: Vec<Vec<f64>> = rho.iter().map(|&p| vec![1.0, p.powf(q), p.ln()]).collect();
    least_squares(&rows, y)
}

/// Threshold on `B ρ_max^q` below which a growth term is treated as absent.
const SIGNIFICANT: f64 = 0.5;

/// Classifies `g(ρ) = ln(|F(ρ)| e^{κρ²})` by its growth.
///
/// A. If the deficit `κρ² − g` grows like `ρ^q` with `q < 7/4` the function decays like
///    `e^{-Bρ^q}`, a Gelfand–Shilov index `1/q`.
/// B. Else if `g` itself grows like `ρ^q`: quadratic growth is the index `1/2`, slower
///    power growth `q` is `♭_σ` with `q = 2σ/(σ+1)`.
/// C. Else `g` grows like `(ln ρ)^m`: `m ≤ 1.3` is polynomial growth (index `0`),
///    larger `m` is a real index `(1 − 1/m)/2` below `1/2`.
pub(crate) fn growth_class(rho: &[f64], g: &[f64], kappa: f64) -> Result<GrowthFit> {
    if rho.len() < 8 {
        return Err(Error::inference(format!("{} profile points, at least 8 needed", rho.len())));
    }
    let rmax = rho.iter().cloned().fold(0.0, f64::max);
    let deficit: Vec<f64> = rho.iter().zip(g).map(|(&p, &v)| kappa * p * p - v).collect();
    if let Some((q, b, sse)) = fit_power_log(rho, &deficit, false) {
        if q <= 1.75 && b[1] > 0.0 && b[1] * rmax.powf(q) >= SIGNIFICANT {
            return Ok(GrowthFit {
                class: SpaceIndex::Real(1.0 / q),
                rate: b[1],
                exponent: q,
                quality: r_squared(&deficit, sse),
                stage: 'A',
            });
        }
    }
    if let Some((q, b, sse)) = fit_power_log(rho, g, true) {
        if b[1] > 0.0 && b[1] * rmax.powf(q) >= SIGNIFICANT {
            if q >= 1.75 {
                let (b2, sse2) = fit_fixed_power_log(rho, g, 2.0)
                    .ok_or_else(|| Error::inference("quadratic refit failed"))?;
                return Ok(GrowthFit {
                    class: SpaceIndex::Real(0.5),
                    rate: b2[1].max(0.0),
                    exponent: 2.0,
                    quality: r_squared(g, sse2),
                    stage: 'B',
                });
            }
            if q >= 0.4 {
                return Ok(GrowthFit {
                    class: SpaceIndex::Flat(q / (2.0 - q)),
                    rate: b[1],
                    exponent: q,
                    quality: r_squared(g, sse),
                    stage: 'B',
                });
            }
        }
    }
    let (lr, lg): (Vec<f64>, Vec<f64>) = rho
        .iter()
        .zip(g)
        .filter(|(p, _)| **p > 1.0)
        .map(|(p, v)| (p.ln(), *v))
        .unzip();
    let zero = |lr: &[f64], lg: &[f64]| -> Result<GrowthFit> {
        let rows: Vec<Vec<f64>> = lr.iter().map(|&l| vec![1.0, l]).collect();
        let (b, sse) = least_squares(&rows, lg).ok_or_else(|| Error::inference("log fit failed"))?;
        Ok(GrowthFit {
            class: SpaceIndex::Zero,
            rate: b[1].max(0.0),
            exponent: 1.0,
            quality: r_squared(lg, sse),
            stage: 'C',
        })
    };
    if lr.len() < 4 {
        return zero(&lr, &lg)
            .or(Ok(GrowthFit { class: SpaceIndex::Zero, rate: 0.0, exponent: 1.0, quality: 1.0, stage: 'C' }));
    }
    let (m, _a, negb, sse) = fit_stretched(&lr, &lg, 0.5, 6.0)
        .ok_or_else(|| Error::inference("log-power fit failed"))?;
    let b = -negb;
    let lmax = lr.iter().cloned().fold(0.0, f64::max);
    if m <= 1.3 || b * lmax.powf(m) < SIGNIFICANT {
        return zero(&lr, &lg);
    }
    Ok(GrowthFit {
        class: SpaceIndex::Real((1.0 - 1.0 / m) / 2.0),
        rate: b,
        exponent: m,
        quality: r_squared(&lg, sse),
        stage: 'C',
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GsFit {
    pub s_hat: f64,
    pub r_hat: f64,
    pub quality: f64,
}

/// Fits `ln|f(x)| ≈ a − r|x|^{1/s}` on radial maxima over the outer two thirds of the grid.
pub fn gs_pointwise_fit(f: &GridFunction) -> Result<GsFit> {
    let grid = f.grid();
    let reach = grid
        .axes()
        .iter()
        .map(|a| a[0].abs().min(a[a.len() - 1].abs()))
        .fold(f64::INFINITY, f64::min);
    let step = grid
        .axes()
        .iter()
        .flat_map(|a| a.windows(2).map(|w| w[1] - w[0]))
        .fold(f64::INFINITY, f64::min);
    let lo = reach / 3.0;
    let nbins = ((reach - lo) / step).floor().max(1.0) as usize;
    let mut bins = vec![0.0f64; nbins + 1];
    let mut rad = vec![0.0f64; nbins + 1];
    for (i, v) in f.values().iter().enumerate() {
        let x = grid.point(i);
        let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rho < lo || rho > reach {
            continue;
        }
        let b = (((rho - lo) / step) as usize).min(nbins);
        if v.norm() > bins[b] {
            bins[b] = v.norm();
            rad[b] = rho;
        }
    }
    let (x, y): (Vec<f64>, Vec<f64>) = bins
        .iter()
        .zip(&rad)
        .filter(|(m, _)| **m > 0.0 && m.is_finite())
        .map(|(m, r)| (*r, m.ln()))
        .unzip();
    if x.len() < 32 {
        return Err(Error::inference(format!("{} usable radii, at least 32 needed", x.len())));
    }
    let (q, _a, r, sse) = fit_stretched(&x, &y, 0.1, 6.0)
        .ok_or_else(|| Error::inference("pointwise decay fit failed"))?;
    if !(r > 0.0) {
        return Err(Error::inference("samples do not decay"));
    }
    Ok(GsFit { s_hat: 1.0 / q, r_hat: r, quality: r_squared(&y, sse) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{Grid, TruncationBox};
    use num_complex::Complex64;

    fn synth(n: usize, f: impl Fn(usize) -> f64) -> CoeffTensor {
        CoeffTensor::from_fn(TruncationBox::cube(n, 1).unwrap(), |a| Complex64::new(f(a[0]), 0.0))
    }

    #[test]
    fn recovers_exponential_decay() {
        let fit = coeff_decay_fit(&synth(256, |k| (-2.0 * k as f64).exp())).unwrap();
        assert_eq!(fit.model, DecayModel::Real { p: fit.p().unwrap() });
        assert!((fit.p().unwrap() - 1.0).abs() < 0.05);
        assert!((fit.r_hat.unwrap() - 2.0).abs() < 0.1);
        assert!(matches!(fit.s_hat.index, SpaceIndex::Real(s) if (s - 0.5).abs() < 0.03));
    }

    #[test]
    fn recovers_slow_decay() {
        let fit = coeff_decay_fit(&synth(256, |k| (-(k as f64).powf(0.25)).exp())).unwrap();
        assert!((fit.p().unwrap() - 0.25).abs() < 0.025);
    }

    #[test]
    fn factorial_model_wins_for_flat_data() {
        let fit = coeff_decay_fit(&synth(256, |k| {
            (-(k as f64) * 4f64.ln() - 0.5 * ln_factorial(k)).exp()
        }))
        .unwrap();
        match fit.model {
            DecayModel::Factorial { beta } => assert!((beta - 0.5).abs() < 0.01),
            other => panic!("expected factorial model, got {other:?}"),
        }
        assert!((fit.r_hat.unwrap() - 4.0).abs() < 0.05);
    }

    #[test]
    fn finite_expansion_is_zero_class() {
        let fit = coeff_decay_fit(&synth(64, |k| if k <= 3 { 1.0 / (k + 1) as f64 } else { 0.0 })).unwrap();
        assert_eq!(fit.s_hat, SpaceParam::beurling(SpaceIndex::Zero));
        assert!(fit.note.unwrap().contains("superfast"));
    }

    #[test]
    fn degenerate_inputs_are_inference_errors() {
        assert!(matches!(coeff_decay_fit(&synth(64, |_| 0.0)), Err(Error::Inference(_))));
        assert!(matches!(coeff_decay_fit(&synth(8, |k| 0.5f64.powi(k as i32))), Err(Error::Inference(_))));
    }

    #[test]
    fn growth_classes_of_model_profiles() {
        let rho: Vec<f64> = (1..=120).map(|i| 0.25 * i as f64).collect();
        let cls = |g: Vec<f64>, kappa| growth_class(&rho, &g, kappa).unwrap();
        let quad = cls(rho.iter().map(|p| 0.05 * p * p + 0.3 * p.ln()).collect(), 0.5);
        assert_eq!(quad.class, SpaceIndex::Real(0.5));
        assert!((quad.rate - 0.05).abs() < 1e-6);
        let lin = cls(rho.iter().map(|p| 0.35 * p).collect(), 0.5);
        assert!(matches!(lin.class, SpaceIndex::Flat(s) if (s - 1.0).abs() < 0.1), "{lin:?}");
        let gs = cls(rho.iter().map(|p| 0.5 * p * p - 0.7 * p).collect(), 0.5);
        assert!(matches!(gs.class, SpaceIndex::Real(s) if (s - 1.0).abs() < 0.1), "{gs:?}");
        let poly = cls(rho.iter().map(|p| 3.0 * (1.0 + p * p).ln()).collect(), 0.5);
        assert_eq!(poly.class, SpaceIndex::Zero);
        let flat = cls(vec![-0.3; rho.len()], 0.5);
        assert_eq!(flat.class, SpaceIndex::Zero);
    }

    #[test]
    fn pointwise_fit_examples() {
        let g = Grid::uniform_cube(10.0, 401, 1).unwrap();
        let f = GridFunction::sample(g.clone(), |x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0));
        let fit = gs_pointwise_fit(&f).unwrap();
        assert!((fit.s_hat - 0.5).abs() < 0.025 && (fit.r_hat - 0.5).abs() < 0.025);
        let f = GridFunction::sample(g, |x| Complex64::new((-x[0].abs()).exp(), 0.0));
        assert!((gs_pointwise_fit(&f).unwrap().s_hat - 1.0).abs() < 0.05);
    }
}
