//! Gaussian-window short-time Fourier transform, Bargmann transform, and the phase-space
//! rotations that intertwine them with fractional Fourier transforms.
//!
//! Window: `φ(x) = π^{-d/4} e^{-|x|²/2}`. STFT: `V_φf(x,ξ) = (2π)^{-d/2} ∫ f(y) φ(y−x)
//! e^{-i⟨y,ξ⟩} dy`. Bargmann: `𝔙f(z) = Σ c(α) z^α / √α!`.

use std::f64::consts::{LN_2, PI};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fourier::check_boundary_decay;
use super::fractional::{frac_ft, quarter_turn, FracOrder};
use crate::error::{Error, Result};
use crate::hermite::{contract_axis, gauss_hermite_rule, CoeffTensor, GridFunction, ScaledSeq};
use crate::numeric::{ln_factorial, SumMode};

/// Time–frequency point `(x, ξ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if x.len() != xi.len() || x.is_empty() {
            return Err(Error::domain("phase point needs x and ξ of equal, positive dimension"));
        }
        if x.iter().chain(&xi).any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite phase point"));
        }
        Ok(PhasePoint { x, xi })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `z = x + iξ`.
    pub fn to_complex(&self) -> BargmannPoint {
        BargmannPoint(self.x.iter().zip(&self.xi).map(|(&a, &b)| Complex64::new(a, b)).collect())
    }

    pub fn norm_sq(&self) -> f64 {
        self.x.iter().chain(&self.xi).map(|v| v * v).sum()
    }
}

/// Point `z ∈ ℂᵈ` at which a Bargmann transform is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BargmannPoint(pub Vec<Complex64>);

impl BargmannPoint {
    pub fn new(z: Vec<Complex64>) -> Result<Self> {
        if z.is_empty() || z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::domain("Bargmann point must be finite and non-empty"));
        }
        Ok(BargmannPoint(z))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// A truncated Bargmann series value with an estimate of the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BargmannValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

fn check_dims(c: &CoeffTensor, d: usize) -> Result<()> {
    if c.dim() != d {
        return Err(Error::domain(format!(
            "point of dimension {d} for coefficients of dimension {}",
            c.dim()
        )));
    }
    Ok(())
}

/// `V_φf(p)` for a coefficient tensor, by Gauss–Hermite quadrature with the window
/// folded into the weight.
pub fn stft_gaussian(c: &CoeffTensor, p: &PhasePoint) -> Result<Complex64> {
    check_dims(c, p.dim())?;
    c.check_finite()?;
    let mut data = c.coeffs().to_vec();
    let mut shape = c.truncation().shape();
    for (j, &n) in c.truncation().max_degree().iter().enumerate() {
        let (x, xi) = (p.x[j], p.xi[j]);
        let nodes = n + 33 + (xi * xi).ceil() as usize;
        let rule = gauss_hermite_rule(nodes);
        // ∫ p_k(u + x/2) e^{-u²} e^{-i(u + x/2)ξ} du
        let mut row = vec![Complex64::new(0.0, 0.0); n + 1];
        for (&u, &lw) in rule.nodes.iter().zip(&rule.ln_classical) {
            let y = u + 0.5 * x;
            let (m, e) = ScaledSeq::eval(n, y).common_exponent();
            let scale = (lw + e as f64 * LN_2).exp();
            if scale == 0.0 {
                continue;
            }
            let osc = Complex64::from_polar(scale, -y * xi);
            for (r, mk) in row.iter_mut().zip(&m) {
                *r += osc * *mk;
            }
        }
        (data, shape) = contract_axis(&data, &shape, j, &[row], SumMode::Sequential);
    }
    let d = p.dim() as f64;
    let pre = (2.0 * PI).powf(-d / 2.0) * PI.powf(-d / 4.0) * (-p.x.iter().map(|v| v * v).sum::<f64>() / 4.0).exp();
    Ok(data[0] * pre)
}

/// `V_φf(p)` for sampled data, by the grid's own quadrature.
pub fn stft_gaussian_grid(f: &GridFunction, p: &PhasePoint) -> Result<Complex64> {
    if f.dim() != p.dim() {
        return Err(Error::domain("phase point and samples differ in dimension"));
    }
    check_boundary_decay(f)?;
    let grid = f.grid();
    let mut data = f.values().to_vec();
    let mut shape = grid.shape();
    let win = PI.powf(-0.25) * (2.0 * PI).powf(-0.5);
    for j in 0..grid.dim() {
        let row: Vec<Complex64> = grid
            .axis(j)
            .iter()
            .zip(&grid.weights()[j])
            .map(|(&y, &w)| {
                let g = w * win * (-(y - p.x[j]).powi(2) / 2.0).exp();
                Complex64::from_polar(g, -y * p.xi[j])
            })
            .collect();
        (data, shape) = contract_axis(&data, &shape, j, &[row], SumMode::Sequential);
    }
    Ok(data[0])
}

/// Per-axis monomial rows `z^k/√k!`, each scaled by `e^{-shift}`.
fn monomial_rows(n: &[usize], z: &[Complex64]) -> (Vec<Vec<Complex64>>, f64) {
    let mut total_shift = 0.0;
    let rows = n
        .iter()
        .zip(z)
        .map(|(&n, &zj)| {
            if zj == Complex64::new(0.0, 0.0) {
                let mut row = vec![Complex64::new(0.0, 0.0); n + 1];
                row[0] = Complex64::new(1.0, 0.0);
                return row;
            }
            let (r, theta) = zj.to_polar();
            let lr = r.ln();
            let logs: Vec<f64> = (0..=n).map(|k| k as f64 * lr - 0.5 * ln_factorial(k)).collect();
            let shift = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            total_shift += shift;
            logs.iter()
                .enumerate()
                .map(|(k, &l)| Complex64::from_polar((l - shift).exp(), k as f64 * theta))
                .collect()
        })
        .collect();
    (rows, total_shift)
}

/// `𝔙f(z) = m · e^{s}`, returned as `(m, s)` so large arguments cannot overflow.
pub(crate) fn bargmann_scaled(c: &CoeffTensor, z: &[Complex64]) -> (Complex64, f64) {
    let (rows, shift) = monomial_rows(c.truncation().max_degree(), z);
    let mut data = c.coeffs().to_vec();
    let mut shape = c.truncation().shape();
    for (j, row) in rows.into_iter().enumerate() {
        (data, shape) = contract_axis(&data, &shape, j, &[row], SumMode::Sequential);
    }
    (data[0], shift)
}

/// Estimated `Σ_{|α|>K} |c(α)||z^α|/√α!` from the geometric trend of the last shells.
fn bargmann_tail(c: &CoeffTensor, z: &[Complex64]) -> f64 {
    let bx = c.truncation();
    let top = bx.complete_order();
    match c.max_nonzero_order() {
        None => return 0.0,
        Some(k) if k < top => return 0.0,
        _ => {}
    }
    let lz: Vec<f64> = z.iter().map(|v| v.norm().ln()).collect();
    let mut shells = vec![f64::NEG_INFINITY; top + 1];
    for (alpha, v) in bx.iter().zip(c.coeffs()) {
        let k: usize = alpha.iter().sum();
        if k > top || v.norm() == 0.0 {
            continue;
        }
        let l = v.norm().ln()
            + alpha
                .iter()
                .zip(&lz)
                .map(|(&a, &l)| if a == 0 { 0.0 } else { a as f64 * l - 0.5 * ln_factorial(a) })
                .sum::<f64>();
        let s = shells[k];
        shells[k] = if s == f64::NEG_INFINITY { l } else { s.max(l) + (-(s - l).abs()).exp().ln_1p() };
    }
    let m = (top / 2).clamp(1, 8);
    let pts: Vec<(f64, f64)> = (top + 1 - m..=top)
        .filter(|&k| shells[k].is_finite())
        .map(|k| (k as f64, shells[k]))
        .collect();
    if pts.len() < 2 {
        return if shells[top].is_finite() { f64::INFINITY } else { 0.0 };
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    if slope >= 0.0 {
        return f64::INFINITY;
    }
    let ratio = slope.exp();
    (shells[top] + ratio.ln() - (1.0 - ratio).ln()).exp()
}

/// Truncated Bargmann series at `z`, with a tail estimate.
pub fn bargmann(c: &CoeffTensor, z: &BargmannPoint) -> Result<BargmannValue> {
    check_dims(c, z.dim())?;
    c.check_finite()?;
    let (m, s) = bargmann_scaled(c, &z.0);
    Ok(BargmannValue { value: m * s.exp(), tail_bound: bargmann_tail(c, &z.0) })
}

/// `ln(|V_φf(x,ξ)| e^{(|x|²+|ξ|²)/4})`, through the Bargmann transform at `z̄/√2`.
pub(crate) fn ln_weighted_stft(c: &CoeffTensor, p: &PhasePoint) -> f64 {
    let w: Vec<Complex64> = p.to_complex().0.iter().map(|z| z.conj() / 2f64.sqrt()).collect();
    let (m, s) = bargmann_scaled(c, &w);
    -(p.dim() as f64) / 2.0 * (2.0 * PI).ln() + m.norm().ln() + s
}

/// `V_φf(x,ξ) = (2π)^{-d/2} e^{-|z|²/4} e^{-i⟨x,ξ⟩/2} 𝔙f(z̄/√2)` with `z = x + iξ`.
pub fn stft_via_bargmann(c: &CoeffTensor, p: &PhasePoint) -> Result<Complex64> {
    check_dims(c, p.dim())?;
    let w: Vec<Complex64> = p.to_complex().0.iter().map(|z| z.conj() / 2f64.sqrt()).collect();
    let (m, s) = bargmann_scaled(c, &w);
    let d = p.dim() as f64;
    let xxi: f64 = p.x.iter().zip(&p.xi).map(|(a, b)| a * b).sum();
    let ln_mod = s - p.norm_sq() / 4.0 - d / 2.0 * (2.0 * PI).ln();
    Ok(m * Complex64::from_polar(ln_mod.exp(), -xxi / 2.0))
}

fn check_order(p: &PhasePoint, t: &FracOrder) -> Result<()> {
    if p.dim() != t.dim() {
        return Err(Error::domain("phase point and order differ in dimension"));
    }
    Ok(())
}

/// `A_{d,t}`: per axis `(x, ξ) ↦ (cos(tπ/2)x + sin(tπ/2)ξ, −sin(tπ/2)x + cos(tπ/2)ξ)`.
pub fn rotate_phase_point(p: &PhasePoint, t: &FracOrder) -> Result<PhasePoint> {
    check_order(p, t)?;
    let (x, xi) = p
        .x
        .iter()
        .zip(&p.xi)
        .zip(t.values())
        .map(|((&x, &xi), &tj)| {
            let (c, s) = quarter_turn(tj);
            (c * x + s * xi, -s * x + c * xi)
        })
        .unzip();
    Ok(PhasePoint { x, xi })
}

/// `¼ Σ Φ_{tⱼ}(xⱼ, ξⱼ)` with `Φ_t(x,ξ) = sin(tπ)(ξ² − x²) + 2(cos(tπ) − 1)xξ`.
pub fn stft_phase(p: &PhasePoint, t: &FracOrder) -> Result<f64> {
    check_order(p, t)?;
    Ok(0.25
        * p.x
            .iter()
            .zip(&p.xi)
            .zip(t.values())
            .map(|((&x, &xi), &tj)| {
                let (c, s) = quarter_turn(2.0 * tj);
                s * (xi * xi - x * x) + 2.0 * (c - 1.0) * x * xi
            })
            .sum::<f64>())
}

/// `|V_φ(𝓕_t f)(p) − e^{i·phase} V_φf(A(p))|`.
///
/// With `𝓕_t` acting as `e^{-iπtα/2}` on coefficients, the identity holds with the
/// rotation and phase taken at `−t`; the residual is evaluated in that orientation.
pub fn stft_rotation_check(c: &CoeffTensor, t: &FracOrder, p: &PhasePoint) -> Result<f64> {
    let lhs = stft_gaussian(&frac_ft(c, t)?, p)?;
    let back = t.neg();
    let q = rotate_phase_point(p, &back)?;
    let rhs = Complex64::from_polar(1.0, stft_phase(p, &back)?) * stft_gaussian(c, &q)?;
    Ok((lhs - rhs).norm())
}

/// `V_φf` at many points, in parallel.
pub fn stft_batch(c: &CoeffTensor, points: &[PhasePoint]) -> Result<Vec<Complex64>> {
    points.par_iter().map(|p| stft_gaussian(c, p)).collect()
}

/// `𝔙f` at many points, in parallel.
pub fn bargmann_batch(c: &CoeffTensor, points: &[BargmannPoint]) -> Result<Vec<BargmannValue>> {
    points.par_iter().map(|z| bargmann(c, z)).collect()
}

/// Rows `x…, ξ…, re, im`.
pub fn write_stft_csv(points: &[PhasePoint], values: &[Complex64], out: impl Write) -> Result<()> {
    let d = points.first().map_or(0, PhasePoint::dim);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
    header.extend((1..=d).map(|j| format!("xi{j}")));
    header.extend(["re".into(), "im".into()]);
    w.write_record(&header)?;
    for (p, v) in points.iter().zip(values) {
        let rec: Vec<String> = p.x.iter().chain(&p.xi).chain([&v.re, &v.im]).map(f64::to_string).collect();
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Rows `re z…, im z…, re, im`.
pub fn write_bargmann_csv(points: &[BargmannPoint], values: &[BargmannValue], out: impl Write) -> Result<()> {
    let d = points.first().map_or(0, BargmannPoint::dim);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=d).map(|j| format!("re_z{j}")).collect();
    header.extend((1..=d).map(|j| format!("im_z{j}")));
    header.extend(["re".into(), "im".into()]);
    w.write_record(&header)?;
    for (z, v) in points.iter().zip(values) {
        let rec: Vec<String> = z
            .0
            .iter()
            .map(|c| c.re)
            .chain(z.0.iter().map(|c| c.im))
            .chain([v.value.re, v.value.im])
            .map(|x| x.to_string())
            .collect();
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::TruncationBox;

    fn unit(n: usize, alpha: &[usize]) -> CoeffTensor {
        CoeffTensor::unit(TruncationBox::cube(n, alpha.len()).unwrap(), alpha).unwrap()
    }

    fn pp(x: f64, xi: f64) -> PhasePoint {
        PhasePoint::new(vec![x], vec![xi]).unwrap()
    }

    #[test]
    fn window_against_itself() {
        let v = stft_gaussian(&unit(4, &[0]), &pp(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new((2.0 * PI).powf(-0.5), 0.0)).norm() < 1e-14);
        let (x, xi) = (1.3, -0.7);
        let v = stft_gaussian(&unit(4, &[0]), &pp(x, xi)).unwrap();
        let want = Complex64::from_polar(
            (2.0 * PI).powf(-0.5) * (-(x * x + xi * xi) / 4.0).exp(),
            -x * xi / 2.0,
        );
        assert!((v - want).norm() < 1e-12);
        let v2 = stft_gaussian(&unit(4, &[0, 0]), &PhasePoint::new(vec![0.0; 2], vec![0.0; 2]).unwrap()).unwrap();
        assert!((v2.re - 1.0 / (2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn odd_function_at_origin() {
        assert!(stft_gaussian(&unit(4, &[1]), &pp(0.0, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn bargmann_examples() {
        let z = BargmannPoint::new(vec![Complex64::new(1.0, 0.0)]).unwrap();
        let v = bargmann(&unit(3, &[2]), &z).unwrap();
        assert!((v.value - Complex64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(v.tail_bound, 0.0);
        let z = BargmannPoint::new(vec![Complex64::new(-2.0, 5.0)]).unwrap();
        assert!((bargmann(&unit(3, &[0]), &z).unwrap().value - 1.0).norm() < 1e-15);
    }

    #[test]
    fn bargmann_matches_stft_quadrature() {
        let c = unit(6, &[3]);
        for &(x, xi) in &[(0.5, 0.25), (-1.2, 2.0), (3.0, -0.4)] {
            let a = stft_gaussian(&c, &pp(x, xi)).unwrap();
            let b = stft_via_bargmann(&c, &pp(x, xi)).unwrap();
            assert!((a - b).norm() < 1e-12, "({x}, {xi}): {a} vs {b}");
        }
    }

    #[test]
    fn tail_bound_tracks_decay() {
        let bx = TruncationBox::cube(40, 1).unwrap();
        let c = CoeffTensor::from_fn(bx, |a| Complex64::new((-(a[0] as f64)).exp(), 0.0));
        let z = BargmannPoint::new(vec![Complex64::new(1.0, 1.0)]).unwrap();
        let v = bargmann(&c, &z).unwrap();
        assert!(v.tail_bound > 0.0 && v.tail_bound < 1e-20);
    }

    #[test]
    fn rotation_examples() {
        let one = FracOrder::new(vec![1.0]).unwrap();
        assert_eq!(rotate_phase_point(&pp(1.0, 0.0), &one).unwrap(), pp(0.0, -1.0));
        let q = rotate_phase_point(&pp(1.0, 1.0), &FracOrder::new(vec![0.5]).unwrap()).unwrap();
        assert!((q.x[0] - 2f64.sqrt()).abs() < 1e-15 && q.xi[0].abs() < 1e-15);
        assert_eq!(stft_phase(&pp(1.0, 0.0), &one).unwrap(), 0.0);
        let ph = stft_phase(&pp(1.0, 1.0), &FracOrder::new(vec![0.5]).unwrap()).unwrap();
        assert!((ph + 0.5).abs() < 1e-15);
    }

    #[test]
    fn rotation_identity_holds() {
        let mut c = CoeffTensor::zeros(TruncationBox::cube(8, 1).unwrap());
        c.set(&[0], Complex64::new(1.0, 0.0)).unwrap();
        c.set(&[3], Complex64::new(0.3, 0.0)).unwrap();
        let r = stft_rotation_check(&c, &FracOrder::new(vec![0.7]).unwrap(), &pp(0.4, -1.1)).unwrap();
        assert!(r < 1e-12, "residual {r}");
        let r = stft_rotation_check(&unit(4, &[1]), &FracOrder::new(vec![1.0]).unwrap(), &pp(1.0, 0.0)).unwrap();
        assert!(r < 1e-12, "residual {r}");
    }

    #[test]
    fn csv_shapes() {
        let pts = vec![pp(0.0, 1.0), pp(1.0, 2.0)];
        let vals = stft_batch(&unit(3, &[0]), &pts).unwrap();
        let mut buf = Vec::new();
        write_stft_csv(&pts, &vals, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x1,xi1,re,im\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
