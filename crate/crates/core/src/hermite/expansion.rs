//! Sampled functions and the passage between samples and Hermite coefficients.
//!
//! Both directions are separable: a `d`-dimensional transform is `d` successive
//! one-axis contractions of a row-major tensor.

use num_complex::Complex64;
use rayon::prelude::*;

use super::functions::{hermite_functions, ScaledSeq};
use super::quadrature::{gauss_hermite_rule, Grid};
use super::tensor::{CoeffTensor, TruncationBox};
use crate::error::{Error, Result};
use crate::numeric::SumMode;

/// Extra quadrature nodes per axis used when analyzing a callable.
pub const ANALYZE_MARGIN: usize = 32;

/// Complex samples of a function on a tensor-product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(GridFunction { grid, values })
    }

    /// Samples `f` at every grid point.
    pub fn sample(grid: Grid, f: impl Fn(&[f64]) -> Complex64 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f(&grid.point(i)))
            .collect();
        GridFunction { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest pointwise modulus difference. Grids must match.
    pub fn sup_distance(&self, other: &GridFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::domain("grid functions live on different grids"));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `∫|f|²` by the grid's quadrature weights.
    pub fn l2_norm_sq(&self, mode: SumMode) -> f64 {
        let terms: Vec<f64> = (0..self.values.len())
            .map(|i| self.grid.weight(i) * self.values[i].norm_sqr())
            .collect();
        mode.sum(&terms)
    }
}

/// Contracts axis `axis` of a row-major tensor of `shape` with `mat` (`out × in`).
pub(crate) fn contract_axis<M>(
    data: &[Complex64],
    shape: &[usize],
    axis: usize,
    mat: &[Vec<M>],
    mode: SumMode,
) -> (Vec<Complex64>, Vec<usize>)
where
    M: Copy + Send + Sync,
    Complex64: std::ops::Mul<M, Output = Complex64>,
{
    let n_in = shape[axis];
    let n_out = mat.len();
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut new_shape = shape.to_vec();
    new_shape[axis] = n_out;
    let total = outer * n_out * inner;
    let out = (0..total)
        .into_par_iter()
        .map(|flat| {
            let i_inner = flat % inner;
            let k = (flat / inner) % n_out;
            let i_outer = flat / (inner * n_out);
            let base = i_outer * n_in * inner + i_inner;
            let row = &mat[k];
            let term = |j: usize| data[base + j * inner] * row[j];
            match mode {
                SumMode::Sequential => (0..n_in).fold(Complex64::new(0.0, 0.0), |acc, j| acc + term(j)),
                SumMode::Pairwise => {
                    let terms: Vec<Complex64> = (0..n_in).map(term).collect();
                    let re: Vec<f64> = terms.iter().map(|t| t.re).collect();
                    let im: Vec<f64> = terms.iter().map(|t| t.im).collect();
                    Complex64::new(mode.sum(&re), mode.sum(&im))
                }
            }
        })
        .collect();
    (out, new_shape)
}

/// Table `h_k(x_i)` with rows `k = 0..=n`.
fn basis_table(n: usize, nodes: &[f64]) -> Vec<Vec<f64>> {
    let cols: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&x| hermite_functions(n, x).expect("grid nodes are finite"))
        .collect();
    (0..=n).map(|k| cols.iter().map(|c| c[k]).collect()).collect()
}

/// Hermite coefficients `⟨f, h_α⟩` of sampled data, by the grid's quadrature.
pub fn analyze(f: &GridFunction, bx: &TruncationBox) -> Result<CoeffTensor> {
    analyze_with(f, bx, SumMode::default())
}

pub fn analyze_with(f: &GridFunction, bx: &TruncationBox, mode: SumMode) -> Result<CoeffTensor> {
    let grid = f.grid();
    if grid.dim() != bx.dim() {
        return Err(Error::domain("grid and truncation box dimensions differ"));
    }
    for (j, &n) in bx.max_degree().iter().enumerate() {
        if grid.axis(j).len() < n + 1 {
            return Err(Error::precondition(format!(
                "axis {j} has {} nodes, degree {n} needs at least {}",
                grid.axis(j).len(),
                n + 1
            )));
        }
    }
    if f.values().iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::domain("non-finite samples"));
    }
    let mut data = f.values().to_vec();
    let mut shape = grid.shape();
    for (j, &n) in bx.max_degree().iter().enumerate() {
        let w = &grid.weights()[j];
        let mat: Vec<Vec<f64>> = basis_table(n, grid.axis(j))
            .into_iter()
            .map(|row| row.iter().zip(w).map(|(h, w)| h * w).collect())
            .collect();
        (data, shape) = contract_axis(&data, &shape, j, &mat, mode);
    }
    CoeffTensor::new(bx.clone(), data)
}

/// Coefficients of a callable, using `Nⱼ + 32` Gauss–Hermite nodes per axis.
pub fn analyze_fn(
    bx: &TruncationBox,
    f: impl Fn(&[f64]) -> Complex64 + Sync,
) -> Result<CoeffTensor> {
    let rules: Vec<_> = bx
        .max_degree()
        .iter()
        .map(|&n| gauss_hermite_rule(n + 1 + ANALYZE_MARGIN))
        .collect();
    let grid = Grid::gauss_hermite(
        rules.iter().map(|r| r.nodes.clone()).collect(),
        rules.iter().map(|r| r.weights.clone()).collect(),
    )?;
    analyze(&GridFunction::sample(grid, f), bx)
}

/// `Σ c(α) h_α(x)` at every grid point.
pub fn synthesize(c: &CoeffTensor, grid: &Grid) -> Result<GridFunction> {
    synthesize_with(c, grid, SumMode::default())
}

pub fn synthesize_with(c: &CoeffTensor, grid: &Grid, mode: SumMode) -> Result<GridFunction> {
    if grid.dim() != c.dim() {
        return Err(Error::domain("grid and coefficient dimensions differ"));
    }
    c.check_finite()?;
    let mut data = c.coeffs().to_vec();
    let mut shape = c.truncation().shape();
    for (j, &n) in c.truncation().max_degree().iter().enumerate() {
        let table = basis_table(n, grid.axis(j));
        let mat: Vec<Vec<f64>> = (0..grid.axis(j).len())
            .map(|i| table.iter().map(|row| row[i]).collect())
            .collect();
        (data, shape) = contract_axis(&data, &shape, j, &mat, mode);
    }
    GridFunction::new(grid.clone(), data)
}

/// `ln(|Σ c(α)h_α(x)|·e^{|x|²/2})` at every grid point, without underflow far
/// outside the oscillatory region. Exact zeros map to `-inf`.
pub(crate) fn ln_scaled_profile(c: &CoeffTensor, axes: &[Vec<f64>]) -> Vec<f64> {
    let bx = c.truncation();
    let mut data = c.coeffs().to_vec();
    let mut shape = bx.shape();
    let mut exps: Vec<Vec<f64>> = Vec::with_capacity(axes.len());
    for (j, &n) in bx.max_degree().iter().enumerate() {
        let mut mat = Vec::with_capacity(axes[j].len());
        let mut ex = Vec::with_capacity(axes[j].len());
        for &x in &axes[j] {
            let (mut m, e) = ScaledSeq::eval(n, x).common_exponent();
            let peak = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let shift = if peak > 0.0 { peak.log2().floor() as i32 } else { 0 };
            for v in m.iter_mut() {
                *v = crate::numeric::ldexp(*v, -shift);
            }
            mat.push(m);
            ex.push((e + shift) as f64 * std::f64::consts::LN_2);
        }
        exps.push(ex);
        (data, shape) = contract_axis(&data, &shape, j, &mat, SumMode::Sequential);
    }
    data.iter()
        .enumerate()
        .map(|(i, v)| {
            let idx = unravel(i, &shape);
            let e: f64 = idx.iter().enumerate().map(|(j, &k)| exps[j][k]).sum();
            v.norm().ln() + e
        })
        .collect()
}

/// Per-axis indices of flat position `i` in a row-major tensor of `shape`.
pub(crate) fn unravel(mut i: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for j in (0..shape.len()).rev() {
        idx[j] = i % shape[j];
        i /= shape[j];
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{gauss_hermite_grid, hermite_eval};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn analyze_recovers_basis_element() {
        let bx = TruncationBox::cube(8, 1).unwrap();
        let out = analyze_fn(&bx, |x| c(hermite_eval(3, x[0]).unwrap())).unwrap();
        for k in 0..=8 {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((out.get(&[k]).unwrap() - c(want)).norm() < 1e-12);
        }
    }

    #[test]
    fn analyze_2d_basis_element() {
        let bx = TruncationBox::cube(6, 2).unwrap();
        let out = analyze_fn(&bx, |x| {
            c(hermite_eval(2, x[0]).unwrap() * hermite_eval(5, x[1]).unwrap())
        })
        .unwrap();
        for alpha in bx.iter() {
            let want = if alpha == [2, 5] { 1.0 } else { 0.0 };
            assert!((out.get(&alpha).unwrap() - c(want)).norm() < 1e-12, "{alpha:?}");
        }
    }

    #[test]
    fn under_resolved_grid_is_rejected() {
        let grid = gauss_hermite_grid(4, 1).unwrap();
        let f = GridFunction::sample(grid, |_| c(1.0));
        let bx = TruncationBox::cube(8, 1).unwrap();
        assert!(matches!(analyze(&f, &bx), Err(Error::Precondition(_))));
    }

    #[test]
    fn round_trip_and_sum_modes_agree() {
        let bx = TruncationBox::cube(20, 2).unwrap();
        let coeffs = CoeffTensor::from_fn(bx.clone(), |a| {
            Complex64::new((-(a[0] as f64)).exp(), 0.1 * a[1] as f64)
        });
        let grid = gauss_hermite_grid(40, 2).unwrap();
        let f = synthesize(&coeffs, &grid).unwrap();
        let back = analyze_with(&f, &bx, SumMode::Pairwise).unwrap();
        for (a, b) in coeffs.coeffs().iter().zip(back.coeffs()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn scaled_profile_matches_direct_inside() {
        let bx = TruncationBox::cube(10, 1).unwrap();
        let coeffs = CoeffTensor::from_fn(bx, |a| c(0.5f64.powi(a[0] as i32)));
        let xs = vec![vec![-3.0, 0.5, 2.0]];
        let prof = ln_scaled_profile(&coeffs, &xs);
        let g = Grid::gauss_hermite(xs.clone(), vec![vec![1.0; 3]]).unwrap();
        let direct = synthesize(&coeffs, &g).unwrap();
        for (i, &x) in xs[0].iter().enumerate() {
            let want = direct.values()[i].norm().ln() + 0.5 * x * x;
            assert!((prof[i] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn scaled_profile_survives_far_region() {
        let bx = TruncationBox::cube(4, 1).unwrap();
        let coeffs = CoeffTensor::unit(bx, &[0]).unwrap();
        let prof = ln_scaled_profile(&coeffs, &[vec![60.0]]);
        assert!((prof[0] - crate::hermite::H0_AT_ZERO.ln()).abs() < 1e-12);
    }
}
