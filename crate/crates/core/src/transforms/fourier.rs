//! Direct quadrature of `(2π)^{-d/2} ∫ f(x) e^{-i⟨x,ξ⟩} dx`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::{contract_axis, Grid, GridFunction, GridKind};
use crate::numeric::SumMode;

/// Relative size of boundary samples above which a grid is treated as truncating `f`.
pub const BOUNDARY_DECAY: f64 = 1e-10;

pub(crate) fn check_boundary_decay(f: &GridFunction) -> Result<()> {
    let peak = f.max_abs();
    let edge = (0..f.values().len())
        .filter(|&i| f.grid().on_boundary(i))
        .map(|i| f.values()[i].norm())
        .fold(0.0, f64::max);
    if edge > BOUNDARY_DECAY * peak {
        return Err(Error::precondition(format!(
            "samples have not decayed at the grid boundary ({edge:.3e} vs peak {peak:.3e})"
        )));
    }
    Ok(())
}

/// Fourier transform of sampled data, evaluated on `xi_grid`.
///
/// Uniform grids are summed with trapezoid weights and must resolve every requested
/// frequency (`|ξ| < π/Δ`).
pub fn fourier_grid(f: &GridFunction, xi_grid: &Grid) -> Result<GridFunction> {
    let grid = f.grid();
    if grid.dim() != xi_grid.dim() {
        return Err(Error::domain("sample and frequency grids differ in dimension"));
    }
    check_boundary_decay(f)?;
    if grid.kind() == GridKind::Uniform {
        for j in 0..grid.dim() {
            let axis = grid.axis(j);
            let step = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
            let xi_max = xi_grid.axis(j).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if xi_max >= std::f64::consts::PI / step {
                return Err(Error::precondition(format!(
                    "axis {j}: frequency {xi_max} beyond the grid's Nyquist limit {}",
                    std::f64::consts::PI / step
                )));
            }
        }
    }
    let norm = (2.0 * std::f64::consts::PI).powf(-0.5);
    let mut data = f.values().to_vec();
    let mut shape = grid.shape();
    for j in 0..grid.dim() {
        let xs = grid.axis(j);
        let ws = &grid.weights()[j];
        let mat: Vec<Vec<Complex64>> = xi_grid
            .axis(j)
            .iter()
            .map(|&xi| {
                xs.iter()
                    .zip(ws)
                    .map(|(&x, &w)| Complex64::from_polar(norm * w, -x * xi))
                    .collect()
            })
            .collect();
        (data, shape) = contract_axis(&data, &shape, j, &mat, SumMode::Sequential);
    }
    GridFunction::new(xi_grid.clone(), data)
}
