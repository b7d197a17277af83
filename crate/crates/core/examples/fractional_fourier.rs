//! Fractional Fourier transforms on coefficients: group law, parity and the t = 1 case
//! against direct quadrature.

use num_complex::Complex64;
use pilipovic::hermite::{synthesize, CoeffTensor, Grid, TruncationBox};
use pilipovic::transforms::{fourier_grid, frac_ft, harmonic_apply, FracOrder};

fn main() -> pilipovic::Result<()> {
    let bx = TruncationBox::cube(40, 1)?;
    let c = CoeffTensor::from_fn(bx, |a| Complex64::new((-0.5 * a[0] as f64).exp(), 0.1 * a[0] as f64));

    let (s, t) = (FracOrder::uniform(0.3, 1)?, FracOrder::uniform(1.45, 1)?);
    let lhs = frac_ft(&frac_ft(&c, &t)?, &s)?;
    let rhs = frac_ft(&c, &s.add(&t)?)?;
    let diff = lhs.coeffs().iter().zip(rhs.coeffs()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("F_s F_t - F_(s+t): {diff:.1e}");

    let parity = frac_ft(&c, &FracOrder::uniform(2.0, 1)?)?;
    let exact = parity.coeffs().iter().zip(c.coeffs()).enumerate().all(|(k, (p, v))| if k % 2 == 0 { p == v } else { *p == -v });
    println!("F_2 is parity exactly: {exact}");

    // H commutes with every F_t.
    let a = harmonic_apply(&frac_ft(&c, &t)?, 1)?;
    let b = frac_ft(&harmonic_apply(&c, 1)?, &t)?;
    let diff = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    println!("H F_t - F_t H: {diff:.1e}");

    // F_1 against a trapezoid Fourier integral of the sampled function.
    let x = Grid::uniform_cube(16.0, 801, 1)?;
    let xi = Grid::uniform_cube(8.0, 161, 1)?;
    let direct = fourier_grid(&synthesize(&c, &x)?, &xi)?;
    let spectral = synthesize(&frac_ft(&c, &FracOrder::uniform(1.0, 1)?)?, &xi)?;
    println!("F_1 vs quadrature, sup error: {:.1e}", spectral.sup_distance(&direct)?);
    Ok(())
}
