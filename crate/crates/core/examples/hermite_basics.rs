//! Hermite functions, quadrature and the analyze/synthesize round trip.

use num_complex::Complex64;
use pilipovic::hermite::{analyze_fn, hermite_functions, synthesize, CoeffTensor, Grid, TruncationBox};

fn main() -> pilipovic::Result<()> {
    // h_0..h_5 at a few points; large orders stay finite thanks to the scaled recurrence.
    for x in [0.0, 1.0, 3.0] {
        println!("h_k({x}) = {:?}", hermite_functions(5, x)?);
    }
    println!("h_1000(30) = {:e}", pilipovic::hermite::hermite_eval(1000, 30.0)?);

    // Coefficients of e^{-x²/2}(1 + x) and back.
    let bx = TruncationBox::cube(24, 1)?;
    let c = analyze_fn(&bx, |x| Complex64::new((-x[0] * x[0] / 2.0).exp() * (1.0 + x[0]), 0.0))?;
    for (k, v) in c.coeffs().iter().enumerate().take(4) {
        println!("c({k}) = {:.6}", v.re);
    }
    let grid = Grid::uniform_cube(6.0, 121, 1)?;
    let f = synthesize(&c, &grid)?;
    let exact: Vec<f64> = grid.axis(0).iter().map(|x| (-x * x / 2.0).exp() * (1.0 + x)).collect();
    let err = f.values().iter().zip(&exact).map(|(a, b)| (a.re - b).abs()).fold(0.0, f64::max);
    println!("round-trip sup error on [-6, 6]: {err:.2e}");

    // A tensor-product basis function in two variables.
    let h21 = CoeffTensor::unit(TruncationBox::cube(4, 2)?, &[2, 1])?;
    println!("h_(2,1) has {} coefficients, order {:?}", h21.coeffs().len(), h21.max_nonzero_order());
    Ok(())
}
