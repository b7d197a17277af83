//! Gaussian-window STFT by quadrature and through the Bargmann transform, and the
//! rotation identity for fractional Fourier transforms.

use num_complex::Complex64;
use pilipovic::hermite::{CoeffTensor, TruncationBox};
use pilipovic::transforms::{
    bargmann, frac_ft, rotate_phase_point, stft_gaussian, stft_rotation_check, stft_via_bargmann, BargmannPoint,
    FracOrder, PhasePoint,
};

fn main() -> pilipovic::Result<()> {
    let c = CoeffTensor::from_fn(TruncationBox::cube(30, 1)?, |a| Complex64::new((-(a[0] as f64)).exp(), 0.0));
    for (x, xi) in [(0.0, 0.0), (1.0, -2.0), (3.5, 0.5)] {
        let p = PhasePoint::new(vec![x], vec![xi])?;
        let q = stft_gaussian(&c, &p)?;
        let b = stft_via_bargmann(&c, &p)?;
        println!("V f({x}, {xi}) = {q:.6}   via Bargmann: {b:.6}   diff {:.1e}", (q - b).norm());
    }

    let z = BargmannPoint::new(vec![Complex64::new(2.0, 1.0)])?;
    let v = bargmann(&c, &z)?;
    println!("Bargmann at 2+i: {:.6} (tail bound {:.1e})", v.value, v.tail_bound);

    let t = FracOrder::uniform(0.7, 1)?;
    let p = PhasePoint::new(vec![1.2], vec![-0.4])?;
    println!("rotation identity residual: {:.1e}", stft_rotation_check(&c, &t, &p)?);
    let lhs = stft_gaussian(&frac_ft(&c, &t)?, &p)?.norm();
    let rhs = stft_gaussian(&c, &rotate_phase_point(&p, &t.neg())?)?.norm();
    println!("|V(F_t f)(p)| = {lhs:.12}, |V f(A p)| = {rhs:.12}");
    Ok(())
}
