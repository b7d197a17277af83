//! Recovering decay exponents and rates from Hermite coefficients.

use num_complex::Complex64;
use pilipovic::hermite::{CoeffTensor, TruncationBox};
use pilipovic::ln_factorial;
use pilipovic::spaces::coeff_decay_fit;

fn main() -> pilipovic::Result<()> {
    let bx = TruncationBox::cube(256, 1)?;
    for (s0, r0) in [(0.25, 1.0), (0.5, 2.0), (1.0, 1.0)] {
        let c = CoeffTensor::from_fn(bx.clone(), |a| Complex64::new((-r0 * (a[0] as f64).powf(1.0 / (2.0 * s0))).exp(), 0.0));
        let fit = coeff_decay_fit(&c)?;
        println!(
            "s0={s0} r0={r0}: p_hat={:.4} (want {:.4}), r_hat={:.4}, label {}, R^2={:.6}",
            fit.p().unwrap_or(f64::NAN),
            1.0 / (2.0 * s0),
            fit.r_hat.unwrap_or(f64::NAN),
            fit.s_hat,
            fit.quality
        );
    }
    // 4^{-k} / sqrt(k!) lies in the flat-1 space.
    let c = CoeffTensor::from_fn(bx.clone(), |a| Complex64::new((-(a[0] as f64) * 4f64.ln() - 0.5 * ln_factorial(a[0])).exp(), 0.0));
    let fit = coeff_decay_fit(&c)?;
    println!("4^-k/sqrt(k!): model {:?}, label {}, r_hat {:?}", fit.model, fit.s_hat, fit.r_hat);

    let h3 = CoeffTensor::unit(TruncationBox::cube(64, 1)?, &[3])?;
    let fit = coeff_decay_fit(&h3)?;
    println!("h_3: label {} ({})", fit.s_hat, fit.note.unwrap_or_default());
    Ok(())
}
