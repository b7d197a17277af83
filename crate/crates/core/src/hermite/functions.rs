//! Hermite functions `h_n(x) = π^{-1/4}(2ⁿn!)^{-1/2} Hₙ(x) e^{-x²/2}`.
//!
//! Everything is driven by the normalized three-term recurrence with the Gaussian
//! factor split off and a running binary exponent, so nothing overflows or underflows
//! before the final rescaling. Bare Hermite polynomials are never formed.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::numeric::ldexp;

/// `π^{-1/4} = h_0(0)`.
pub const H0_AT_ZERO: f64 = 0.751_125_544_464_942_5;

const RESCALE_LIMIT: f64 = 1e150;
const RESCALE_BITS: i32 = 498; // 2^498 ≈ 1.6e150

/// Values `p_k(x) = h_k(x)·e^{x²/2}` for `k = 0..=n`, stored as `mant[k]·2^exp[k]`.
#[derive(Debug, Clone)]
pub(crate) struct ScaledSeq {
    pub mant: Vec<f64>,
    pub exp: Vec<i32>,
}

impl ScaledSeq {
    pub fn eval(n: usize, x: f64) -> Self {
        let mut mant = Vec::with_capacity(n + 1);
        let mut exp = Vec::with_capacity(n + 1);
        let p0 = H0_AT_ZERO;
        mant.push(p0);
        exp.push(0);
        if n == 0 {
            return ScaledSeq { mant, exp };
        }
        let mut prev = p0;
        let mut cur = std::f64::consts::SQRT_2 * x * p0;
        let mut e = 0i32;
        mant.push(cur);
        exp.push(e);
        for k in 1..n {
            let kf = k as f64;
            let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE_LIMIT {
                cur = ldexp(cur, -RESCALE_BITS);
                prev = ldexp(prev, -RESCALE_BITS);
                e += RESCALE_BITS;
            }
            mant.push(cur);
            exp.push(e);
        }
        ScaledSeq { mant, exp }
    }

    /// `h_k(x)` with the Gaussian factor restored.
    pub fn hermite(&self, k: usize, x: f64) -> f64 {
        restore(self.mant[k], self.exp[k], x)
    }

    /// The whole sequence re-expressed against the largest exponent: `p_k = out[k]·2^e`.
    pub fn common_exponent(&self) -> (Vec<f64>, i32) {
        let e = *self.exp.iter().max().unwrap_or(&0);
        let out = self
            .mant
            .iter()
            .zip(&self.exp)
            .map(|(&m, &ek)| if ek == e { m } else { ldexp(m, ek - e) })
            .collect();
        (out, e)
    }
}

fn restore(m: f64, e: i32, x: f64) -> f64 {
    let half_sq = 0.5 * x * x;
    if m == 0.0 {
        return 0.0;
    }
    if e == 0 && half_sq < 600.0 {
        return m * (-half_sq).exp();
    }
    let ln = m.abs().ln() + e as f64 * LN_2 - half_sq;
    m.signum() * ln.exp()
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("Hermite evaluation at non-finite x = {x}")))
    }
}

/// `h_n(x)` for a single degree.
pub fn hermite_eval(n: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    let s = ScaledSeq::eval(n, x);
    Ok(s.hermite(n, x))
}

/// `h_0(x), …, h_n(x)`.
pub fn hermite_functions(n: usize, x: f64) -> Result<Vec<f64>> {
    check_x(x)?;
    let s = ScaledSeq::eval(n, x);
    Ok((0..=n).map(|k| s.hermite(k, x)).collect())
}

/// Tensor-product Hermite function `h_α(x) = ∏ h_{αⱼ}(xⱼ)`.
pub fn hermite_eval_multi(alpha: &[usize], x: &[f64]) -> Result<f64> {
    if alpha.len() != x.len() || alpha.is_empty() {
        return Err(Error::domain(format!(
            "multi-index of dimension {} evaluated at a point of dimension {}",
            alpha.len(),
            x.len()
        )));
    }
    alpha
        .iter()
        .zip(x)
        .try_fold(1.0, |acc, (&a, &xj)| Ok(acc * hermite_eval(a, xj)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn h0_at_zero() {
        assert!((hermite_eval(0, 0.0).unwrap() - 0.751_125_544_464_942_5).abs() < 1e-16);
        assert!((H0_AT_ZERO - PI.powf(-0.25)).abs() < 1e-16);
    }

    #[test]
    fn odd_functions_vanish_at_origin() {
        for n in [1usize, 3, 7, 101] {
            assert_eq!(hermite_eval(n, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn multi_examples() {
        let v = hermite_eval_multi(&[0, 0], &[0.0, 0.0]).unwrap();
        assert!((v - PI.powf(-0.5)).abs() < 1e-15);
        assert_eq!(hermite_eval_multi(&[1, 0], &[0.0, 2.0]).unwrap(), 0.0);
        assert!(hermite_eval_multi(&[1, 0], &[0.0]).is_err());
    }

    #[test]
    fn non_finite_argument_is_a_domain_error() {
        assert!(matches!(hermite_eval(3, f64::NAN), Err(Error::Domain(_))));
        assert!(hermite_eval(3, f64::INFINITY).is_err());
    }

    #[test]
    fn large_degree_and_argument_stay_finite() {
        for &x in &[-40.0, -12.5, 0.3, 25.0, 40.0] {
            let v = hermite_functions(4096, x).unwrap();
            assert!(v.iter().all(|h| h.is_finite()), "x = {x}");
        }
        // Beyond the turning point the function is exponentially small but nonzero.
        let far = hermite_eval(4, 30.0).unwrap();
        assert!(far > 0.0 && far < 1e-180);
    }

    #[test]
    fn common_exponent_reproduces_values() {
        let x = 20.0;
        let s = ScaledSeq::eval(600, x);
        let (m, e) = s.common_exponent();
        for k in [10usize, 300, 600] {
            let direct = s.mant[k].abs().ln() + s.exp[k] as f64 * LN_2;
            let via = m[k].abs().ln() + e as f64 * LN_2;
            assert!((direct - via).abs() < 1e-12);
        }
    }
}
