//! Phase-space profile of `|V_φf| e^{|·|²/4}` along rays.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::profile::{Binner, PhaseSample, Profile};
use crate::error::Result;
use crate::hermite::CoeffTensor;
use crate::transforms::{ln_weighted_stft, PhasePoint};

const DIRECTION_SEED: u64 = 0x5eed_57f7;

/// Unit directions in ℝ^{2d}, laid out as `(x₁..x_d, ξ₁..ξ_d)`.
fn directions(d: usize) -> Vec<Vec<f64>> {
    if d == 1 {
        return (0..128)
            .map(|j| {
                let th = std::f64::consts::TAU * j as f64 / 128.0;
                vec![th.cos(), th.sin()]
            })
            .collect();
    }
    let n = 2 * d;
    let mut out: Vec<Vec<f64>> = (0..n)
        .flat_map(|i| {
            [1.0, -1.0].map(|s| {
                let mut v = vec![0.0; n];
                v[i] = s;
                v
            })
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(DIRECTION_SEED);
    while out.len() < 256 {
        // Rejection from the cube keeps the accepted directions uniform on the sphere.
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            out.push(v.iter().map(|a| a / norm).collect());
        }
    }
    out
}

/// Radial maxima of `ln(|V_φf| e^{ρ²/4})`, every sample kept for non-radial weights.
pub(crate) fn stft_profile(c: &CoeffTensor) -> Result<Profile> {
    let finite_expansion = c.max_nonzero_order().is_some_and(|k| k < c.truncation().complete_order());
    let c = c.trimmed();
    let d = c.dim();
    let k = c.max_nonzero_order().unwrap_or(0);
    let cut = 3 * k / 4;
    let tail = c.map_indexed(|a, v| if a.iter().sum::<usize>() > cut { v } else { Complex64::new(0.0, 0.0) });
    let extent = (3.125 * ((2 * k + d) as f64).sqrt()).max(8.0);
    let bins = if d == 1 { 400 } else { 160 };
    let dirs = directions(d);
    let rows: Vec<(Binner, Vec<PhaseSample>)> = (0..=bins)
        .into_par_iter()
        .map(|i| {
            let rho = extent * i as f64 / bins as f64;
            let mut b = Binner::new(extent, bins);
            let mut samples = Vec::with_capacity(dirs.len());
            for dir in &dirs {
                let v: Vec<f64> = dir.iter().map(|a| a * rho).collect();
                let p = PhasePoint { x: v[..d].to_vec(), xi: v[d..].to_vec() };
                let l = ln_weighted_stft(&c, &p);
                if !l.is_finite() {
                    continue;
                }
                b.push(rho, l, ln_weighted_stft(&tail, &p));
                let norm = |s: &[f64]| s.iter().map(|a| a * a).sum::<f64>().sqrt();
                samples.push(PhaseSample { nx: norm(&p.x), nxi: norm(&p.xi), ln_value: l });
                if rho == 0.0 {
                    break;
                }
            }
            (b, samples)
        })
        .collect();
    let mut acc = Binner::new(extent, bins);
    let mut samples = Vec::new();
    for (b, s) in rows {
        acc.merge(b);
        samples.extend(s);
    }
    Ok(acc.finish(0.25, finite_expansion, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::TruncationBox;

    #[test]
    fn gaussian_profile_is_flat() {
        let c = CoeffTensor::unit(TruncationBox::cube(4, 1).unwrap(), &[0]).unwrap();
        let p = stft_profile(&c).unwrap();
        let want = -0.5 * (2.0 * std::f64::consts::PI).ln();
        assert!(p.g.iter().all(|g| (g - want).abs() < 1e-12));
        assert_eq!(p.trusted_hi, 8.0);
    }

    #[test]
    fn directions_are_unit_and_deterministic() {
        let a = directions(2);
        assert_eq!(a.len(), 256);
        assert_eq!(a, directions(2));
        assert!(a.iter().all(|v| (v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12));
    }
}
