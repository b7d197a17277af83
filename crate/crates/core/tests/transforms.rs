use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use pilipovic::hermite::{hermite_eval, synthesize, CoeffTensor, Grid, GridFunction, TruncationBox};
use pilipovic::transforms::*;
use pilipovic::SumMode;
use proptest::prelude::*;

fn max_diff(a: &CoeffTensor, b: &CoeffTensor) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn mixed() -> CoeffTensor {
    CoeffTensor::from_fn(TruncationBox::cube(3, 1).unwrap(), |a| Complex64::new([1.0, 0.0, 0.0, 0.3][a[0]], 0.0))
}

/// Multiples of 2⁻³⁰, so that sums and shifts by 4 are exact.
fn dyadic() -> impl Strategy<Value = f64> {
    (-(1i64 << 31)..(1i64 << 31)).prop_map(|k| k as f64 / (1u64 << 30) as f64)
}

fn tensor_and_orders() -> impl Strategy<Value = (CoeffTensor, FracOrder, FracOrder)> {
    (1usize..=2, 1usize..=64).prop_flat_map(|(d, n)| {
        let n = if d == 2 { n.min(24) } else { n };
        let len = (n + 1).pow(d as u32);
        (
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len),
            prop::collection::vec(dyadic(), d),
            prop::collection::vec(dyadic(), d),
        )
            .prop_map(move |(v, s, t)| {
                let c = CoeffTensor::new(
                    TruncationBox::cube(n, d).unwrap(),
                    v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
                )
                .unwrap();
                (c, FracOrder::new(s).unwrap(), FracOrder::new(t).unwrap())
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_law_periodicity_unitarity((c, s, t) in tensor_and_orders()) {
        let ft = frac_ft(&c, &t).unwrap();
        prop_assert!(max_diff(&frac_ft(&ft, &s).unwrap(), &frac_ft(&c, &s.add(&t).unwrap()).unwrap()) <= 1e-14);
        let t4 = FracOrder::new(t.values().iter().map(|v| v + 4.0).collect()).unwrap();
        prop_assert!(max_diff(&frac_ft(&c, &t4).unwrap(), &ft) <= 1e-14);
        let (a, b) = (c.l2_norm_with(SumMode::Pairwise), ft.l2_norm_with(SumMode::Pairwise));
        prop_assert!((a - b).abs() <= 1e-14 * a);
        let lhs = harmonic_apply(&ft, 2).unwrap();
        let rhs = frac_ft(&harmonic_apply(&c, 2).unwrap(), &t).unwrap();
        let scale = lhs.coeffs().iter().map(|v| v.norm()).fold(0.0, f64::max);
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-14 * scale);
    }

    #[test]
    fn rotation_preserves_phase_space_norm(x in -5.0f64..5.0, xi in -5.0f64..5.0, t in -4.0f64..4.0) {
        let p = PhasePoint::new(vec![x], vec![xi]).unwrap();
        let q = rotate_phase_point(&p, &FracOrder::uniform(t, 1).unwrap()).unwrap();
        prop_assert!((q.norm_sq() - p.norm_sq()).abs() <= 1e-12 * (1.0 + p.norm_sq()));
    }
}

#[test]
fn order_zero_is_identity_and_two_is_parity() {
    let c = mixed();
    assert_eq!(frac_ft(&c, &FracOrder::uniform(0.0, 1).unwrap()).unwrap(), c);
    let p = frac_ft(&c, &FracOrder::uniform(2.0, 1).unwrap()).unwrap();
    assert_eq!(p.coeffs()[3], -c.coeffs()[3]);
    assert_eq!(p.coeffs()[0], c.coeffs()[0]);
}

#[test]
fn fourier_of_h3_against_quadrature() {
    let c = CoeffTensor::unit(TruncationBox::cube(3, 1).unwrap(), &[3]).unwrap();
    let f1 = frac_ft(&c, &FracOrder::uniform(1.0, 1).unwrap()).unwrap();
    assert_eq!(f1.coeffs()[3], Complex64::new(0.0, 1.0));
    let x = Grid::uniform_cube(12.0, 481, 1).unwrap();
    let xi = Grid::uniform_cube(6.0, 121, 1).unwrap();
    let direct = fourier_grid(&synthesize(&c, &x).unwrap(), &xi).unwrap();
    let spectral = synthesize(&f1, &xi).unwrap();
    assert!(spectral.sup_distance(&direct).unwrap() <= 1e-8);
}

#[test]
fn fourier_grid_examples() {
    let x = Grid::uniform_cube(12.0, 481, 1).unwrap();
    let xi = Grid::uniform_cube(6.0, 121, 1).unwrap();
    let h1 = GridFunction::sample(x.clone(), |p| Complex64::new(hermite_eval(1, p[0]).unwrap(), 0.0));
    let got = fourier_grid(&h1, &xi).unwrap();
    for (v, &k) in got.values().iter().zip(xi.axis(0)) {
        assert!((v - Complex64::new(0.0, -hermite_eval(1, k).unwrap())).norm() <= 1e-8);
    }
    let shifted = GridFunction::sample(x, |p| Complex64::new((-(p[0] - 1.0).powi(2) / 2.0).exp(), 0.0));
    let got = fourier_grid(&shifted, &xi).unwrap();
    for (v, &k) in got.values().iter().zip(xi.axis(0)) {
        assert!((v.norm() - (-k * k / 2.0).exp()).abs() <= 1e-8);
    }
}

#[test]
fn harmonic_examples() {
    let c = CoeffTensor::unit(TruncationBox::cube(4, 1).unwrap(), &[3]).unwrap();
    assert_eq!(harmonic_apply(&c, 0).unwrap(), c);
    assert_eq!(harmonic_apply(&c, 1).unwrap().get(&[3]).unwrap(), Complex64::new(7.0, 0.0));
    let c = CoeffTensor::unit(TruncationBox::cube(3, 2).unwrap(), &[1, 2]).unwrap();
    assert_eq!(harmonic_apply(&c, 2).unwrap().get(&[1, 2]).unwrap(), Complex64::new(64.0, 0.0));
}

#[test]
fn stft_window_examples() {
    let phi = CoeffTensor::unit(TruncationBox::cube(2, 1).unwrap(), &[0]).unwrap();
    let at0 = stft_gaussian(&phi, &PhasePoint::new(vec![0.0], vec![0.0]).unwrap()).unwrap();
    assert!((at0 - Complex64::new((2.0 * PI).powf(-0.5), 0.0)).norm() < 1e-14);
    for (x, xi) in [(1.0, -2.0), (2.5, 0.7), (-3.0, 3.0)] {
        let p = PhasePoint::new(vec![x], vec![xi]).unwrap();
        let want = Complex64::from_polar((2.0 * PI).powf(-0.5) * (-(x * x + xi * xi) / 4.0).exp(), -x * xi / 2.0);
        assert!((stft_gaussian(&phi, &p).unwrap() - want).norm() <= 1e-8);
    }
    let h1 = CoeffTensor::unit(TruncationBox::cube(2, 1).unwrap(), &[1]).unwrap();
    assert!(stft_gaussian(&h1, &PhasePoint::new(vec![0.0], vec![0.0]).unwrap()).unwrap().norm() < 1e-15);
}

#[test]
fn bargmann_examples() {
    let phi = CoeffTensor::unit(TruncationBox::cube(2, 1).unwrap(), &[0]).unwrap();
    let z = BargmannPoint::new(vec![Complex64::new(1.7, -0.4)]).unwrap();
    assert!((bargmann(&phi, &z).unwrap().value - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    let h2 = CoeffTensor::unit(TruncationBox::cube(2, 1).unwrap(), &[2]).unwrap();
    let one = BargmannPoint::new(vec![Complex64::new(1.0, 0.0)]).unwrap();
    assert!((bargmann(&h2, &one).unwrap().value - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

    // z = 0.5 + 0.25i is the Bargmann point of (x, ξ) = √2(0.5, −0.25).
    let h3 = CoeffTensor::unit(TruncationBox::cube(3, 1).unwrap(), &[3]).unwrap();
    let z = Complex64::new(0.5, 0.25);
    let (x, xi) = (SQRT_2 * z.re, -SQRT_2 * z.im);
    let p = PhasePoint::new(vec![x], vec![xi]).unwrap();
    let v = stft_gaussian(&h3, &p).unwrap();
    let factor = (2.0 * PI).powf(-0.5) * (-(x * x + xi * xi) / 4.0).exp();
    let from_stft = v / Complex64::from_polar(factor, -x * xi / 2.0);
    let direct = bargmann(&h3, &BargmannPoint::new(vec![z]).unwrap()).unwrap().value;
    assert!((from_stft - direct).norm() <= 1e-8, "{from_stft} vs {direct}");
}

#[test]
fn rotation_and_phase_examples() {
    let p = PhasePoint::new(vec![1.0], vec![0.0]).unwrap();
    let q = rotate_phase_point(&p, &FracOrder::uniform(1.0, 1).unwrap()).unwrap();
    assert_eq!((q.x[0], q.xi[0]), (0.0, -1.0));
    let p = PhasePoint::new(vec![1.0], vec![1.0]).unwrap();
    let q = rotate_phase_point(&p, &FracOrder::uniform(0.5, 1).unwrap()).unwrap();
    assert!((q.x[0] - SQRT_2).abs() < 1e-15 && q.xi[0].abs() < 1e-15);
    assert_eq!(stft_phase(&p, &FracOrder::uniform(0.0, 1).unwrap()).unwrap(), 0.0);
    let p10 = PhasePoint::new(vec![1.0], vec![0.0]).unwrap();
    assert!(stft_phase(&p10, &FracOrder::uniform(1.0, 1).unwrap()).unwrap().abs() < 1e-15);
    assert!((stft_phase(&p, &FracOrder::uniform(0.5, 1).unwrap()).unwrap() + 0.5).abs() < 1e-15);
}

#[test]
fn rotation_identity_examples() {
    let c = mixed();
    let p = PhasePoint::new(vec![0.4], vec![-1.1]).unwrap();
    assert!(stft_rotation_check(&c, &FracOrder::uniform(0.0, 1).unwrap(), &p).unwrap() <= 1e-10);
    assert!(stft_rotation_check(&c, &FracOrder::uniform(0.7, 1).unwrap(), &p).unwrap() <= 1e-8);
    let h1 = CoeffTensor::unit(TruncationBox::cube(1, 1).unwrap(), &[1]).unwrap();
    let p = PhasePoint::new(vec![1.0], vec![0.0]).unwrap();
    assert!(stft_rotation_check(&h1, &FracOrder::uniform(1.0, 1).unwrap(), &p).unwrap() <= 1e-8);
}

/// With rotation and phase taken at `+t`, the identity fails for this transform's sign
/// convention; the checked orientation is `−t`.
#[test]
fn literal_orientation_does_not_hold() {
    let c = mixed();
    let t = FracOrder::uniform(0.7, 1).unwrap();
    let p = PhasePoint::new(vec![0.4], vec![-1.1]).unwrap();
    let lhs = stft_gaussian(&frac_ft(&c, &t).unwrap(), &p).unwrap();
    let q = rotate_phase_point(&p, &t).unwrap();
    let rhs = Complex64::from_polar(1.0, stft_phase(&p, &t).unwrap()) * stft_gaussian(&c, &q).unwrap();
    assert!((lhs - rhs).norm() > 1e-3, "literal orientation residual {}", (lhs - rhs).norm());
    assert!(stft_rotation_check(&c, &t, &p).unwrap() <= 1e-12);
}

#[test]
fn batch_csv_has_one_row_per_point() {
    let c = mixed();
    let pts: Vec<PhasePoint> = (0..5).map(|i| PhasePoint::new(vec![i as f64], vec![-(i as f64)]).unwrap()).collect();
    let vals = stft_batch(&c, &pts).unwrap();
    let mut buf = Vec::new();
    write_stft_csv(&pts, &vals, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 6);
}
