use heisenlab::hermite::{HermiteBasisSpec, MultiIndex};
use heisenlab::weyl::*;
use heisenlab::C64;
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

fn gaussian(a: f64) -> impl Fn(&[C64]) -> C64 {
    move |z: &[C64]| C64::new((-a * z[0].norm_sqr()).exp(), 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ground_state_coefficient_is_gaussian(x in -4.0f64..4.0, y in -4.0f64..4.0, lambda in prop_oneof![0.25f64..3.0, -3.0f64..-0.25]) {
        // ⟨π_λ(z)Φ_0, Φ_0⟩ = e^{−|λ||z|²/4}
        let spec = HermiteBasisSpec::new(1, lambda, 4).unwrap();
        let z = [C64::new(x, y)];
        let c = matrix_coefficient(&spec, &z, &MultiIndex(vec![0]), &MultiIndex(vec![0])).unwrap();
        let want = (-0.25 * lambda.abs() * (x * x + y * y)).exp();
        prop_assert!((c - want).norm() < 1e-12, "{c} vs {want}");
    }

    #[test]
    fn coefficients_are_bounded_by_one(x in -3.0f64..3.0, y in -3.0f64..3.0, a in 0usize..6, b in 0usize..6) {
        let spec = HermiteBasisSpec::new(1, 1.0, 6).unwrap();
        let c = matrix_coefficient(&spec, &[C64::new(x, y)], &MultiIndex(vec![a]), &MultiIndex(vec![b])).unwrap();
        prop_assert!(c.norm() <= 1.0 + 1e-12);
    }
}

#[test]
fn representation_at_origin_is_identity() {
    let spec = HermiteBasisSpec::new(1, 2.0, 5).unwrap();
    for a in 0..=5 {
        for b in 0..=5 {
            let c = matrix_coefficient(&spec, &[C64::new(0.0, 0.0)], &MultiIndex(vec![a]), &MultiIndex(vec![b])).unwrap();
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((c - want).norm() < 1e-13);
        }
    }
}

#[test]
fn radial_gaussian_has_diagonal_transform() {
    // W_1(e^{−a|z|²}) is a function of H; its (0,0) entry is ∫ e^{−a|z|²} e^{−|z|²/4} dz = π/(a + 1/4)
    let a = 0.7;
    let spec = HermiteBasisSpec::new(1, 1.0, 8).unwrap();
    let f = GridFunction::sample(1, 7.0, 40, gaussian(a)).unwrap();
    let w = weyl_transform(&f, &spec).unwrap().op;
    let e00 = w.get(&MultiIndex(vec![0]), &MultiIndex(vec![0]));
    assert!((e00 - PI / (a + 0.25)).norm() < 1e-8, "{e00}");
    for i in 0..=8 {
        for j in 0..=8 {
            if i != j {
                assert!(w.get(&MultiIndex(vec![i]), &MultiIndex(vec![j])).norm() < 1e-8);
            }
        }
    }
}

#[test]
fn untwisted_convolution_of_gaussians() {
    // λ = 0: ∫ e^{−a|z−w|²} e^{−b|w|²} dw = π/(a+b) e^{−ab|z|²/(a+b)}
    let (a, b) = (0.8, 1.3);
    let f = GridFunction::sample(1, 8.0, 48, gaussian(a)).unwrap();
    let g = GridFunction::sample(1, 8.0, 48, gaussian(b)).unwrap();
    let h = twisted_convolution(&f, &g, 0.0).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..h.samples.len() {
        let z = h.point(i)[0];
        if z.norm() < 3.0 {
            let want = PI / (a + b) * (-a * b / (a + b) * z.norm_sqr()).exp();
            worst = worst.max((h.samples[i] - want).norm());
        }
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn symplectic_fourier_of_gaussian() {
    // ℱ_λ e^{−a|u|²}(z) = (2a)^{−1} e^{−λ²|z|²/(16a)}
    let (a, lambda) = (0.5, 1.0);
    let f = GridFunction::sample(1, 9.0, 48, gaussian(a)).unwrap();
    let h = symplectic_fourier(&f, lambda).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..h.samples.len() {
        let z = h.point(i)[0];
        let want = (-lambda * lambda * z.norm_sqr() / (16.0 * a)).exp() / (2.0 * a);
        if z.norm() < 6.0 {
            worst = worst.max((h.samples[i] - want).norm());
        }
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn grids_reject_odd_sizes_and_nonfinite_samples() {
    assert!(GridFunction::zeros(1, 4.0, 15).is_err());
    assert!(GridFunction::sample(1, 4.0, 8, |_| C64::new(f64::NAN, 0.0)).is_err());
}
