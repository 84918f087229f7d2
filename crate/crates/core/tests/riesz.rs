use heisenlab::battery::{battery, Gaussian};
use heisenlab::riesz::*;
use heisenlab::C64;
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

/// Modified Bessel `I_ν(u)` by its power series (moderate `u`).
fn bessel_i(nu: i32, u: f64) -> f64 {
    let mut term = (0.5 * u).powi(nu) / (1..=nu).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= 0.25 * u * u / (k as f64 * (k as f64 + nu as f64));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

proptest! {
    #[test]
    fn euclidean_symbol_is_unimodular_and_degree_zero(x in -5.0f64..5.0, y in -5.0f64..5.0, r in 0.1f64..10.0, a in 0usize..3, b in 0usize..3) {
        prop_assume!(x * x + y * y > 1e-4);
        let s = euclidean_symbol(a, b, [x, y]);
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        prop_assert!((euclidean_symbol(a, b, [r * x, r * y]) - s).norm() < 1e-12);
    }

    #[test]
    fn subordination_weight_is_positive_and_decreasing(s in 0.1f64..1.5, r2 in 0.1f64..10.0) {
        let w1 = subordination_weight(s, 1.0, 1, r2).unwrap();
        let w2 = subordination_weight(s, 1.0, 1, r2 * 1.5).unwrap();
        prop_assert!(w1 > 0.0 && w2 < w1);
    }
}

#[test]
fn subordination_weight_small_lambda_is_power() {
    for (s, r2) in [(0.5, 1.0), (1.0, 2.0), (0.3, 0.5)] {
        let w = subordination_weight(s, 1e-7, 1, r2).unwrap();
        assert!((w - f64::powf(r2, -s)).abs() < 1e-6 * w, "{w}");
    }
}

#[test]
fn euclidean_riesz_of_gaussian_matches_closed_form() {
    // f = e^{−|z|²/2}; (−Δ)^{−1/2} f = √(π/2) e^{−u} I_0(u), u = |z|²/4,
    // and (∂_x − i∂_y) g(r) = g'(r) (x − iy)/r.
    let f = Gaussian::centered(1, 0.5);
    let points = default_points();
    let got = euclidean_riesz(&f, 1, 0, &points, &FourierRule::default()).unwrap();
    for (z, v) in points.iter().zip(&got) {
        let z = z[0];
        let r = z.norm();
        let u = r * r / 4.0;
        let gp = (PI / 2.0).sqrt() * (r / 2.0) * (-u).exp() * (bessel_i(1, u) - bessel_i(0, u));
        let want = z.conj() / r * gp;
        assert!((v - want).norm() < 1e-10, "{z}: {v} vs {want}");
    }
}

#[test]
fn dilation_covariance_holds_for_the_battery() {
    for f in battery().iter().take(3) {
        for l in [0.5, 0.125] {
            assert!(field_dilation_defect(f, l, &default_points()).unwrap() < 1e-12);
        }
    }
}

#[test]
fn fields_on_gaussian_by_hand() {
    // Z(λ) e^{−|z|²/2} = (∂_z − (λ/4) z̄) f = −(1/2 + λ/4) z̄ f
    let f = Gaussian::centered(1, 0.5);
    let z = vec![C64::new(0.4, -0.9)];
    for lambda in [1.0, -2.0] {
        let v = field_apply(FieldSpec::new(FieldKind::Z, 0, lambda), &f, std::slice::from_ref(&z)).unwrap()[0];
        let fz = (-z[0].norm_sqr() / 2.0).exp();
        let want = -(0.5 + lambda / 4.0) * z[0].conj() * fz;
        assert!((v - want).norm() < 1e-14, "{v} vs {want}");
    }
}
