use heisenlab::laguerre::*;
use heisenlab::C64;
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

/// `∫_0^∞ g(t) dt` by the trapezoid rule after `t = e^u`.
fn log_trapezoid(g: impl Fn(f64) -> f64) -> f64 {
    let (a, b, m) = (-40.0, 6.0, 20000);
    let h = (b - a) / m as f64;
    (0..=m)
        .map(|i| {
            let t = (a + i as f64 * h).exp();
            let w = if i == 0 || i == m { 0.5 } else { 1.0 };
            w * g(t) * t
        })
        .sum::<f64>()
        * h
}

proptest! {
    #[test]
    fn laguerre_matches_explicit_low_orders(nu in 0.0f64..3.0, x in 0.0f64..20.0) {
        let l1 = 1.0 + nu - x;
        let l2 = ((nu + 1.0) * (nu + 2.0) - 2.0 * (nu + 2.0) * x + x * x) / 2.0;
        prop_assert!((laguerre_poly(0, nu, x) - 1.0).abs() < 1e-14);
        prop_assert!((laguerre_poly(1, nu, x) - l1).abs() < 1e-12 * (1.0 + l1.abs()));
        prop_assert!((laguerre_poly(2, nu, x) - l2).abs() < 1e-12 * (1.0 + l2.abs()));
        prop_assert_eq!(laguerre_poly(-1, nu, x), 0.0);
    }

    #[test]
    fn heat_kernel_is_positive_and_even_in_lambda(t in 0.05f64..5.0, lambda in 0.01f64..5.0, r2 in 0.0f64..30.0) {
        let p = heat_kernel(1, t, lambda, r2);
        prop_assert!(p > 0.0 || r2 * lambda > 600.0);
        prop_assert_eq!(p, heat_kernel(1, t, -lambda, r2));
    }

    #[test]
    fn bessel_kernel_is_positive(s in 0.2f64..2.0, d in -0.5f64..2.0, r in 0.2f64..4.0) {
        let v = kernel_radial(KernelKind::Bessel { s, d }, 1, 1.0, r * r).unwrap();
        prop_assert!(v.value > 0.0);
    }
}

#[test]
fn heat_kernel_equals_its_spectral_series() {
    // p_t^λ = (2π)^{−1} |λ| Σ_k e^{−t(2k+1)|λ|} φ_{k,λ}
    let (t, lambda): (f64, f64) = (0.5, 1.3);
    let spec = LaguerreSpec::for_dim(1, lambda).unwrap();
    for r in [0.0, 0.7, 1.5, 3.0] {
        let z = [C64::new(r, 0.0)];
        let series: f64 = (0..80)
            .map(|k| (-t * (2 * k + 1) as f64 * lambda).exp() * laguerre_eval(&spec, k, &z).unwrap())
            .sum::<f64>()
            * lambda
            / (2.0 * PI);
        let direct = heat_kernel(1, t, lambda, r * r);
        assert!((series - direct).abs() < 1e-13, "r = {r}: {series} vs {direct}");
    }
}

#[test]
fn heat_mass_matches_direct_integral() {
    for (t, lambda) in [(0.5f64, 0.5f64), (1.0, 1.0), (2.0, 2.0), (0.3, -1.7)] {
        // ∫ p dz = 2π ∫ p r dr, trapezoid after r = e^u
        let h = 1e-2;
        let mass: f64 = (0..4500).map(|i| {
            let r = (-40.0 + i as f64 * h).exp();
            2.0 * PI * r * r * heat_kernel(1, t, lambda, r * r)
        }).sum::<f64>() * h;
        let closed = 1.0 / (t * lambda).abs().cosh();
        assert!((mass - closed).abs() < 1e-10, "{mass} vs {closed}");
        assert!((heat_mass(1, t, lambda) - closed).abs() < 1e-12);
    }
}

#[test]
fn heat_kernel_tends_to_euclidean() {
    let t = 0.8;
    for r2 in [0.0f64, 1.0, 4.0] {
        let e = (-r2 / (4.0 * t)).exp() / (4.0 * PI * t);
        assert!((heat_kernel(1, t, 1e-9, r2) - e).abs() < 1e-12);
    }
}

#[test]
fn fundamental_solution_is_time_integral_of_heat() {
    for r in [0.5, 1.0, 2.5] {
        let direct = log_trapezoid(|t| heat_kernel(1, t, 1.0, r * r));
        let k = kernel_radial(KernelKind::Fundamental, 1, 1.0, r * r).unwrap();
        assert!((k.value - direct).abs() < 1e-8 * direct, "r = {r}: {} vs {direct}", k.value);
        let b = kernel_radial(KernelKind::Bessel { s: 1.0, d: 0.0 }, 1, 1.0, r * r).unwrap();
        assert!((b.value - direct).abs() < 1e-8 * direct);
    }
}

#[test]
fn bessel_mass_closed_form() {
    // ∫ K^1_{1,0} = ∫_0^∞ sech t dt = π/2
    assert!((bessel_kernel_mass(1, 1.0, 0.0, 1.0).unwrap() - PI / 2.0).abs() < 1e-9);
}

#[test]
fn non_integrable_bessel_kernels_are_rejected() {
    assert!(kernel_radial(KernelKind::Bessel { s: 0.5, d: -1.0 }, 1, 1.0, 1.0).is_err());
    assert!(kernel_radial(KernelKind::Bessel { s: -0.5, d: 0.0 }, 1, 1.0, 1.0).is_err());
    assert!(kernel_radial(KernelKind::Fundamental, 1, 1.0, 0.0).is_err());
    assert!(kernel_radial(KernelKind::Heat { t: 1.0 }, 1, 0.0, 1.0).is_err());
}
