use heisenlab::heisenberg::*;
use heisenlab::C64;
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

fn elem() -> impl Strategy<Value = GroupElement> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0).prop_map(|(x, y, t)| GroupElement::new(x, y, t))
}

fn close(a: GroupElement, b: GroupElement) -> bool {
    (a.z - b.z).norm() < 1e-12 && (a.t - b.t).abs() < 1e-12 * (1.0 + a.t.abs())
}

proptest! {
    #[test]
    fn group_law_is_associative(g in elem(), h in elem(), k in elem(), eps in 0.0f64..2.0) {
        let l = group_product_eps(group_product_eps(g, h, eps), k, eps);
        let r = group_product_eps(g, group_product_eps(h, k, eps), eps);
        prop_assert!(close(l, r));
    }

    #[test]
    fn inverses_and_identity(g in elem(), eps in 0.0f64..2.0) {
        let e = GroupElement::identity();
        prop_assert!(close(group_product_eps(g, g.inverse(), eps), e));
        prop_assert!(close(group_product_eps(e, g, eps), g));
    }

    #[test]
    fn dilations_are_automorphisms(g in elem(), h in elem(), r in 0.1f64..4.0, eps in 0.0f64..2.0) {
        let lhs = group_product_eps(g, h, eps).dilate(r).unwrap();
        let rhs = group_product_eps(g.dilate(r).unwrap(), h.dilate(r).unwrap(), eps);
        prop_assert!(close(lhs, rhs));
    }

    #[test]
    fn contraction_map_is_an_isomorphism(g in elem(), h in elem(), eps in 0.05f64..2.0) {
        // φ_ε(z, t) = (ε^{−1/2} z, t) : H → H_ε
        let phi = |p: GroupElement| GroupElement { z: p.z / eps.sqrt(), t: p.t };
        prop_assert!(close(phi(group_product_eps(g, h, 1.0)), group_product_eps(phi(g), phi(h), eps)));
    }

    #[test]
    fn abelian_at_eps_zero(g in elem(), h in elem()) {
        prop_assert!(close(group_product_eps(g, h, 0.0), group_product_eps(h, g, 0.0)));
    }

    #[test]
    fn heat_kernel_positive_and_even(x in -2.0f64..2.0, y in -2.0f64..2.0, s in 0.0f64..2.0) {
        let w = C64::new(x, y);
        let a = heisenberg_heat(1.0, w, s).unwrap().value;
        let b = heisenberg_heat(1.0, w, -s).unwrap().value;
        prop_assert!(a > 0.0);
        prop_assert!((a - b).abs() < 1e-14 * a);
    }
}

#[test]
fn euclidean_limit_kernel_closed_form() {
    // kernel of (γ² − Δ)^{−1/2} on ℝ²: e^{−γr}/(2πr)
    for gamma in [0.5, 1.0, 2.0] {
        for r in [0.3, 1.0, 2.5] {
            let v = heisenberg_kernel_eval(HeisenbergKernel::EuclidLimit { gamma }, C64::new(r, 0.0), 0.0).unwrap();
            let want = (-gamma * r).exp() / (2.0 * PI * r);
            assert!((v.value - want).abs() < 1e-8 * want, "γ={gamma} r={r}: {} vs {want}", v.value);
        }
    }
}

#[test]
fn heat_kernel_integrates_to_euclidean_heat_in_s() {
    let t = 1.0;
    for r in [0.0, 0.8, 1.6] {
        let w = C64::new(r, 0.0);
        // even, analytic and O(e^{−π|s|/t}) in s: a short trapezoid sum suffices
        let h = 0.1;
        let half: f64 = (1..=80).map(|i| heisenberg_heat(t, w, i as f64 * h).unwrap().value).sum();
        let total = (heisenberg_heat(t, w, 0.0).unwrap().value + 2.0 * half) * h;
        let want = (-r * r / (4.0 * t)).exp() / (4.0 * PI * t);
        assert!((total - want).abs() < 1e-7 * want, "r={r}: {total} vs {want}");
    }
}

#[test]
fn heat_kernel_is_homogeneous() {
    // p_{ρ²t}(ρw, ρ²s) = ρ^{−4} p_t(w, s)
    let (w, s) = (C64::new(0.6, -0.3), 0.4);
    for rho in [0.5, 2.0] {
        let a = heisenberg_heat(rho * rho, w * rho, rho * rho * s).unwrap().value;
        let b = heisenberg_heat(1.0, w, s).unwrap().value / rho.powi(4);
        assert!((a - b).abs() < 1e-8 * b);
    }
}

#[test]
fn untwisted_group_convolution_of_gaussians() {
    // ε = 0: ordinary convolution on ℝ³ of e^{−a|p|²} and e^{−b|p|²}
    let (a, b) = (1.0, 0.6);
    let gauss = move |c: f64| move |p: GroupElement| (-c * (p.z.norm_sqr() + p.t * p.t)).exp();
    let g = GridFunction3D::sample(6.0, 6.0, 40, gauss(b)).unwrap();
    let f = gauss(a);
    for p in [GroupElement::new(0.0, 0.0, 0.0), GroupElement::new(0.9, -0.3, 0.5)] {
        let v = convolution_eps_at(&f, &g, 0.0, p);
        let r2 = p.z.norm_sqr() + p.t * p.t;
        let want = (PI / (a + b)).powf(1.5) * (-a * b / (a + b) * r2).exp();
        assert!((v - want).abs() < 1e-10, "{v} vs {want}");
    }
}

#[test]
fn fourier_identity_ratio_is_constant() {
    let ratios = fourier_identity_ratios(1.0, &[0.0, 0.5, 1.0, 2.0, 4.0]).unwrap();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!(ratios.iter().all(|r| (r / mean - 1.0).abs() < 1e-4));
}

#[test]
fn kernel_domain_errors() {
    assert!(heisenberg_heat(0.0, C64::new(1.0, 0.0), 0.0).is_err());
    assert!(resolvent_slice(1.0, 1.0, 0.0).is_err());
    assert!(resolvent_slice(-1.0, 1.0, 1.0).is_err());
}
