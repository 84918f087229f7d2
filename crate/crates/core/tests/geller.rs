use heisenlab::geller::*;
use heisenlab::hermite::MultiIndex;
use heisenlab::C64;
use proptest::prelude::*;

fn fact(m: usize) -> f64 {
    (1..=m).map(|v| v as f64).product()
}

/// dim ℋ_{a,b}(ℂⁿ)
fn harmonic_dim(n: usize, a: usize, b: usize) -> usize {
    if n == 1 {
        return usize::from(a == 0 || b == 0);
    }
    let v = (a + b + n - 1) as f64 * fact(a + n - 2) * fact(b + n - 2) / (fact(a) * fact(b) * fact(n - 1) * fact(n - 2));
    v.round() as usize
}

/// −(−1)^i binom(1/2, i)
fn binomial_coeff(i: usize) -> f64 {
    let mut c = 1.0;
    for m in 0..i {
        c *= (0.5 - m as f64) / (m + 1) as f64;
    }
    -(if i % 2 == 0 { c } else { -c })
}

proptest! {
    #[test]
    fn series_coefficients_match_binomial_series(i in 1usize..80) {
        let c = power_series_coeff(i).unwrap();
        let b = binomial_coeff(i);
        prop_assert!((c - b).abs() < 1e-14 * b.abs().max(1e-300));
        prop_assert!(c > 0.0);
    }
}

#[test]
fn null_space_dimensions_and_exactness() {
    for n in 1..=3 {
        for a in 0..=3 {
            for b in 0..=3 {
                if n == 3 && a + b > 4 {
                    continue;
                }
                let ns = harmonic_null_space(n, a, b);
                assert_eq!(ns.len(), harmonic_dim(n, a, b), "n = {n}, (a, b) = ({a}, {b})");
                for v in &ns {
                    assert!(is_harmonic_exact(n, a, b, v));
                }
            }
        }
    }
}

#[test]
fn monomials_have_unit_gaussian_norm_in_one_dimension() {
    // (z^a, z^a) against a radial trapezoid of the weighted integral
    for a in 0..=5 {
        let p = SolidHarmonic::monomial(MultiIndex(vec![a]), MultiIndex(vec![0]));
        let exact = gaussian_inner_product(&p, &p).unwrap();
        // (2π)^{−1} ∫ dz = ∫ r dr, trapezoid after r = e^u
        let h = 1e-2;
        let moment: f64 = (0..5000).map(|i| {
            let r = (-40.0 + i as f64 * h).exp();
            r.powi(2 * a as i32 + 2) * (-0.5 * r * r).exp()
        }).sum::<f64>() * h;
        let numeric = moment * 2f64.powi(-(a as i32)) / fact(a);
        assert!((exact.re - numeric).abs() < 1e-9 && exact.im == 0.0, "a = {a}: {exact} vs {numeric}");
        assert!((exact.re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn solid_harmonic_bases_are_orthonormal() {
    for (a, b) in [(1, 0), (1, 1), (2, 1), (2, 2)] {
        let basis = solid_harmonic_basis(2, a, b).unwrap();
        assert_eq!(basis.len(), a + b + 1);
        for (i, p) in basis.iter().enumerate() {
            for (j, q) in basis.iter().enumerate() {
                let v = gaussian_inner_product(p, q).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - C64::new(want, 0.0)).norm() < 1e-12);
            }
            // harmonic as a polynomial
            assert!(p.laplacian().values().all(|c| c.norm() < 1e-12));
        }
    }
}

#[test]
fn transfer_operator_factorizes() {
    for (a, b) in [(1, 0), (0, 1), (2, 1)] {
        let t = transfer_operator(1, a, b, 40).unwrap();
        for k in a..=40 {
            let prod: f64 = t.factors.iter().map(|f| f[k]).product();
            let diag = t.matrix.get(&MultiIndex(vec![k]), &MultiIndex(vec![k])).re;
            assert!((diag - t.normalization * prod).abs() < 1e-12 * diag.abs().max(1.0), "(a,b)=({a},{b}) k={k}");
        }
        // each factor tends to 2^{−1/2}
        for f in &t.factors {
            assert!((f[40] - 0.5f64.sqrt()).abs() < 0.02);
        }
    }
    assert!((transfer_operator(1, 1, 0, 4).unwrap().normalization - 8f64.sqrt()).abs() < 1e-14);
}

#[test]
fn geller_constant_domain() {
    assert!(geller_constant(1, 2, 0, 1).is_err());
    // C_δ for δ = (0,0) is the constant 1 at n = 1
    for k in 0..10 {
        assert!((geller_constant(1, 0, 0, k).unwrap() - 1.0).abs() < 1e-12);
    }
}
