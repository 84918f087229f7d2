use heisenlab::hermite::*;
use heisenlab::C64;
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

// closed forms of the first three Hermite functions
fn phi_closed(k: usize, x: f64) -> f64 {
    let g = PI.powf(-0.25) * (-0.5 * x * x).exp();
    match k {
        0 => g,
        1 => 2f64.sqrt() * x * g,
        2 => (2.0 * x * x - 1.0) / 2f64.sqrt() * g,
        _ => unreachable!(),
    }
}

proptest! {
    #[test]
    fn recurrence_matches_closed_forms(x in -8.0f64..8.0) {
        let v = hermite_functions_1d(2, x);
        for k in 0..3 {
            prop_assert!((v[k] - phi_closed(k, x)).abs() < 1e-14);
        }
    }

    #[test]
    fn ladder_round_trip_is_number_operator(lambda in 0.1f64..4.0, seed in proptest::collection::vec(-1.0f64..1.0, 12)) {
        // A*A Φ_α = 2α|λ| Φ_α below the truncation edge
        let spec = HermiteBasisSpec::new(1, lambda, 12).unwrap();
        let mut c: Vec<C64> = seed.iter().map(|&v| C64::new(v, 0.5 * v)).collect();
        c.push(C64::new(0.0, 0.0));
        let a = ladder_apply(&spec, Ladder::Annihilate(0), &c).unwrap().coeffs;
        let back = ladder_apply(&spec, Ladder::Create(0), &a).unwrap().coeffs;
        for k in 0..12 {
            let want = c[k] * (2.0 * k as f64 * lambda);
            prop_assert!((back[k] - want).norm() < 1e-12 * (1.0 + want.norm()));
        }
    }
}

#[test]
fn orthonormal_under_trapezoid_rule() {
    // independent of Gauss-Hermite: trapezoid on a fine uniform grid
    let (h, m) = (0.02, 1600);
    let xs: Vec<f64> = (0..=m).map(|i| -16.0 + i as f64 * h).collect();
    let table: Vec<Vec<f64>> = xs.iter().map(|&x| hermite_functions_1d(20, x)).collect();
    for a in 0..=20 {
        for b in 0..=20 {
            let s: f64 = table.iter().map(|v| v[a] * v[b]).sum::<f64>() * h;
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((s - want).abs() < 1e-12, "({a},{b}): {s}");
        }
    }
}

#[test]
fn scaled_functions_are_normalized() {
    for lambda in [0.5, 2.0, -3.0] {
        let spec = HermiteBasisSpec::new(1, lambda, 4).unwrap();
        let h = 0.005;
        let pts: Vec<Vec<f64>> = (0..=4000).map(|i| vec![-10.0 + i as f64 * h]).collect();
        let v = hermite_eval(&spec, &MultiIndex(vec![3]), &pts).unwrap();
        let s: f64 = v.iter().map(|x| x * x).sum::<f64>() * h;
        assert!((s - 1.0).abs() < 1e-10, "λ = {lambda}: {s}");
    }
}

#[test]
fn hamiltonian_from_ladders_is_diagonal_spectrum() {
    let spec = HermiteBasisSpec::new(2, 1.5, 6).unwrap();
    let h = hamiltonian_from_ladders(&spec).unwrap();
    let d = spectral_multiplier(&spec, |k| C64::new((2 * k + 2) as f64 * 1.5, 0.0)).unwrap();
    // the top level loses its creation partner under truncation
    let inner: f64 = (0..6).map(|k| h.times_projection(k).sub(&d.times_projection(k)).unwrap().hs_norm()).fold(0.0, f64::max);
    assert!(inner < 1e-12, "{inner}");
}

#[test]
fn projections_resolve_identity() {
    let spec = HermiteBasisSpec::new(2, 1.0, 5).unwrap();
    let mut sum = OperatorMatrix::zeros(&spec);
    for k in 0..=5 {
        let p = projection(&spec, k).unwrap();
        assert!(p.mul(&p).unwrap().sub(&p).unwrap().hs_norm() < 1e-14);
        assert_eq!(p.hs_norm().powi(2).round() as usize, k + 1);
        sum = sum.add(&p).unwrap();
    }
    assert!(sum.sub(&OperatorMatrix::identity(&spec)).unwrap().hs_norm() < 1e-14);
    assert_eq!(indices_of_order(2, 5).len(), 6);
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(HermiteBasisSpec::new(1, 0.0, 4).is_err());
    assert!(HermiteBasisSpec::new(0, 1.0, 4).is_err());
    assert!(HermiteBasisSpec::new(1, f64::NAN, 4).is_err());
}
