//! One-dimensional quadrature rules: Gauss-Hermite, Gauss-Legendre and an
//! adaptive Gauss-Kronrod integrator with a log substitution for half lines.

use crate::hermite::hermite_functions_1d;

/// Gauss-Hermite rule for the weight `e^{-u^2}`.
///
/// `fn_weights[i] = weights[i] * exp(nodes[i]^2)` is stored separately: it is
/// computed directly from Hermite functions and keeps full relative accuracy
/// at the outer nodes, where `weights[i]` underflows.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub fn_weights: Vec<f64>,
}

/// `points`-node Gauss-Hermite rule, exact for polynomials of degree `2*points-1`.
pub fn gauss_hermite(points: usize) -> GaussHermite {
    assert!(points >= 1);
    let m = points;
    // Golub-Welsch start, then Newton on the normalized Hermite function h_m.
    let mut jac = nalgebra::DMatrix::<f64>::zeros(m, m);
    for i in 1..m {
        let b = (i as f64 / 2.0).sqrt();
        jac[(i, i - 1)] = b;
        jac[(i - 1, i)] = b;
    }
    let eig = nalgebra::SymmetricEigen::new(jac);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let h = hermite_functions_1d(m, *x);
            // h_m' = sqrt(2m) h_{m-1} - x h_m
            let d = (2.0 * m as f64).sqrt() * h[m - 1] - *x * h[m];
            if d == 0.0 {
                break;
            }
            let step = h[m] / d;
            *x -= step;
            if step.abs() < 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
    }
    // symmetrize
    for i in 0..m / 2 {
        let s = 0.5 * (nodes[m - 1 - i] - nodes[i]);
        nodes[i] = -s;
        nodes[m - 1 - i] = s;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    let fn_weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let h = hermite_functions_1d(m - 1, x);
            1.0 / h.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();
    let weights = nodes
        .iter()
        .zip(&fn_weights)
        .map(|(x, w)| w * (-x * x).exp())
        .collect();
    GaussHermite { nodes, weights, fn_weights }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(points: usize) -> (Vec<f64>, Vec<f64>) {
    let m = points;
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..(m + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..m {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = m as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) on `[a, b]` with global bisection of the worst interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Estimate {
    integrate_split(&f, &[a, b], rel_tol, abs_tol)
}

/// Like [`integrate`] but starting from a given partition.
pub fn integrate_split<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], rel_tol: f64, abs_tol: f64) -> Estimate {
    let mut segs: Vec<(f64, f64, f64, f64)> = breaks
        .windows(2)
        .map(|w| {
            let (v, e) = gk15(f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    for _ in 0..4000 {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Estimate { value: total, error: err, converged: true };
        }
        let (iw, _) = segs
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, s)| if s.3 > acc.1 { (i, s.3) } else { acc });
        let (a, b, _, _) = segs[iw];
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let (v1, e1) = gk15(f, a, m);
        let (v2, e2) = gk15(f, m, b);
        segs[iw] = (a, m, v1, e1);
        segs.push((m, b, v2, e2));
    }
    let total: f64 = segs.iter().map(|s| s.2).sum();
    let err: f64 = segs.iter().map(|s| s.3).sum();
    Estimate { value: total, error: err, converged: err <= abs_tol.max(rel_tol * total.abs()) }
}

/// `∫_0^∞ g(t) dt` through `t = e^u`. The `u`-range is trimmed where
/// `|g(e^u) e^u|` falls below `1e-18` of its sampled peak.
pub fn integrate_half_line<F: Fn(f64) -> f64>(g: F, rel_tol: f64) -> Estimate {
    let h = |u: f64| {
        let t = u.exp();
        let v = g(t) * t;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let (lo, hi, step) = (-80.0, 80.0, 0.25);
    let n = ((hi - lo) / step) as usize;
    let samples: Vec<f64> = (0..=n).map(|i| h(lo + i as f64 * step).abs()).collect();
    let peak = samples.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Estimate { value: 0.0, error: 0.0, converged: true };
    }
    let cut = 1e-18 * peak;
    let first = samples.iter().position(|&v| v > cut).unwrap();
    let last = samples.iter().rposition(|&v| v > cut).unwrap();
    let a = lo + first.saturating_sub(1) as f64 * step;
    let b = lo + (last + 1).min(n) as f64 * step;
    let pieces = (((b - a) / 2.0).ceil() as usize).max(1);
    let breaks: Vec<f64> = (0..=pieces).map(|i| a + (b - a) * i as f64 / pieces as f64).collect();
    integrate_split(&h, &breaks, rel_tol, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_rule_integrates_moments() {
        let r = gauss_hermite(10);
        let m0: f64 = r.weights.iter().sum();
        assert!((m0 - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        let m4: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m4 - 0.75 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn legendre_rule() {
        let (x, w) = gauss_legendre(7);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_and_half_line() {
        let e = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 0.0);
        assert!((e.value - 2.0).abs() < 1e-12);
        let e = integrate_half_line(|t| t.powf(-0.5) * (-t).exp(), 1e-10);
        assert!((e.value - std::f64::consts::PI.sqrt()).abs() < 1e-9);
    }
}
