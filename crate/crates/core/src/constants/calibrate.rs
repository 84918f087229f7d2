//! Fitting routines that regenerate `data/constants.json`.
//!
//! Every fit works from raw quadrature (the constant under fit set to 1), at
//! `n = 1`, `λ = 1`, and returns the value with the spread of its samples.
//! `cargo run -p heisenlab --release --example calibrate` rewrites the file.

use std::f64::consts::PI;

use serde::Serialize;

use super::{registry, Bidegree, Registry};
use crate::battery::battery;
use crate::error::Result;
use crate::heisenberg::fourier_identity_ratios;
use crate::hermite::{ladder_matrix, projection, HermiteBasisSpec, Ladder, MultiIndex, OperatorMatrix};
use crate::laguerre::{kernel_radial, laguerre_poly, KernelKind};
use crate::quadrature::{gauss_hermite, integrate_half_line};
use crate::weyl::{matrix_coefficient, weyl_transform, GridFunction, SmoothFunction};
use crate::C64;

/// A fitted constant: least-squares value and the largest relative deviation of a sample.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Fit {
    pub re: f64,
    pub im: f64,
    pub spread: f64,
    pub samples: usize,
}

impl Fit {
    fn real(samples: &[f64]) -> Fit {
        let m = samples.iter().sum::<f64>() / samples.len() as f64;
        let spread = samples.iter().map(|s| (s / m - 1.0).abs()).fold(0.0, f64::max);
        Fit { re: m, im: 0.0, spread, samples: samples.len() }
    }
    /// `c` minimizing `Σ |x_i − c y_i|²`.
    fn ratio(xs: &[C64], ys: &[C64]) -> Fit {
        let num: C64 = xs.iter().zip(ys).map(|(x, y)| y.conj() * x).sum();
        let den: f64 = ys.iter().map(|y| y.norm_sqr()).sum();
        let c = num / den;
        let spread = xs
            .iter()
            .zip(ys)
            .filter(|(_, y)| y.norm() > 1e-12)
            .map(|(x, y)| (x / y / c - 1.0).norm())
            .fold(0.0, f64::max);
        Fit { re: c.re, im: c.im, spread, samples: xs.len() }
    }
    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

/// `‖f‖² / (|λ| ‖W_λ f‖²_HS)` over the Gaussian battery (`R = 8`, 48 nodes, `K = 24`).
pub fn weyl_plancherel() -> Result<Fit> {
    let spec = HermiteBasisSpec::new(1, 1.0, 24)?;
    let mut s = Vec::new();
    for g in battery() {
        let grid = GridFunction::sample(1, 8.0, 48, |z| g.value(z))?;
        let w = weyl_transform(&grid, &spec)?;
        s.push(g.l2_norm_sq() / w.op.hs_norm().powi(2));
    }
    Ok(Fit::real(&s))
}

/// Polynomial extrapolation of `(x_i, y_i)` to `x = 0` (Neville).
fn extrapolate_to_zero(xs: &[f64], ys: &[C64]) -> C64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i + 1] * xs[i] - p[i] * xs[i + m]) / (xs[i] - xs[i + m]);
        }
    }
    p[0]
}

const DELTAS: [f64; 6] = [0.01, 0.005, 0.0025, 0.00125, 0.000625, 0.0003125];

/// `⟨W(ℱ(P g_δ)) Φ_β, Φ_α⟩` for `P = z^a` (`conj = false`) or `z̄^a`, `g_δ = e^{−δ|z|²}`, `λ = 1`.
///
/// `ℱ(P g_δ)(z) = (2δ)^{−1} (∓z/(4δ))^a e^{−|z|²/(16δ)}` (upper sign for `z^a`, and
/// `z̄` in place of `z` for the conjugate). With `z = 4√δ v` the integral is
/// `8 (∓1)^a δ^{−a/2} ∫ v^a e^{−|v|²} ⟨π(4√δ v)Φ_β, Φ_α⟩ dv`, done by tensor Gauss-Hermite.
fn mollified_entry(spec: &HermiteBasisSpec, a: usize, conj: bool, delta: f64, alpha: usize, beta: usize) -> Result<C64> {
    let rule = gauss_hermite(40);
    let (ai, bi) = (MultiIndex(vec![alpha]), MultiIndex(vec![beta]));
    let sd = delta.sqrt();
    let mut acc = C64::new(0.0, 0.0);
    for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
        for (y, wy) in rule.nodes.iter().zip(&rule.weights) {
            let v = C64::new(*x, *y);
            let p = if conj { v.conj() } else { v };
            let m = matrix_coefficient(spec, &[v * (4.0 * sd)], &ai, &bi)?;
            acc += wx * wy * p.powu(a as u32) * m;
        }
    }
    let sign = if conj || a % 2 == 0 { 1.0 } else { -1.0 };
    Ok(acc * (8.0 * sign * sd.powi(-(a as i32))))
}

/// `κ = W_1(ℱ_1 1)`, the `(0,0)` entry of `W(ℱ g_δ)` extrapolated to `δ = 0`.
pub fn weyl_correspondence_unit() -> Result<Fit> {
    let spec = HermiteBasisSpec::new(1, 1.0, 8)?;
    let ys: Vec<C64> = DELTAS.iter().map(|&d| mollified_entry(&spec, 0, false, d, 0, 0)).collect::<Result<_>>()?;
    let v = extrapolate_to_zero(&DELTAS, &ys);
    let v_short = extrapolate_to_zero(&DELTAS[..DELTAS.len() - 1], &ys[..DELTAS.len() - 1]);
    Ok(Fit { re: v.re, im: v.im, spread: ((v - v_short) / v).norm(), samples: DELTAS.len() })
}

/// `c(a,0)` (or `c(0,a)` when `conj`) in `G(z^a) = c λ^{−a} A^a`, from mollified
/// Weyl transforms normalized by `κ`, against the ladder matrix entries.
pub fn weyl_monomial(a: usize, conj: bool, kappa: f64) -> Result<Fit> {
    let spec = HermiteBasisSpec::new(1, 1.0, 8)?;
    let lad = if conj { Ladder::Create(0) } else { Ladder::Annihilate(0) };
    let step = ladder_matrix(&spec, lad)?;
    let mut m = OperatorMatrix::identity(&spec);
    for _ in 0..a {
        m = step.mul(&m)?;
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for base in 0..3 {
        let (alpha, beta) = if conj { (base + a, base) } else { (base, base + a) };
        let vals: Vec<C64> = DELTAS
            .iter()
            .map(|&d| mollified_entry(&spec, a, conj, d, alpha, beta))
            .collect::<Result<_>>()?;
        xs.push(extrapolate_to_zero(&DELTAS, &vals) / kappa);
        ys.push(m.entries[(alpha, beta)]);
    }
    Ok(Fit::ratio(&xs, &ys))
}

/// `c_1(a,0)` in `G(z^a) P_k = c_1(a,0) W(z^a φ^a_{k−a})`, least squares over
/// `k = a..=a+3`, with `G(z^a) = c(a,0) A^a` built from the supplied `c(a,0)`.
pub fn hecke_bochner(a: usize, c_a: C64) -> Result<Fit> {
    let spec = HermiteBasisSpec::new(1, 1.0, 24)?;
    let step = ladder_matrix(&spec, Ladder::Annihilate(0))?;
    let mut ga = OperatorMatrix::identity(&spec);
    for _ in 0..a {
        ga = step.mul(&ga)?;
    }
    let ga = ga.scale(c_a);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in a..=a + 3 {
        let grid = GridFunction::sample(1, 10.0, 64, |z| {
            let r2 = z[0].norm_sqr();
            z[0].powu(a as u32) * laguerre_poly((k - a) as i64, a as f64, 0.5 * r2) * (-0.25 * r2).exp()
        })?;
        let w = weyl_transform(&grid, &spec)?.op;
        let lhs = ga.mul(&projection(&spec, k)?)?;
        for i in 0..spec.len() {
            for j in 0..spec.len() {
                if lhs.entries[(i, j)].norm() > 1e-12 {
                    xs.push(lhs.entries[(i, j)]);
                    ys.push(w.entries[(i, j)]);
                }
            }
        }
    }
    Ok(Fit::ratio(&xs, &ys))
}

/// Mass of `p_t^λ` at `t = 1` in the `λ → 0` limit (`λ = 1e−6`), raw kernel.
pub fn heat_mass() -> Result<Fit> {
    let lambda = 1e-6;
    let e = integrate_half_line(
        |r| 2.0 * PI * r * kernel_radial(KernelKind::Heat { t: 1.0 }, 1, lambda, r * r).map(|k| k.value).unwrap_or(f64::NAN),
        1e-13,
    );
    Ok(Fit::real(&[e.value * lambda.cosh()]))
}

/// `c_{1,1}` from the weak form of `L(1) K = δ`: `c ⟨K̃, L(1)φ⟩ = φ(0)` for
/// `φ = e^{−a|z|²}`, `a ∈ {1/8, 1/4, 1/2, 1}`, where `K̃` is the kernel with `c = 1`.
pub fn fundamental() -> Result<Fit> {
    let c0 = registry().fundamental;
    let mut s = Vec::new();
    for a in [0.125, 0.25, 0.5, 1.0] {
        // L(1) on radial functions: −Δ + |z|²/4
        let e = integrate_half_line(
            |r| {
                let k = kernel_radial(KernelKind::Fundamental, 1, 1.0, r * r).map(|k| k.value / c0).unwrap_or(f64::NAN);
                let lphi = (4.0 * a - 4.0 * a * a * r * r + 0.25 * r * r) * (-a * r * r).exp();
                2.0 * PI * r * k * lphi
            },
            1e-12,
        );
        s.push(1.0 / e.value);
    }
    Ok(Fit::real(&s))
}

/// `C_K` making the Fourier transform of `K_γ^0` equal `(γ² + |z|²)^{−1/2}` (`γ = 1`).
pub fn resolvent_kernel() -> Result<Fit> {
    let c0 = registry().resolvent_kernel;
    let ratios = fourier_identity_ratios(1.0, &[0.0, 0.5, 1.0, 2.0, 4.0])?;
    let raw: Vec<f64> = ratios.iter().map(|r| c0 / r).collect();
    Ok(Fit::real(&raw))
}

/// All fits, in registry order.
#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub weyl_plancherel: Fit,
    pub weyl_correspondence_unit: Fit,
    pub weyl_monomial: Vec<(usize, usize, Fit)>,
    pub hecke_bochner: Vec<(usize, Fit)>,
    pub heat_mass: Fit,
    pub fundamental: Fit,
    pub resolvent_kernel: Fit,
}

pub fn calibrate_all() -> Result<Calibration> {
    let kappa = weyl_correspondence_unit()?;
    let mut mono = Vec::new();
    for a in 1..=4 {
        mono.push((a, 0, weyl_monomial(a, false, kappa.re)?));
        mono.push((0, a, weyl_monomial(a, true, kappa.re)?));
    }
    let mut hb = Vec::new();
    for a in 1..=3 {
        let c = mono.iter().find(|m| m.0 == a && m.1 == 0).unwrap().2.value();
        hb.push((a, hecke_bochner(a, c)?));
    }
    Ok(Calibration {
        weyl_plancherel: weyl_plancherel()?,
        weyl_correspondence_unit: kappa,
        weyl_monomial: mono,
        hecke_bochner: hb,
        heat_mass: heat_mass()?,
        fundamental: fundamental()?,
        resolvent_kernel: resolvent_kernel()?,
    })
}

impl Calibration {
    /// The registry these fits define. Mixed `c(a,b)` (distinct axes) are the
    /// products `c(a,0) c(0,b)`, since `ℱ` and `W` factor over axes.
    pub fn to_registry(&self) -> Registry {
        let pure = |a: usize, b: usize| self.weyl_monomial.iter().find(|m| m.0 == a && m.1 == b).unwrap().2.value();
        let mut mono: Vec<Bidegree> = Vec::new();
        for a in 0..=4usize {
            for b in 0..=4usize {
                let v = match (a, b) {
                    (0, 0) => continue,
                    (_, 0) | (0, _) => pure(a, b),
                    _ if a <= 2 && b <= 2 => pure(a, 0) * pure(0, b),
                    _ => continue,
                };
                mono.push(Bidegree { a, b, re: v.re, im: v.im });
            }
        }
        let worst = [self.weyl_plancherel, self.weyl_correspondence_unit, self.heat_mass, self.fundamental, self.resolvent_kernel]
            .iter()
            .chain(self.weyl_monomial.iter().map(|m| &m.2))
            .chain(self.hecke_bochner.iter().map(|m| &m.1))
            .map(|f| f.spread)
            .fold(0.0, f64::max);
        Registry {
            version: 1,
            provenance: format!(
                "fitted by constants::calibrate at n = 1, lambda = 1 from raw quadrature; largest relative sample spread {worst:.1e}"
            ),
            weyl_plancherel: self.weyl_plancherel.re,
            weyl_correspondence_unit: self.weyl_correspondence_unit.re,
            weyl_monomial: mono,
            hecke_bochner: self.hecke_bochner.iter().map(|(a, f)| Bidegree { a: *a, b: 0, re: f.re, im: f.im }).collect(),
            heat_mass: self.heat_mass.re,
            fundamental: self.fundamental.re,
            resolvent_kernel: self.resolvent_kernel.re,
        }
    }
}
