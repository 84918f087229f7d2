//! The contracted groups `H¹_ε`: `ℂ × ℝ` with
//! `(z,t)(w,s) = (z + w, t + s + (ε/2) Im(z w̄))`, `ε = 0` being abelian.
//!
//! Kernels follow the left-kernel convention `K ∗ f` of the right-invariant
//! sublaplacian. After Fourier transform in `t` (dual variable `μ`) the
//! resolvent `(γ² + L̃_ε)^{−1/2}` acts on each slice as `(γ² + L(εμ))^{−1/2}`;
//! for Gaussian inputs that slice is summed exactly in the Laguerre basis, and
//! the `ε → 0` limit `(γ² − Δ)^{−1/2}` is computed separately by a Hankel
//! transform. Kernel tables (`K_γ^λ`, heat kernel) are quadrature-evaluated.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::constants::registry;
use crate::error::{ensure, Error, Result};
use crate::geller::power_series_coeff;
use crate::laguerre::KernelValue;
use crate::quadrature::{gauss_legendre, integrate_half_line, integrate_split};
use crate::report::{strictly_decreasing, successive_ratios, ExperimentReport, Table};
use crate::C64;

/// `Q = 2n + 2`.
pub const fn homogeneous_dimension(n: usize) -> usize {
    2 * n + 2
}

/// A point `(z, t)` of `H¹_ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub z: C64,
    pub t: f64,
}

impl GroupElement {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        GroupElement { z: C64::new(x, y), t }
    }
    pub fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }
    /// `(−z, −t)`, the inverse for every `ε`.
    pub fn inverse(&self) -> Self {
        GroupElement { z: -self.z, t: -self.t }
    }
    pub fn is_finite(&self) -> bool {
        self.z.re.is_finite() && self.z.im.is_finite() && self.t.is_finite()
    }
    /// `δ_r(z, t) = (rz, r²t)`.
    pub fn dilate(&self, r: f64) -> Result<Self> {
        ensure(r > 0.0, || format!("dilation needs r > 0, got {r}"))?;
        Ok(GroupElement { z: self.z * r, t: self.t * r * r })
    }
}

/// `Im(z w̄)`
fn twist(z: C64, w: C64) -> f64 {
    z.im * w.re - z.re * w.im
}

pub fn group_product_eps(g: GroupElement, h: GroupElement, eps: f64) -> GroupElement {
    GroupElement { z: g.z + h.z, t: g.t + h.t + 0.5 * eps * twist(g.z, h.z) }
}

/// Real samples on `[−R, R]² × [−R_t, R_t]`, axes `(x, y, t)` with `t` fastest.
/// Nodes are `−R + i·2R/N`, so the origin is a node for even `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction3D {
    pub extent: f64,
    pub extent_t: f64,
    pub points_per_axis: usize,
    pub samples: Vec<f64>,
}

impl GridFunction3D {
    pub fn zeros(extent: f64, extent_t: f64, points_per_axis: usize) -> Result<Self> {
        ensure(extent > 0.0 && extent_t > 0.0 && extent.is_finite() && extent_t.is_finite(), || {
            "extents must be positive".into()
        })?;
        ensure(points_per_axis >= 2 && points_per_axis % 2 == 0, || "points_per_axis must be even and ≥ 2".into())?;
        Ok(GridFunction3D { extent, extent_t, points_per_axis, samples: vec![0.0; points_per_axis.pow(3)] })
    }

    pub fn sample<F: Fn(GroupElement) -> f64 + Sync>(extent: f64, extent_t: f64, points_per_axis: usize, f: F) -> Result<Self> {
        let mut g = Self::zeros(extent, extent_t, points_per_axis)?;
        let pts: Vec<GroupElement> = (0..g.samples.len()).map(|i| g.point(i)).collect();
        g.samples = pts.par_iter().map(|&p| f(p)).collect();
        g.check_finite()?;
        Ok(g)
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.samples.iter().position(|v| !v.is_finite()) {
            Some(i) => Err(Error::NonFinite(format!("grid sample {:?}", self.point(i)))),
            None => Ok(()),
        }
    }
    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.points_per_axis as f64
    }
    pub fn spacing_t(&self) -> f64 {
        2.0 * self.extent_t / self.points_per_axis as f64
    }
    pub fn coord(&self, i: usize) -> f64 {
        -self.extent + i as f64 * self.spacing()
    }
    pub fn coord_t(&self, i: usize) -> f64 {
        -self.extent_t + i as f64 * self.spacing_t()
    }
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(2) * self.spacing_t()
    }
    pub fn index(&self, ix: usize, iy: usize, it: usize) -> usize {
        (ix * self.points_per_axis + iy) * self.points_per_axis + it
    }
    pub fn point(&self, flat: usize) -> GroupElement {
        let m = self.points_per_axis;
        GroupElement::new(self.coord(flat / (m * m)), self.coord((flat / m) % m), self.coord_t(flat % m))
    }
    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.extent != other.extent || self.extent_t != other.extent_t || self.points_per_axis != other.points_per_axis {
            return Err(Error::GridMismatch(format!(
                "({}, {}, {}) vs ({}, {}, {})",
                self.extent, self.extent_t, self.points_per_axis, other.extent, other.extent_t, other.points_per_axis
            )));
        }
        Ok(())
    }

    /// Trilinear interpolation; zero outside the sampled box.
    pub fn interpolate(&self, p: GroupElement) -> f64 {
        let m = self.points_per_axis;
        let locate = |v: f64, lo: f64, h: f64| -> Option<(usize, f64)> {
            let u = (v - lo) / h;
            if !(u >= 0.0) || u > (m - 1) as f64 {
                return None;
            }
            let i = (u.floor() as usize).min(m - 2);
            Some((i, u - i as f64))
        };
        let (Some((ix, fx)), Some((iy, fy)), Some((it, ft))) = (
            locate(p.z.re, -self.extent, self.spacing()),
            locate(p.z.im, -self.extent, self.spacing()),
            locate(p.t, -self.extent_t, self.spacing_t()),
        ) else {
            return 0.0;
        };
        let mut acc = 0.0;
        for (dx, wx) in [(0, 1.0 - fx), (1, fx)] {
            for (dy, wy) in [(0, 1.0 - fy), (1, fy)] {
                for (dt, wt) in [(0, 1.0 - ft), (1, ft)] {
                    let w = wx * wy * wt;
                    if w != 0.0 {
                        acc += w * self.samples[self.index(ix + dx, iy + dy, it + dt)];
                    }
                }
            }
        }
        acc
    }

    pub fn l1_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.abs()).sum::<f64>() * self.cell_volume()
    }
    pub fn integral(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.cell_volume()
    }
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

/// `(F ∗_ε G)(p) = ∫ F(p·q^{−1}) G(q) dq`, quadrature over the nodes of `g`.
pub fn convolution_eps_at<F: Fn(GroupElement) -> f64>(f: &F, g: &GridFunction3D, eps: f64, p: GroupElement) -> f64 {
    let mut acc = 0.0;
    for (i, &gv) in g.samples.iter().enumerate() {
        if gv != 0.0 {
            acc += f(group_product_eps(p, g.point(i).inverse(), eps)) * gv;
        }
    }
    acc * g.cell_volume()
}

/// Group convolution on a common grid; `F` is interpolated trilinearly off the nodes.
pub fn convolution_eps(f: &GridFunction3D, g: &GridFunction3D, eps: f64) -> Result<GridFunction3D> {
    f.same_grid(g)?;
    ensure(eps >= 0.0 && eps.is_finite(), || format!("ε must be ≥ 0, got {eps}"))?;
    let mut out = GridFunction3D::zeros(f.extent, f.extent_t, f.points_per_axis)?;
    let interp = |q: GroupElement| f.interpolate(q);
    out.samples = (0..out.samples.len())
        .into_par_iter()
        .map(|i| convolution_eps_at(&interp, g, eps, out.point(i)))
        .collect();
    Ok(out)
}

/// Pullback `F ∘ δ_r` re-sampled on the same grid.
pub fn nonisotropic_dilation(f: &GridFunction3D, r: f64) -> Result<GridFunction3D> {
    ensure(r > 0.0, || format!("dilation needs r > 0, got {r}"))?;
    let mut out = f.clone();
    for i in 0..out.samples.len() {
        out.samples[i] = f.interpolate(out.point(i).dilate(r)?);
    }
    Ok(out)
}

/// Which kernel on `H¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HeisenbergKernel {
    /// `p_t(w, s)`
    Heat { t: f64 },
    /// `K_γ^λ(w)` when `lambda` is set, the full `K_γ(w, s)` otherwise.
    BesselGamma { gamma: f64, lambda: Option<f64> },
    /// `K_γ^0(w)`, the kernel of `(γ² − Δ)^{−1/2}` on `ℂ`.
    EuclidLimit { gamma: f64 },
}

const REL_TOL: f64 = 1e-10;

/// `(λ/sinh tλ) e^{−(λ/4) coth(tλ) r²}`, even in `λ`, with its `λ → 0` limit.
fn heat_slice(t: f64, lambda: f64, r2: f64) -> f64 {
    let a = (t * lambda).abs();
    if a < 1e-8 {
        (1.0 / t) * (-r2 / (4.0 * t)).exp()
    } else {
        lambda.abs() / a.sinh() * (-0.25 * lambda.abs() / a.tanh() * r2).exp()
    }
}

/// `∫_0^∞ cos(λs) h(λ) dλ` for an exponentially decaying, non-oscillating `h`.
///
/// The range is cut where `h` drops below `1e−16` of its peak; the discarded
/// tail is bounded by the last decade's exponential decay and reported.
fn cosine_transform<H: Fn(f64) -> f64>(h: H, s: f64) -> KernelValue {
    let mut peak: f64 = 0.0;
    let mut cut = 1.0;
    loop {
        let v = h(cut).abs();
        peak = peak.max(v).max(h(0.0).abs());
        if v < 1e-16 * peak || cut > 1e6 {
            break;
        }
        cut *= 1.5;
    }
    // tail ≤ h(cut) / rate, rate from the last step
    let rate = ((h(cut / 1.5).abs() + 1e-300).ln() - (h(cut).abs() + 1e-300).ln()) / (cut - cut / 1.5);
    let tail = if rate > 0.0 { h(cut).abs() / rate } else { f64::INFINITY };
    let period = if s == 0.0 { cut } else { (PI / s.abs()).min(cut) };
    let pieces = ((cut / period).ceil() as usize).clamp(4, 4000);
    let breaks: Vec<f64> = (0..=pieces).map(|i| cut * i as f64 / pieces as f64).collect();
    let e = integrate_split(&|l: f64| (l * s).cos() * h(l), &breaks, REL_TOL, 1e-300);
    let scale = e.value.abs().max(1e-300);
    KernelValue { value: e.value, rel_err_est: (e.error + tail) / scale, converged: e.converged && tail <= 1e-8 * scale }
}

/// `p_t(w, s) = π^{−1} (4π)^{−1} ∫_0^∞ cos(λs) (λ/sinh tλ) e^{−(λ/4)coth(tλ)|w|²} dλ`.
pub fn heisenberg_heat(t: f64, w: C64, s: f64) -> Result<KernelValue> {
    ensure(t > 0.0 && t.is_finite(), || format!("heat kernel needs t > 0, got {t}"))?;
    let r2 = w.norm_sqr();
    let mut v = cosine_transform(|l| heat_slice(t, l, r2), s);
    v.value /= 4.0 * PI * PI;
    Ok(v)
}

/// `K_γ^λ(|w|) = C_K ∫_0^∞ η^{−1/2} e^{−ηγ²} (λ/sinh λη) e^{−(λ/4)coth(λη)|w|²} dη`
/// with `C_K` from the registry.
pub fn resolvent_slice(gamma: f64, lambda: f64, r2: f64) -> Result<KernelValue> {
    ensure(gamma > 0.0 && gamma.is_finite(), || format!("γ must be positive, got {gamma}"))?;
    ensure(lambda.is_finite(), || "λ must be finite".into())?;
    if r2 <= 0.0 {
        return Err(Error::Domain("K_γ^λ is singular at w = 0".into()));
    }
    let e = integrate_half_line(|eta| eta.powf(-0.5) * (-eta * gamma * gamma).exp() * heat_slice(eta, lambda, r2), 1e-12);
    let c = registry().resolvent_kernel;
    Ok(KernelValue {
        value: c * e.value,
        rel_err_est: e.error / e.value.abs().max(1e-300),
        converged: e.converged,
    })
}

/// Any [`HeisenbergKernel`] at `(w, s)`.
pub fn heisenberg_kernel_eval(kind: HeisenbergKernel, w: C64, s: f64) -> Result<KernelValue> {
    ensure(w.re.is_finite() && w.im.is_finite() && s.is_finite(), || "non-finite point".into())?;
    match kind {
        HeisenbergKernel::Heat { t } => heisenberg_heat(t, w, s),
        HeisenbergKernel::BesselGamma { gamma, lambda: Some(l) } => resolvent_slice(gamma, l, w.norm_sqr()),
        HeisenbergKernel::BesselGamma { gamma, lambda: None } => {
            let r2 = w.norm_sqr();
            resolvent_slice(gamma, 1.0, r2)?;
            let mut v = cosine_transform(|l| resolvent_slice(gamma, l, r2).map(|k| k.value).unwrap_or(f64::NAN), s);
            v.value /= PI;
            if !v.value.is_finite() {
                return Err(Error::NonFinite("K_γ(w, s) quadrature".into()));
            }
            Ok(v)
        }
        HeisenbergKernel::EuclidLimit { gamma } => resolvent_slice(gamma, 0.0, w.norm_sqr()),
    }
}

/// `J_n(x)` by the periodic trapezoidal rule on Bessel's integral.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    let m = (x.abs() as usize + 48 + n as usize).next_multiple_of(2);
    let mut acc = 0.0;
    for j in 0..m {
        let th = 2.0 * PI * j as f64 / m as f64;
        acc += (n as f64 * th - x * th.sin()).cos();
    }
    acc / m as f64
}

/// `2π ∫_0^∞ K_γ^0(r) J_0(ρr) r dr / (γ² + ρ²)^{−1/2}` for each `ρ`.
///
/// The ratios agree when `K_γ^0` is a multiple of the `(γ² − Δ)^{−1/2}` kernel; with
/// the calibrated `C_K` they are 1.
pub fn fourier_identity_ratios(gamma: f64, rhos: &[f64]) -> Result<Vec<f64>> {
    ensure(gamma > 0.0, || "γ must be positive".into())?;
    let rmax = 45.0 / gamma;
    let panels = (rmax * 2.0).ceil() as usize;
    let (x, w) = gauss_legendre(20);
    let h = rmax / panels as f64;
    let mut nodes = Vec::new();
    for p in 0..panels {
        for (xi, wi) in x.iter().zip(&w) {
            let r = h * (p as f64 + 0.5 * (xi + 1.0));
            nodes.push((r, 0.5 * h * wi));
        }
    }
    let table: Vec<f64> = nodes
        .par_iter()
        .map(|&(r, _)| resolvent_slice(gamma, 0.0, r * r).map(|k| k.value))
        .collect::<Result<_>>()?;
    Ok(rhos
        .iter()
        .map(|&rho| {
            let ft: f64 = nodes.iter().zip(&table).map(|(&(r, wr), k)| wr * k * bessel_j(0, rho * r) * r).sum::<f64>() * 2.0 * PI;
            ft * (gamma * gamma + rho * rho).sqrt()
        })
        .collect())
}

/// `max |p_η(√ε w, εs) − ε^{−2} p_{η/ε}(w, s)| / |ε^{−2} p_{η/ε}(w, s)|` over the samples.
pub fn heat_homogeneity_defect(eta: f64, eps: &[f64], samples: &[(C64, f64)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &e in eps {
        ensure(e > 0.0, || "ε must be positive".into())?;
        for &(w, s) in samples {
            let lhs = heisenberg_heat(eta, w * e.sqrt(), e * s)?.value;
            let rhs = heisenberg_heat(eta / e, w, s)?.value / (e * e);
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1e-300));
        }
    }
    Ok(worst)
}

/// Input `f(z, t) = e^{−|z|²/(2σ²)} e^{−t²/(2τ²)}` of the convergence experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianInput {
    pub sigma: f64,
    pub tau: f64,
}

impl Default for GaussianInput {
    fn default() -> Self {
        GaussianInput { sigma: 1.0, tau: 1.0 }
    }
}

impl GaussianInput {
    pub fn value(&self, p: GroupElement) -> f64 {
        (-p.z.norm_sqr() / (2.0 * self.sigma * self.sigma) - p.t * p.t / (2.0 * self.tau * self.tau)).exp()
    }
    /// `∫ f(z, t) e^{−iμt} dt` divided by the `z`-profile.
    fn t_fourier(&self, mu: f64) -> f64 {
        (2.0 * PI).sqrt() * self.tau * (-0.5 * self.tau * self.tau * mu * mu).exp()
    }
}

/// `(γ² + L(λ))^{−1/2}` applied to `e^{−|z|²/(2σ²)}`, and its radial derivative, at each radius.
///
/// Expands the Gaussian as `(1 − w) Σ w^k φ_k^λ` with `w = (2 − |λ|σ²)/(2 + |λ|σ²)`,
/// `φ_k^λ(z) = L_k(|λ||z|²/2) e^{−|λ||z|²/4}`, and divides by `√(γ² + (2k+1)|λ|)`.
pub fn resolvent_profile(gamma: f64, lambda: f64, sigma: f64, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    ensure(lambda != 0.0 && lambda.is_finite(), || "λ must be finite and nonzero".into())?;
    ensure(gamma >= 0.0 && sigma > 0.0, || "γ ≥ 0 and σ > 0 required".into())?;
    let l = lambda.abs();
    let w = (2.0 - l * sigma * sigma) / (2.0 + l * sigma * sigma);
    let terms = if w == 0.0 { 1 } else { ((1e-17f64.ln() / w.abs().ln()).ceil() as usize + 2).min(5_000_000) };
    let mults: Vec<f64> = (0..terms).map(|k| (gamma * gamma + (2 * k + 1) as f64 * l).powf(-0.5)).collect();
    Ok(radii
        .iter()
        .map(|&r| {
            let x = 0.5 * l * r * r;
            let damp = (-0.5 * x).exp();
            // L_k(x) e^{−x/2} by the three-term recurrence; S_k = Σ_{j<k} L_j e^{−x/2}
            let (mut prev, mut cur) = (0.0, damp);
            let (mut s, mut ds, mut wk, mut partial) = (0.0, 0.0, 1.0, 0.0);
            for (k, m) in mults.iter().enumerate() {
                s += wk * m * cur;
                ds += wk * m * (-partial - 0.5 * cur);
                partial += cur;
                let kf = k as f64;
                let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
                prev = cur;
                cur = next;
                wk *= w;
            }
            ((1.0 - w) * s, (1.0 - w) * ds * l * r)
        })
        .collect())
}

fn gl_panels(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        for (xi, wi) in x.iter().zip(&w) {
            out.push((a + h * (p as f64 + 0.5 * (xi + 1.0)), 0.5 * h * wi));
        }
    }
    out
}

/// `(γ² − Δ)^{−1/2} e^{−|z|²/(2σ²)}` and its radial derivative by Hankel transform:
/// `σ² ∫ e^{−σ²ρ²/2} (γ² + ρ²)^{−1/2} J_0(ρr) ρ dρ`.
pub fn euclidean_profile(gamma: f64, sigma: f64, radii: &[f64]) -> Vec<(f64, f64)> {
    let rho_max = 9.0 / sigma;
    let nodes = gl_panels(0.0, rho_max, 36, 20);
    radii
        .iter()
        .map(|&r| {
            let (mut v, mut dv) = (0.0, 0.0);
            for &(rho, w) in &nodes {
                let base = w * sigma * sigma * (-0.5 * sigma * sigma * rho * rho).exp() / (gamma * gamma + rho * rho).sqrt() * rho;
                v += base * bessel_j(0, rho * r);
                dv -= base * rho * bessel_j(1, rho * r);
            }
            (v, dv)
        })
        .collect()
}

/// Which quantity [`convergence_experiment`] tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ConvergenceMode {
    /// `(γ² + L̃_ε)^{−1/2} f` against `(γ² − Δ)^{−1/2} f`, in L¹ over the grid.
    Resolvent,
    /// `X̃_j^ε (γ² + L̃_ε)^{−1/2} f` (`j = 1`) or `Ỹ^ε` (`j = 2`) against the
    /// Euclidean derivative, pointwise.
    RieszField { j: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceConfig {
    pub gamma: f64,
    pub eps: Vec<f64>,
    pub input: GaussianInput,
    pub extent: f64,
    pub extent_t: f64,
    pub grid_n: usize,
    /// Riesz-field sample points `(x, y, t)`.
    pub points: Vec<[f64; 3]>,
    /// Upper end and GL panels of the `μ` quadrature.
    pub mu_max: f64,
    pub mu_panels: usize,
    /// Per-halving ratio bound, an empirical rate.
    pub ratio_bound: f64,
    /// Also run the kernel identities (Fourier identity of `K_γ^0`, heat homogeneity).
    pub kernel_checks: bool,
    pub tol_fourier: f64,
    pub tol_homogeneity: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            gamma: 1.0,
            eps: vec![1.0, 0.5, 0.25, 0.125],
            input: GaussianInput::default(),
            extent: 6.0,
            extent_t: 8.0,
            grid_n: 32,
            points: default_field_points(),
            mu_max: 12.0,
            mu_panels: 24,
            ratio_bound: 0.7,
            kernel_checks: true,
            tol_fourier: 1e-4,
            tol_homogeneity: 1e-6,
        }
    }
}

pub fn default_field_points() -> Vec<[f64; 3]> {
    vec![[0.5, 0.3, 0.2], [1.0, -0.5, 0.5], [-0.8, 1.2, -0.4], [1.5, 0.7, 1.0], [0.3, -1.1, -0.8]]
}

fn validate(cfg: &ConvergenceConfig) -> Result<()> {
    ensure(cfg.gamma > 0.0, || "γ must be positive".into())?;
    ensure(!cfg.eps.is_empty(), || "empty ε sequence".into())?;
    ensure(cfg.eps.iter().all(|&e| e > 0.0) && cfg.eps.windows(2).all(|w| w[1] < w[0]), || {
        "ε sequence must be positive and decreasing".into()
    })?;
    ensure(cfg.input.sigma > 0.0 && cfg.input.tau > 0.0, || "input widths must be positive".into())?;
    ensure(cfg.mu_max > 0.0 && cfg.mu_panels > 0, || "μ quadrature must be non-empty".into())?;
    ensure(cfg.grid_n >= 2 && cfg.grid_n % 2 == 0, || "grid_n must be even".into())
}

/// Distinct radii of the `(x, y)` nodes and each node's index into them.
fn radial_index(g: &GridFunction3D) -> (Vec<f64>, Vec<usize>) {
    let m = g.points_per_axis;
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let centre = m / 2;
    let mut map = std::collections::BTreeMap::new();
    let mut idx = Vec::with_capacity(m * m);
    for ix in 0..m {
        for iy in 0..m {
            let (a, b) = ((ix as i64 - centre as i64).unsigned_abs() as usize, (iy as i64 - centre as i64).unsigned_abs() as usize);
            let key = (a.max(b), a.min(b));
            let next = map.len();
            let k = *map.entry(key).or_insert_with(|| {
                keys.push(key);
                next
            });
            idx.push(k);
        }
    }
    let h = g.spacing();
    (keys.iter().map(|&(a, b)| h * ((a * a + b * b) as f64).sqrt()).collect(), idx)
}

/// `ε`-sequence experiment of the `H¹_ε` contraction.
pub fn convergence_experiment(mode: ConvergenceMode, cfg: &ConvergenceConfig) -> Result<ExperimentReport> {
    validate(cfg)?;
    let mu_nodes = gl_panels(0.0, cfg.mu_max, cfg.mu_panels, 8);
    let inp = cfg.input;
    // u(z,t) = (1/π) ∫_0^∞ f̂_t(μ) [cos(μt) U + ...] dμ, f̂_t even
    let mut rep = ExperimentReport::new(match mode {
        ConvergenceMode::Resolvent => "heisenberg-resolvent",
        ConvergenceMode::RieszField { .. } => "heisenberg-riesz-field",
    });
    rep.param("gamma", cfg.gamma).param("eps", cfg.eps.clone()).param("sigma", inp.sigma).param("tau", inp.tau);
    let errors: Vec<f64> = match mode {
        ConvergenceMode::Resolvent => {
            rep.param("mode", "resolvent").param("grid_n", cfg.grid_n).param("extent", cfg.extent).param("extent_t", cfg.extent_t);
            let grid = GridFunction3D::zeros(cfg.extent, cfg.extent_t, cfg.grid_n)?;
            let (radii, ridx) = radial_index(&grid);
            let ts: Vec<f64> = (0..cfg.grid_n).map(|i| grid.coord_t(i)).collect();
            let limit = euclidean_profile(cfg.gamma, inp.sigma, &radii);
            let mut errs = Vec::new();
            let mut table = Table::new(&["eps", "l1_error", "sup_error"]);
            for &e in &cfg.eps {
                // slab[r][t]
                let slices: Vec<Vec<(f64, f64)>> = mu_nodes
                    .par_iter()
                    .map(|&(mu, _)| resolvent_profile(cfg.gamma, e * mu, inp.sigma, &radii))
                    .collect::<Result<_>>()?;
                let mut l1 = 0.0;
                let mut sup: f64 = 0.0;
                let mut counts = vec![0usize; radii.len()];
                for &k in &ridx {
                    counts[k] += 1;
                }
                for (ri, _) in radii.iter().enumerate() {
                    for &t in &ts {
                        let mut u = 0.0;
                        for (s, &(mu, wmu)) in slices.iter().zip(&mu_nodes) {
                            u += wmu * inp.t_fourier(mu) * (mu * t).cos() * s[ri].0;
                        }
                        u /= PI;
                        let u0 = (-t * t / (2.0 * inp.tau * inp.tau)).exp() * limit[ri].0;
                        let d = (u - u0).abs();
                        l1 += d * counts[ri] as f64;
                        sup = sup.max(d);
                    }
                }
                l1 *= grid.cell_volume();
                table.push(vec![json!(e), json!(l1), json!(sup)]);
                rep.metric(&format!("l1_error_eps_{e}"), l1);
                errs.push(l1);
            }
            rep.table("errors", table);
            errs
        }
        ConvergenceMode::RieszField { j } => {
            ensure(j == 1 || j == 2, || format!("field index must be 1 or 2, got {j}"))?;
            ensure(!cfg.points.is_empty(), || "no sample points".into())?;
            rep.param("mode", format!("riesz_field_{j}")).param("points", cfg.points.iter().map(|p| p.to_vec()).collect::<Vec<_>>());
            let radii: Vec<f64> = cfg.points.iter().map(|p| p[0].hypot(p[1])).collect();
            let limit = euclidean_profile(cfg.gamma, inp.sigma, &radii);
            let unit = |p: &[f64; 3], r: f64| if r == 0.0 { 0.0 } else { p[j - 1] / r };
            let reference: Vec<f64> = cfg
                .points
                .iter()
                .zip(&radii)
                .zip(&limit)
                .map(|((p, &r), l)| (-p[2] * p[2] / (2.0 * inp.tau * inp.tau)).exp() * l.1 * unit(p, r))
                .collect();
            let mut table = Table::new(&["eps", "point_index", "value", "limit", "abs_err"]);
            let mut per_point = vec![Vec::new(); cfg.points.len()];
            for &e in &cfg.eps {
                let slices: Vec<Vec<(f64, f64)>> = mu_nodes
                    .par_iter()
                    .map(|&(mu, _)| resolvent_profile(cfg.gamma, e * mu, inp.sigma, &radii))
                    .collect::<Result<_>>()?;
                for (pi, p) in cfg.points.iter().enumerate() {
                    let (r, t) = (radii[pi], p[2]);
                    // X̃ = ∂_x − (ε/2) y ∂_t,  Ỹ = ∂_y + (ε/2) x ∂_t
                    let other = if j == 1 { p[1] } else { -p[0] };
                    let mut v = 0.0;
                    for (s, &(mu, wmu)) in slices.iter().zip(&mu_nodes) {
                        let (u, du) = s[pi];
                        v += wmu * inp.t_fourier(mu) * ((mu * t).cos() * du * unit(p, r) + 0.5 * e * other * mu * (mu * t).sin() * u);
                    }
                    v /= PI;
                    let err = (v - reference[pi]).abs();
                    table.push(vec![json!(e), json!(pi), json!(v), json!(reference[pi]), json!(err)]);
                    per_point[pi].push(err);
                }
            }
            rep.table("pointwise", table);
            let mut all = true;
            for (pi, errs) in per_point.iter().enumerate() {
                let ok = errs.iter().all(|&v| v == 0.0) || strictly_decreasing(errs);
                rep.metric(&format!("final_error_point_{pi}"), *errs.last().unwrap());
                all &= ok;
            }
            rep.check_holds("pointwise_errors_strictly_decreasing", all);
            // worst error per ε drives the ratio metric
            (0..cfg.eps.len()).map(|k| per_point.iter().map(|v| v[k]).fold(0.0, f64::max)).collect()
        }
    };
    let ratios = successive_ratios(&errors);
    rep.param("errors", errors.clone()).param("ratios", ratios.clone());
    let worst_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    rep.metric("worst_halving_ratio", worst_ratio);
    if mode == ConvergenceMode::Resolvent {
        rep.check_holds("errors_strictly_decreasing", strictly_decreasing(&errors));
        rep.check_below("empirical_halving_ratio", worst_ratio, cfg.ratio_bound);
        rep.note("the halving ratio is an observed rate; the convergence statement carries no rate");
    }
    if cfg.kernel_checks {
        let rhos = [0.0, 0.5, 1.0, 2.0, 4.0];
        let ratios = fourier_identity_ratios(cfg.gamma, &rhos)?;
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let spread = ratios.iter().map(|r| (r / mean - 1.0).abs()).fold(0.0, f64::max);
        rep.metric("fourier_identity_ratio_mean", mean);
        rep.check_below("fourier_identity_ratio_spread", spread, cfg.tol_fourier);
        let samples = [(C64::new(0.5, 0.2), 0.1), (C64::new(1.0, -0.7), 0.4), (C64::new(-0.3, 0.9), -0.6)];
        let defect = heat_homogeneity_defect(1.0, &[0.25, 1.0], &samples)?;
        rep.check_below("heat_homogeneity_defect", defect, cfg.tol_homogeneity);
    }
    Ok(rep)
}

/// `sup_x |√(x/(γ²+x)) − (1 − Σ_{k≤terms} c_k γ^{2k} (γ²+x)^{−k})|` over the grid.
pub fn neumann_identity_check(gamma: f64, x_grid: &[f64], terms: usize, tol: f64) -> Result<ExperimentReport> {
    ensure(gamma > 0.0, || "γ must be positive".into())?;
    ensure(x_grid.iter().all(|&x| x > 0.0 && x.is_finite()), || "x grid must lie in (0, ∞)".into())?;
    let c: Vec<f64> = (1..=terms).map(power_series_coeff).collect::<Result<_>>()?;
    let mut table = Table::new(&["x", "lhs", "series", "abs_err"]);
    let mut worst: f64 = 0.0;
    for &x in x_grid {
        let q = gamma * gamma / (gamma * gamma + x);
        let lhs = (x / (gamma * gamma + x)).sqrt();
        let (mut s, mut qk) = (0.0, 1.0);
        for ck in &c {
            qk *= q;
            s += ck * qk;
        }
        let err = (lhs - (1.0 - s)).abs();
        worst = worst.max(err);
        table.push(vec![json!(x), json!(lhs), json!(1.0 - s), json!(err)]);
    }
    let mut rep = ExperimentReport::new("neumann-identity");
    rep.param("gamma", gamma).param("terms", terms).param("points", x_grid.len());
    rep.metric("sup_error", worst);
    rep.table("identity", table);
    rep.check_below("sup_error", worst, tol);
    Ok(rep)
}

/// Log-spaced grid on `[a, b]`.
pub fn log_grid(a: f64, b: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![a];
    }
    (0..points).map(|i| a * (b / a).powf(i as f64 / (points - 1) as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_sign() {
        let g = group_product_eps(GroupElement::new(1.0, 0.0, 0.0), GroupElement::new(0.0, 1.0, 0.0), 1.0);
        assert_eq!(g.t, -0.5);
    }

    #[test]
    fn bessel_small_values() {
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_j(1, 2.5) - 0.497_094_102_464_274_3).abs() < 1e-14);
    }
}
