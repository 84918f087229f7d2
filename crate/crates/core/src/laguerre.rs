//! The special Hermite operator `L(λ)`: Laguerre functions and the spectral
//! projections they generate, heat/Bessel/fundamental kernels, L¹ witnesses
//! and first-order Laguerre-Sobolev norms.
//!
//! Kernel order matters for `∗_λ`: with the twisted convolution of
//! [`crate::weyl::twisted_convolution`], `φ_{k,λ} ∗_λ f` is the `L(λ)`
//! projection, while `f ∗_λ φ_{k,λ} = φ_{k,λ} ∗_{−λ} f` projects for `L(−λ)`.
//! The same holds for the heat semigroup: `e^{−tL(λ)} f = p_t^λ ∗_λ f`.

use nalgebra::DMatrix;
use rustfft::FftPlanner;
use serde::Serialize;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::constants::registry;
use crate::error::{ensure, Error, Result};
use crate::quadrature::{gauss_legendre, integrate_half_line};
use crate::weyl::{twisted_convolution, GridFunction, SmoothFunction};
use crate::C64;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Type index `ν` and scaling `λ` of the Laguerre functions `φ^ν_{k,λ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaguerreSpec {
    pub nu: f64,
    pub lambda: f64,
}

impl LaguerreSpec {
    pub fn new(nu: f64, lambda: f64) -> Result<Self> {
        ensure(nu > -1.0, || format!("Laguerre type must exceed −1, got {nu}"))?;
        ensure(lambda != 0.0 && lambda.is_finite(), || "λ must be finite and nonzero".into())?;
        Ok(LaguerreSpec { nu, lambda })
    }
    /// `ν = n − 1`.
    pub fn for_dim(n: usize, lambda: f64) -> Result<Self> {
        Self::new(n as f64 - 1.0, lambda)
    }
}

/// `L_k^ν(x)` by the three-term recurrence; `L_k^ν = 0` for negative `k`.
pub fn laguerre_poly(k: i64, nu: f64, x: f64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (1.0, 1.0 + nu - x);
    if k == 0 {
        return prev;
    }
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + nu - x) * cur - (j + nu) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `φ^ν_{k,λ}(z) = L_k^ν(½|λ||z|²) e^{−¼|λ||z|²}`.
pub fn laguerre_eval(spec: &LaguerreSpec, k: usize, z: &[C64]) -> Result<f64> {
    if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite(format!("{z:?}")));
    }
    let r2: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    Ok(laguerre_radial(spec, k, r2))
}

fn laguerre_radial(spec: &LaguerreSpec, k: usize, r2: f64) -> f64 {
    let c = spec.lambda.abs();
    laguerre_poly(k as i64, spec.nu, 0.5 * c * r2) * (-0.25 * c * r2).exp()
}

/// `φ^ν_{k,λ}` on `ℂⁿ` as an analytic evaluator (value, gradient, Hessian).
#[derive(Debug, Clone, Copy)]
pub struct LaguerreFunction {
    pub n: usize,
    pub k: usize,
    pub spec: LaguerreSpec,
}

impl LaguerreFunction {
    /// The `L(λ)` eigenfunction `φ^{n−1}_{k,λ}`.
    pub fn new(n: usize, k: usize, lambda: f64) -> Result<Self> {
        Ok(LaguerreFunction { n, k, spec: LaguerreSpec::for_dim(n, lambda)? })
    }
    /// `g(ρ)`, `g'(ρ)`, `g''(ρ)` for `ρ = |z|²`.
    fn radial_derivs(&self, rho: f64) -> (f64, f64, f64) {
        let c = self.spec.lambda.abs();
        let (k, nu) = (self.k as i64, self.spec.nu);
        let u = 0.5 * c * rho;
        let e = (-0.25 * c * rho).exp();
        let l0 = laguerre_poly(k, nu, u);
        let l1 = -laguerre_poly(k - 1, nu + 1.0, u);
        let l2 = laguerre_poly(k - 2, nu + 2.0, u);
        let g = l0 * e;
        let g1 = 0.5 * c * l1 * e - 0.25 * c * g;
        let g2 = 0.25 * c * c * l2 * e - 0.25 * c * c * l1 * e + c * c / 16.0 * g;
        (g, g1, g2)
    }
}

impl SmoothFunction for LaguerreFunction {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, z: &[C64]) -> C64 {
        C64::new(laguerre_radial(&self.spec, self.k, z.iter().map(|v| v.norm_sqr()).sum()), 0.0)
    }
    fn gradient(&self, z: &[C64]) -> Vec<(C64, C64)> {
        let (_, g1, _) = self.radial_derivs(z.iter().map(|v| v.norm_sqr()).sum());
        z.iter().map(|v| (C64::new(2.0 * v.re * g1, 0.0), C64::new(2.0 * v.im * g1, 0.0))).collect()
    }
    fn hessian(&self, z: &[C64]) -> Option<DMatrix<C64>> {
        let (_, g1, g2) = self.radial_derivs(z.iter().map(|v| v.norm_sqr()).sum());
        let q: Vec<f64> = z.iter().map(|v| v.re).chain(z.iter().map(|v| v.im)).collect();
        Some(DMatrix::from_fn(q.len(), q.len(), |r, c| {
            C64::new(4.0 * q[r] * q[c] * g2 + if r == c { 2.0 * g1 } else { 0.0 }, 0.0)
        }))
    }
}

/// `Π_k f = (2π)^{−n} |λ|^n φ^{n−1}_{k,λ} ∗_λ f`, the projection of `f` onto
/// the `(2k+n)|λ|` eigenspace of `L(λ)`.
pub fn special_hermite_projection(f: &GridFunction, k: usize, lambda: f64) -> Result<GridFunction> {
    let spec = LaguerreSpec::for_dim(f.n, lambda)?;
    f.check_finite()?;
    let n = f.n;
    let scale = (lambda.abs() / TWO_PI).powi(n as i32);
    let phi = GridFunction::sample(n, f.extent, f.points_per_axis, |z| {
        C64::new(scale * laguerre_radial(&spec, k, z.iter().map(|v| v.norm_sqr()).sum()), 0.0)
    })?;
    twisted_convolution(&phi, f, lambda)
}

/// `L(λ) f = −Δf + ¼λ²|z|² f + iλ Σ (x_j ∂_{y_j} − y_j ∂_{x_j}) f` pointwise.
pub fn twisted_laplacian_apply(f: &dyn SmoothFunction, lambda: f64, points: &[Vec<C64>]) -> Result<Vec<C64>> {
    let n = f.dim();
    points
        .iter()
        .map(|z| {
            ensure(z.len() == n, || "point dimension mismatch".into())?;
            let h = f
                .hessian(z)
                .ok_or_else(|| Error::InvalidArgument("L(λ) needs second derivatives; the evaluator provides none".into()))?;
            let g = f.gradient(z);
            let v = f.value(z);
            let r2: f64 = z.iter().map(|w| w.norm_sqr()).sum();
            let lap: C64 = (0..2 * n).map(|m| h[(m, m)]).sum();
            let rot: C64 = (0..n).map(|j| z[j].re * g[j].1 - z[j].im * g[j].0).sum();
            Ok(-lap + 0.25 * lambda * lambda * r2 * v + C64::new(0.0, lambda) * rot)
        })
        .collect()
}

/// Spectral derivatives along the two axes of an `n = 1` grid, treating the
/// box as periodic. Returns `(∂_x f, ∂_y f, ∂_x² f + ∂_y² f)`.
fn spectral_derivatives(f: &GridFunction) -> Result<(Vec<C64>, Vec<C64>, Vec<C64>)> {
    if f.n != 1 {
        return Err(Error::Unsupported("spectral L(λ) is implemented on ℂ¹ grids".into()));
    }
    let m = f.points_per_axis;
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    let period = 2.0 * f.extent;
    let wave: Vec<f64> = (0..m)
        .map(|i| {
            let j = if i <= m / 2 { i as f64 } else { i as f64 - m as f64 };
            TWO_PI * j / period
        })
        .collect();
    // 2-D transform: rows are x (slow), columns y (fast)
    let mut spec = f.samples.clone();
    fft2(&mut spec, m, &*fwd);
    let nyq = m / 2;
    let mut dx = spec.clone();
    let mut dy = spec.clone();
    let mut lap = spec.clone();
    for ix in 0..m {
        for iy in 0..m {
            let (kx, ky) = (wave[ix], wave[iy]);
            let s = spec[ix * m + iy];
            // the Nyquist mode has no well-defined odd derivative
            dx[ix * m + iy] = if ix == nyq { C64::new(0.0, 0.0) } else { s * C64::new(0.0, kx) };
            dy[ix * m + iy] = if iy == nyq { C64::new(0.0, 0.0) } else { s * C64::new(0.0, ky) };
            lap[ix * m + iy] = -s * (kx * kx + ky * ky);
        }
    }
    let norm = 1.0 / (m * m) as f64;
    for buf in [&mut dx, &mut dy, &mut lap] {
        fft2(buf, m, &*inv);
        for v in buf.iter_mut() {
            *v *= norm;
        }
    }
    Ok((dx, dy, lap))
}

fn fft2(buf: &mut [C64], m: usize, plan: &dyn rustfft::Fft<f64>) {
    for row in buf.chunks_mut(m) {
        plan.process(row);
    }
    let mut col = vec![C64::new(0.0, 0.0); m];
    for c in 0..m {
        for r in 0..m {
            col[r] = buf[r * m + c];
        }
        plan.process(&mut col);
        for r in 0..m {
            buf[r * m + c] = col[r];
        }
    }
}

/// `L(λ)` applied to grid samples on `ℂ¹` with FFT derivatives.
pub fn twisted_laplacian_grid(f: &GridFunction, lambda: f64) -> Result<GridFunction> {
    let (dx, dy, lap) = spectral_derivatives(f)?;
    let mut out = f.clone();
    for i in 0..f.samples.len() {
        let z = f.point(i)[0];
        let rot = z.re * dy[i] - z.im * dx[i];
        out.samples[i] = -lap[i] + 0.25 * lambda * lambda * z.norm_sqr() * f.samples[i] + C64::new(0.0, lambda) * rot;
    }
    Ok(out)
}

/// `‖L(λ)g − (2k+n)|λ|g‖₂ / ‖g‖₂` on the grid.
pub fn eigen_residual(g: &GridFunction, k: usize, lambda: f64) -> Result<f64> {
    let lg = twisted_laplacian_grid(g, lambda)?;
    let ev = (2 * k + g.n) as f64 * lambda.abs();
    let diff = lg.zip_with(g, |a, b| a - ev * b)?;
    Ok((diff.l2_norm_sq() / g.l2_norm_sq()).sqrt())
}

/// Which twisted kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelKind {
    /// `p_t^λ`
    Heat { t: f64 },
    /// `K^s_{λ,d}`, the kernel of `(L(λ) + d|λ|)^{−s}`
    Bessel { s: f64, d: f64 },
    /// `K_λ`, the kernel of `L(λ)^{−1}`
    Fundamental,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistedKernelQuery {
    pub kind: KernelKind,
    pub lambda: f64,
    pub z: Vec<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: f64,
    pub rel_err_est: f64,
    pub converged: bool,
}

fn validate_kind(kind: &KernelKind, n: usize, lambda: f64) -> Result<()> {
    ensure(lambda != 0.0 && lambda.is_finite(), || "λ must be finite and nonzero".into())?;
    match *kind {
        KernelKind::Heat { t } => ensure(t > 0.0, || format!("heat kernel needs t > 0, got {t}")),
        KernelKind::Bessel { s, d } => {
            if !(s > 0.0 && d + n as f64 > 0.0) {
                return Err(Error::Domain(format!(
                    "K^s_(λ,d) belongs to L¹ only for s > 0 and d + n > 0 (s = {s}, d = {d}, n = {n})"
                )));
            }
            Ok(())
        }
        KernelKind::Fundamental => Ok(()),
    }
}

/// `p_t^λ` at `|z|² = r2`: `(4π)^{−n} (λ/sinh tλ)^n e^{−(λ/4) coth(tλ) |z|²}`.
pub fn heat_kernel(n: usize, t: f64, lambda: f64, r2: f64) -> f64 {
    let a = (t * lambda).abs();
    let l = lambda.abs();
    // λ/sinh(tλ) and λ coth(tλ) are even in λ
    let ratio = if a < 1e-8 { 1.0 / t } else { l / a.sinh() };
    let coth = if a < 1e-8 { 1.0 / (t * l) } else { 1.0 / a.tanh() };
    (ratio / FOUR_PI).powi(n as i32) * (-0.25 * l * coth * r2).exp()
}

/// `∫ p_t^λ = C (cosh t|λ|)^{−n}` with the registry mass constant.
pub fn heat_mass(n: usize, t: f64, lambda: f64) -> f64 {
    registry().heat_mass * (t * lambda).abs().cosh().powi(-(n as i32))
}

/// `c_{n,λ}` of the fundamental-solution integral. The registry holds the
/// calibrated `n = 1` value; the `n`, `λ` dependence `(4π)^{1−n}|λ|^{n−1}` follows
/// from substituting `1 + s = coth(tλ)` in `∫ p_t^λ dt`.
pub fn fundamental_constant(n: usize, lambda: f64) -> f64 {
    registry().fundamental * FOUR_PI.powi(1 - n as i32) * lambda.abs().powi(n as i32 - 1)
}

pub fn twisted_kernel_eval(q: &TwistedKernelQuery) -> Result<KernelValue> {
    let n = q.z.len();
    ensure(n >= 1, || "empty point".into())?;
    validate_kind(&q.kind, n, q.lambda)?;
    let r2: f64 = q.z.iter().map(|v| v.norm_sqr()).sum();
    kernel_radial(q.kind, n, q.lambda, r2)
}

/// Kernel value at `|z|² = r2`.
pub fn kernel_radial(kind: KernelKind, n: usize, lambda: f64, r2: f64) -> Result<KernelValue> {
    validate_kind(&kind, n, lambda)?;
    let l = lambda.abs();
    match kind {
        KernelKind::Heat { t } => Ok(KernelValue { value: heat_kernel(n, t, lambda, r2), rel_err_est: 0.0, converged: true }),
        KernelKind::Bessel { s, d } => {
            let e = integrate_half_line(|t| t.powf(s - 1.0) * (-d * l * t).exp() * heat_kernel(n, t, lambda, r2), 1e-10);
            let g = gamma(s);
            Ok(KernelValue { value: e.value / g, rel_err_est: e.error / e.value.abs().max(1e-300), converged: e.converged })
        }
        KernelKind::Fundamental => {
            if r2 == 0.0 && n >= 1 {
                return Err(Error::Domain("the fundamental solution is singular at z = 0".into()));
            }
            let p = n as f64 / 2.0 - 1.0;
            let e = integrate_half_line(|s| (s * (s + 2.0)).powf(p) * (-0.25 * l * s * r2).exp(), 1e-10);
            let c = fundamental_constant(n, lambda) * (-0.25 * l * r2).exp();
            Ok(KernelValue { value: c * e.value, rel_err_est: e.error / e.value.abs().max(1e-300), converged: e.converged })
        }
    }
}

/// `∫ K^s_{λ,d} = Γ(s)^{−1} ∫ t^{s−1} e^{−d|λ|t} C cosh(tλ)^{−n} dt`.
pub fn bessel_kernel_mass(n: usize, s: f64, d: f64, lambda: f64) -> Result<f64> {
    validate_kind(&KernelKind::Bessel { s, d }, n, lambda)?;
    let l = lambda.abs();
    let e = integrate_half_line(|t| t.powf(s - 1.0) * (-d * l * t).exp() * heat_mass(n, t, lambda), 1e-12);
    Ok(e.value / gamma(s))
}

/// A finite L¹ norm together with the tail beyond the working extent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1Estimate {
    /// Integral over the working region.
    pub value: f64,
    /// Estimated contribution from outside it.
    pub tail: f64,
    /// Set when the outer annulus sums stop decreasing.
    pub diverging: bool,
}

impl L1Estimate {
    pub fn total(&self) -> f64 {
        self.value + self.tail
    }
}

/// Geometric tail from the last three shell sums.
fn tail_from_shells(shells: &[f64]) -> (f64, bool) {
    let k = shells.len();
    if k < 3 {
        return (0.0, false);
    }
    let (a, b, c) = (shells[k - 3], shells[k - 2], shells[k - 1]);
    if c == 0.0 {
        return (0.0, false);
    }
    if !(c < b && b < a) {
        return (c, true);
    }
    let q = (c / b).max(b / a);
    (c * q / (1.0 - q), false)
}

/// Trapezoidal `‖f‖₁` with a tail estimate from square shells of nodes.
pub fn l1_norm_grid(f: &GridFunction) -> L1Estimate {
    let m = f.points_per_axis;
    let half = m / 2;
    let dv = f.cell_volume();
    let shells_n = half;
    let mut shells = vec![0.0; shells_n + 1];
    for (i, v) in f.samples.iter().enumerate() {
        let r = f.axes(i).iter().map(|&a| (a as i64 - half as i64).unsigned_abs() as usize).max().unwrap();
        shells[r] += v.norm() * dv;
    }
    let value: f64 = shells.iter().sum();
    // the outermost shell (index half) is one-sided; fold it into the last full one
    let last = shells.pop().unwrap();
    if let Some(s) = shells.last_mut() {
        *s += last;
    }
    let (tail, diverging) = tail_from_shells(&shells);
    L1Estimate { value, tail, diverging }
}

/// `‖K‖₁` of a radial kernel over the ball of radius `extent`, by
/// Gauss-Legendre on unit annuli, plus a geometric tail.
pub fn l1_norm_kernel(kind: KernelKind, n: usize, lambda: f64, extent: f64) -> Result<L1Estimate> {
    validate_kind(&kind, n, lambda)?;
    ensure(extent > 0.0, || "extent must be positive".into())?;
    let sphere = 2.0 * std::f64::consts::PI.powi(n as i32) / ln_gamma(n as f64).exp();
    let (x, w) = gauss_legendre(24);
    let width = 0.5;
    let count = (extent / width).ceil() as usize;
    let mut shells = Vec::with_capacity(count);
    for j in 0..count {
        let (a, b) = (j as f64 * width, ((j + 1) as f64 * width).min(extent));
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            let r = 0.5 * (a + b) + 0.5 * (b - a) * xi;
            let v = kernel_radial(kind, n, lambda, r * r)?.value;
            s += wi * 0.5 * (b - a) * r.powi(2 * n as i32 - 1) * v.abs();
        }
        shells.push(s * sphere);
    }
    let value = shells.iter().sum();
    let (tail, diverging) = tail_from_shells(&shells);
    Ok(L1Estimate { value, tail, diverging })
}

/// `Z_j(λ)f = ∂f/∂z_j − (λ/4) z̄_j f` and `Z̄_j(λ)f = ∂f/∂z̄_j + (λ/4) z_j f`.
fn z_fields(f: &dyn SmoothFunction, lambda: f64, z: &[C64], j: usize) -> (C64, C64) {
    let v = f.value(z);
    (f.d_z(z, j) - 0.25 * lambda * z[j].conj() * v, f.d_zbar(z, j) + 0.25 * lambda * z[j] * v)
}

/// First-order Laguerre-Sobolev norm on a grid of the given extent:
/// `Σ_j ‖Z_j(λ)f‖₁ + ‖Z̄_j(λ)f‖₁`, plus `‖f‖₁` unless `homogeneous`.
pub fn sobolev_norm(
    f: &dyn SmoothFunction,
    lambda: f64,
    order: usize,
    homogeneous: bool,
    extent: f64,
    points_per_axis: usize,
) -> Result<f64> {
    if order != 1 {
        return Err(Error::Unsupported(format!("Sobolev norms of order {order}: only N = 1 is implemented")));
    }
    let grid = GridFunction::zeros(f.dim(), extent, points_per_axis)?;
    let dv = grid.cell_volume();
    let mut total = 0.0;
    for i in 0..grid.samples.len() {
        let z = grid.point(i);
        if !homogeneous {
            total += f.value(&z).norm();
        }
        for j in 0..f.dim() {
            let (a, b) = z_fields(f, lambda, &z, j);
            total += a.norm() + b.norm();
        }
    }
    Ok(total * dv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre_poly(0, 0.5, 3.0), 1.0);
        assert!((laguerre_poly(1, 0.0, 1.0)).abs() < 1e-15);
        // L_2^0(x) = 1 − 2x + x²/2
        assert!((laguerre_poly(2, 0.0, 3.0) - (1.0 - 6.0 + 4.5)).abs() < 1e-14);
    }

    #[test]
    fn heat_kernel_origin() {
        let v = heat_kernel(1, 1.0, 1.0, 0.0);
        assert!((v - 1.0 / (FOUR_PI * 1f64.sinh())).abs() < 1e-15);
    }
}
