//! Scaled special-Hermite Riesz transforms
//! `R(λ) = Z(−λ)^α Z̄(−λ)^β L(−λ)^{−(|α|+|β|)/2}` on `ℂ¹` and their `λ → 0`
//! limit, the Euclidean `(∂_x − i∂_y)^α (∂_x + i∂_y)^β (−Δ)^{−(|α|+|β|)/2}`.
//!
//! `L(−λ)^{−s}` is evaluated on the Fourier side:
//!
//! `L(−λ)^{−s} f(z) = (2π)^{−2} ∫ W_s(|η|²) f̂(η + ω(z)) e^{iη·z} dη`,
//!
//! with `ω(z) = (λ/2)(y, −x)` and
//! `W_s(r²) = Γ(s)^{−1} ∫ t^{s−1} cosh(λt)^{−1} e^{−tanh(λt) r²/λ} dt`, which
//! tends to `r^{−2s}` as `λ → 0`. Fields act on the integrand symbolically, so
//! `f̂` must come with its gradient and Hessian.

use nalgebra::DMatrix;
use serde_json::json;
use statrs::function::gamma::gamma;

use crate::battery::Gaussian;
use crate::error::{ensure, Error, Result};
use crate::quadrature::{gauss_legendre, integrate_split};
use crate::report::{strictly_decreasing, ExperimentReport, Table};
use crate::weyl::SmoothFunction;
use crate::C64;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Which of the four first-order fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    /// `Z_j(λ) = ∂/∂z_j − (λ/4) z̄_j`
    Z,
    /// `Z̄_j(λ) = ∂/∂z̄_j + (λ/4) z_j`
    Zbar,
    /// `Z_j^R(λ) = Z_j(−λ)`
    ZRight,
    /// `Z̄_j^R(λ) = Z̄_j(−λ)`
    ZbarRight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    /// 0-based axis.
    pub axis: usize,
    pub lambda: f64,
}

impl FieldSpec {
    pub fn new(kind: FieldKind, axis: usize, lambda: f64) -> Self {
        FieldSpec { kind, axis, lambda }
    }
    /// `(holomorphic derivative?, λ as seen by the left-invariant formula)`
    fn normalized(&self) -> (bool, f64) {
        match self.kind {
            FieldKind::Z => (true, self.lambda),
            FieldKind::Zbar => (false, self.lambda),
            FieldKind::ZRight => (true, -self.lambda),
            FieldKind::ZbarRight => (false, -self.lambda),
        }
    }
    /// Coefficients `(a, b, γ, conj)` of `a∂_x + b∂_y + γ·w` on axis `j`,
    /// with `w = z̄_j` when `conj` and `z_j` otherwise.
    fn coefficients(&self) -> (C64, C64, C64, bool) {
        let (holo, mu) = self.normalized();
        let half = C64::new(0.5, 0.0);
        let i_half = C64::new(0.0, 0.5);
        if holo {
            (half, -i_half, C64::new(-0.25 * mu, 0.0), true)
        } else {
            (half, i_half, C64::new(0.25 * mu, 0.0), false)
        }
    }
}

/// Pointwise field application using the evaluator's first partials.
pub fn field_apply(field: FieldSpec, f: &dyn SmoothFunction, points: &[Vec<C64>]) -> Result<Vec<C64>> {
    ensure(field.axis < f.dim(), || format!("axis {} out of range for n = {}", field.axis, f.dim()))?;
    let (holo, mu) = field.normalized();
    points
        .iter()
        .map(|z| {
            ensure(z.len() == f.dim(), || "point dimension mismatch".into())?;
            let j = field.axis;
            let v = f.value(z);
            Ok(if holo {
                f.d_z(z, j) - 0.25 * mu * z[j].conj() * v
            } else {
                f.d_zbar(z, j) + 0.25 * mu * z[j] * v
            })
        })
        .collect()
}

/// Value and derivatives of a function at one point of `ℂ¹`, up to order 2.
#[derive(Debug, Clone, Copy, Default)]
struct Jet {
    v: C64,
    x: C64,
    y: C64,
    xx: C64,
    xy: C64,
    yy: C64,
}

impl Jet {
    /// `D = a∂_x + b∂_y + γw`; the result keeps first derivatives only.
    fn apply(&self, field: FieldSpec, z: C64) -> Jet {
        let (a, b, g, conj) = field.coefficients();
        let w = if conj { z.conj() } else { z };
        let (wx, wy) = (C64::new(1.0, 0.0), if conj { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) });
        Jet {
            v: a * self.x + b * self.y + g * w * self.v,
            x: a * self.xx + b * self.xy + g * (wx * self.v + w * self.x),
            y: a * self.xy + b * self.yy + g * (wy * self.v + w * self.y),
            ..Jet::default()
        }
    }
}

/// Fields applied in sequence (first element acts first), at most two.
pub fn field_product_apply(fields: &[FieldSpec], f: &dyn SmoothFunction, points: &[Vec<C64>]) -> Result<Vec<C64>> {
    ensure(f.dim() == 1, || "field products are implemented on ℂ¹".into())?;
    ensure(fields.len() <= 2, || "at most two fields".into())?;
    points
        .iter()
        .map(|z| {
            let g = f.gradient(z)[0];
            let mut jet = Jet { v: f.value(z), x: g.0, y: g.1, ..Jet::default() };
            if fields.len() == 2 {
                let h = f
                    .hessian(z)
                    .ok_or_else(|| Error::InvalidArgument("second-order fields need the Hessian".into()))?;
                jet.xx = h[(0, 0)];
                jet.xy = h[(0, 1)];
                jet.yy = h[(1, 1)];
            }
            for fs in fields {
                jet = jet.apply(*fs, z[0]);
            }
            Ok(jet.v)
        })
        .collect()
}

/// A function with an analytic Euclidean Fourier transform
/// `f̂(ζ) = ∫ f(q) e^{−iζ·q} dq` and its first two derivatives.
pub trait FourierSmooth: SmoothFunction {
    fn fourier(&self, zeta: &[f64]) -> C64;
    fn fourier_gradient(&self, zeta: &[f64]) -> Vec<C64>;
    fn fourier_hessian(&self, zeta: &[f64]) -> DMatrix<C64>;
}

impl FourierSmooth for Gaussian {
    fn fourier(&self, zeta: &[f64]) -> C64 {
        Gaussian::fourier(self, zeta)
    }
    fn fourier_gradient(&self, zeta: &[f64]) -> Vec<C64> {
        let v = Gaussian::fourier(self, zeta);
        self.fourier_log_gradient(zeta).into_iter().map(|g| g * v).collect()
    }
    fn fourier_hessian(&self, zeta: &[f64]) -> DMatrix<C64> {
        let v = Gaussian::fourier(self, zeta);
        let l = self.fourier_log_gradient(zeta);
        DMatrix::from_fn(l.len(), l.len(), |r, c| v * (l[r] * l[c] - if r == c { 0.5 / self.width } else { 0.0 }))
    }
}

/// `f_λ(z) = f(λ^{−1/2} z)`.
#[derive(Debug, Clone)]
pub struct Dilated<F> {
    pub inner: F,
    pub lambda: f64,
}

impl<F: SmoothFunction> SmoothFunction for Dilated<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, z: &[C64]) -> C64 {
        let s = self.lambda.sqrt().recip();
        self.inner.value(&z.iter().map(|v| v * s).collect::<Vec<_>>())
    }
    fn gradient(&self, z: &[C64]) -> Vec<(C64, C64)> {
        let s = self.lambda.sqrt().recip();
        self.inner
            .gradient(&z.iter().map(|v| v * s).collect::<Vec<_>>())
            .into_iter()
            .map(|(a, b)| (a * s, b * s))
            .collect()
    }
    fn hessian(&self, z: &[C64]) -> Option<DMatrix<C64>> {
        let s = self.lambda.sqrt().recip();
        self.inner.hessian(&z.iter().map(|v| v * s).collect::<Vec<_>>()).map(|h| h * C64::new(s * s, 0.0))
    }
}

impl<F: FourierSmooth> FourierSmooth for Dilated<F> {
    // f̂_λ(ζ) = λ^n f̂(√λ ζ)
    fn fourier(&self, zeta: &[f64]) -> C64 {
        let r = self.lambda.sqrt();
        self.inner.fourier(&zeta.iter().map(|v| v * r).collect::<Vec<_>>()) * self.lambda.powi(self.dim() as i32)
    }
    fn fourier_gradient(&self, zeta: &[f64]) -> Vec<C64> {
        let r = self.lambda.sqrt();
        let c = self.lambda.powi(self.dim() as i32) * r;
        self.inner.fourier_gradient(&zeta.iter().map(|v| v * r).collect::<Vec<_>>()).into_iter().map(|g| g * c).collect()
    }
    fn fourier_hessian(&self, zeta: &[f64]) -> DMatrix<C64> {
        let r = self.lambda.sqrt();
        let c = self.lambda.powi(self.dim() as i32 + 1);
        self.inner.fourier_hessian(&zeta.iter().map(|v| v * r).collect::<Vec<_>>()) * C64::new(c, 0.0)
    }
}

/// Polar quadrature on the frequency plane: composite Gauss-Legendre in
/// `ρ ∈ [0, rho_max]`, trapezoid in the angle. Polar nodes integrate the
/// `|η|^{−2s}` weight without the `O(h)` error a Cartesian grid has at `η = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierRule {
    pub rho_max: f64,
    pub radial_panels: usize,
    pub radial_order: usize,
    pub angles: usize,
}

impl Default for FourierRule {
    fn default() -> Self {
        FourierRule { rho_max: 12.0, radial_panels: 12, radial_order: 16, angles: 96 }
    }
}

impl FourierRule {
    /// `(ρ, weight incl. ρ dρ)` pairs.
    pub fn radial_nodes(&self) -> Vec<(f64, f64)> {
        let (x, w) = gauss_legendre(self.radial_order);
        let h = self.rho_max / self.radial_panels as f64;
        let mut out = Vec::with_capacity(self.radial_panels * self.radial_order);
        for p in 0..self.radial_panels {
            let a = p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                let r = a + 0.5 * h * (xi + 1.0);
                out.push((r, 0.5 * h * wi * r));
            }
        }
        out
    }
    /// `(cos θ, sin θ)` at the trapezoid angles.
    pub fn angle_nodes(&self) -> Vec<(f64, f64)> {
        (0..self.angles)
            .map(|i| {
                let t = TWO_PI * (i as f64 + 0.5) / self.angles as f64;
                (t.cos(), t.sin())
            })
            .collect()
    }
}

/// `W_s(r²)` for `L(−λ)^{−s}` on `ℂⁿ`; at `λ = 0` it is `r^{−2s}`.
///
/// The `t`-integral is split at `t = 1` and `1` is subtracted below it, so
/// small `s` costs nothing extra: `W = Γ(s)^{−1}[∫_0^1 t^{s−1}(g−1) + 1/s + ∫_1^∞ t^{s−1}g]`.
pub fn subordination_weight(s: f64, lambda: f64, n: usize, r2: f64) -> Result<f64> {
    ensure(s > 0.0, || format!("s must be positive, got {s}"))?;
    let l = lambda.abs();
    if l == 0.0 {
        return Ok(r2.powf(-s));
    }
    let g = |t: f64| (l * t).cosh().powi(-(n as i32)) * (-(l * t).tanh() * r2 / l).exp();
    let lower = |u: f64| {
        let t = u.exp();
        (s * u).exp() * (g(t) - 1.0)
    };
    let upper = |u: f64| {
        let t = u.exp();
        (s * u).exp() * g(t)
    };
    let lo_breaks: Vec<f64> = (0..=30).map(|i| -60.0 + 2.0 * i as f64).collect();
    let a = integrate_split(&lower, &lo_breaks, 1e-12, 1e-15);
    // beyond t = 60/(n|λ|) the integrand is below e^{−60}
    let umax = (60.0 / (n as f64 * l)).max(1.0).ln() + 1.0;
    let pieces = (umax / 0.5).ceil() as usize;
    let hi_breaks: Vec<f64> = (0..=pieces).map(|i| umax * i as f64 / pieces as f64).collect();
    let b = integrate_split(&upper, &hi_breaks, 1e-12, 1e-15);
    Ok((a.value + 1.0 / s + b.value) / gamma(s))
}

fn check_n1(f: &dyn SmoothFunction) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::Unsupported("Fourier-side Riesz transforms are implemented on ℂ¹".into()));
    }
    Ok(())
}

/// Jets of `L(−λ)^{−s} f` at the given points (derivatives to order `order`).
fn resolvent_jets(f: &dyn FourierSmooth, s: f64, lambda: f64, points: &[Vec<C64>], order: usize, rule: &FourierRule) -> Result<Vec<Jet>> {
    check_n1(f)?;
    let radial = rule.radial_nodes();
    let angles = rule.angle_nodes();
    let weights: Vec<f64> = if s == 0.0 {
        vec![1.0; radial.len()]
    } else {
        radial.iter().map(|&(r, _)| subordination_weight(s, lambda, 1, r * r)).collect::<Result<_>>()?
    };
    let dtheta = TWO_PI / rule.angles as f64;
    let norm = 1.0 / (TWO_PI * TWO_PI);
    let h = 0.5 * lambda;
    points
        .iter()
        .map(|z| {
            ensure(z.len() == 1, || "point dimension mismatch".into())?;
            let (x, y) = (z[0].re, z[0].im);
            let om = [h * y, -h * x];
            let mut jet = Jet::default();
            for (k, &(r, wr)) in radial.iter().enumerate() {
                let wk = weights[k] * wr * dtheta * norm;
                for &(c, sn) in &angles {
                    let eta = [r * c, r * sn];
                    let zeta = [eta[0] + om[0], eta[1] + om[1]];
                    let e = C64::from_polar(wk, eta[0] * x + eta[1] * y);
                    let gv = f.fourier(&zeta);
                    jet.v += gv * e;
                    if order == 0 {
                        continue;
                    }
                    let grad = f.fourier_gradient(&zeta);
                    let (i1, i2) = (C64::new(0.0, eta[0]), C64::new(0.0, eta[1]));
                    // ∂ω/∂x = (0, −λ/2), ∂ω/∂y = (λ/2, 0)
                    let gx = -h * grad[1];
                    let gy = h * grad[0];
                    jet.x += (gx + i1 * gv) * e;
                    jet.y += (gy + i2 * gv) * e;
                    if order == 1 {
                        continue;
                    }
                    let hs = f.fourier_hessian(&zeta);
                    let gxx = h * h * hs[(1, 1)];
                    let gxy = -h * h * hs[(0, 1)];
                    let gyy = h * h * hs[(0, 0)];
                    jet.xx += (gxx + 2.0 * i1 * gx + i1 * i1 * gv) * e;
                    jet.xy += (gxy + i2 * gx + i1 * gy + i1 * i2 * gv) * e;
                    jet.yy += (gyy + 2.0 * i2 * gy + i2 * i2 * gv) * e;
                }
            }
            Ok(jet)
        })
        .collect()
}

/// `L(−λ)^{−s} f` at the points (`s = 0` gives `f` back through the Fourier inversion).
pub fn fractional_twisted_inverse(f: &dyn FourierSmooth, s: f64, lambda: f64, points: &[Vec<C64>], rule: &FourierRule) -> Result<Vec<C64>> {
    ensure(s >= 0.0, || format!("s must be non-negative, got {s}"))?;
    Ok(resolvent_jets(f, s, lambda, points, 0, rule)?.into_iter().map(|j| j.v).collect())
}

/// `Z(−λ)^α Z̄(−λ)^β L(−λ)^{−(α+β)/2} f` on `ℂ¹`, `α + β ≤ 2`.
pub fn scaled_riesz(f: &dyn FourierSmooth, alpha: usize, beta: usize, lambda: f64, points: &[Vec<C64>], rule: &FourierRule) -> Result<Vec<C64>> {
    ensure(alpha + beta <= 2, || "orders above two are out of scope".into())?;
    let s = (alpha + beta) as f64 / 2.0;
    let jets = resolvent_jets(f, s, lambda, points, alpha + beta, rule)?;
    let mut fields = vec![FieldSpec::new(FieldKind::ZbarRight, 0, lambda); beta];
    fields.extend(vec![FieldSpec::new(FieldKind::ZRight, 0, lambda); alpha]);
    Ok(jets
        .into_iter()
        .zip(points)
        .map(|(mut j, z)| {
            for fs in &fields {
                j = j.apply(*fs, z[0]);
            }
            j.v
        })
        .collect())
}

/// Symbol of `(∂_x − i∂_y)^α (∂_x + i∂_y)^β (−Δ)^{−(α+β)/2}` at `η ≠ 0`.
pub fn euclidean_symbol(alpha: usize, beta: usize, eta: [f64; 2]) -> C64 {
    let r = (eta[0] * eta[0] + eta[1] * eta[1]).sqrt();
    let p = C64::new(eta[1], eta[0]); // iη₁ + η₂
    let q = C64::new(-eta[1], eta[0]); // iη₁ − η₂
    p.powu(alpha as u32) * q.powu(beta as u32) / r.powi((alpha + beta) as i32)
}

/// `(∂_x − i∂_y)^α (∂_x + i∂_y)^β (−Δ)^{−(α+β)/2} f` on `ℂ¹` by Fourier quadrature.
pub fn euclidean_riesz(f: &dyn FourierSmooth, alpha: usize, beta: usize, points: &[Vec<C64>], rule: &FourierRule) -> Result<Vec<C64>> {
    check_n1(f)?;
    let radial = rule.radial_nodes();
    let angles = rule.angle_nodes();
    let dtheta = TWO_PI / rule.angles as f64;
    let norm = 1.0 / (TWO_PI * TWO_PI);
    points
        .iter()
        .map(|z| {
            let (x, y) = (z[0].re, z[0].im);
            let mut acc = C64::new(0.0, 0.0);
            for &(r, wr) in &radial {
                for &(c, sn) in &angles {
                    let eta = [r * c, r * sn];
                    acc += euclidean_symbol(alpha, beta, eta) * f.fourier(&eta) * C64::from_polar(wr * dtheta * norm, eta[0] * x + eta[1] * y);
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Inputs of [`limit_experiment`].
#[derive(Debug, Clone)]
pub struct LimitConfig {
    pub alpha: usize,
    pub beta: usize,
    pub lambdas: Vec<f64>,
    pub points: Vec<Vec<C64>>,
    pub rule: FourierRule,
    pub tol_final: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            alpha: 1,
            beta: 0,
            lambdas: vec![1.0, 0.5, 0.25, 0.125],
            points: default_points(),
            rule: FourierRule::default(),
            tol_final: 5e-2,
        }
    }
}

/// Five sample points off the origin.
pub fn default_points() -> Vec<Vec<C64>> {
    [(1.0, 0.0), (0.0, 1.0), (0.5, 0.5), (-0.7, 0.3), (0.2, -1.0)].iter().map(|&(x, y)| vec![C64::new(x, y)]).collect()
}

/// Pointwise `λ → 0` convergence of the scaled Riesz transform. The constant
/// `C_{α,β}` is fitted by least squares at the smallest `λ`, then frozen;
/// it is an empirical quantity.
pub fn limit_experiment(f: &dyn FourierSmooth, cfg: &LimitConfig) -> Result<ExperimentReport> {
    ensure(!cfg.lambdas.is_empty(), || "empty λ sequence".into())?;
    ensure(cfg.lambdas.windows(2).all(|w| w[1] < w[0]) && cfg.lambdas.iter().all(|&l| l > 0.0), || {
        "λ sequence must decrease and stay positive".into()
    })?;
    let e = euclidean_riesz(f, cfg.alpha, cfg.beta, &cfg.points, &cfg.rule)?;
    let scaled: Vec<Vec<C64>> = cfg
        .lambdas
        .iter()
        .map(|&l| scaled_riesz(f, cfg.alpha, cfg.beta, l, &cfg.points, &cfg.rule))
        .collect::<Result<_>>()?;
    let last = scaled.last().unwrap();
    let den: f64 = e.iter().map(|v| v.norm_sqr()).sum();
    let c = if den == 0.0 { C64::new(0.0, 0.0) } else { e.iter().zip(last).map(|(a, b)| a.conj() * b).sum::<C64>() / den };
    let scale = e.iter().map(|v| (c * v).norm()).fold(0.0, f64::max);
    let mut table = Table::new(&["lambda", "point_index", "scaled_re", "scaled_im", "euclid_re", "euclid_im", "abs_err"]);
    let mut errors = Vec::new();
    for (li, &l) in cfg.lambdas.iter().enumerate() {
        let mut worst: f64 = 0.0;
        for (pi, (sv, ev)) in scaled[li].iter().zip(&e).enumerate() {
            let err = (sv - c * ev).norm();
            worst = worst.max(err);
            table.push(vec![json!(l), json!(pi), json!(sv.re), json!(sv.im), json!(ev.re), json!(ev.im), json!(err)]);
        }
        errors.push(worst);
    }
    let rel_final = if scale == 0.0 { 0.0 } else { errors.last().unwrap() / scale };
    let mut rep = ExperimentReport::new("riesz-limit");
    rep.param("alpha", cfg.alpha).param("beta", cfg.beta).param("lambdas", cfg.lambdas.clone());
    rep.metric("fitted_constant_re", c.re).metric("fitted_constant_im", c.im).metric("final_relative_error", rel_final);
    for (l, err) in cfg.lambdas.iter().zip(&errors) {
        rep.metric(&format!("max_error_lambda_{l}"), *err);
    }
    rep.table("pointwise", table);
    let all_zero = errors.iter().all(|&v| v == 0.0);
    rep.check_holds("errors_strictly_decreasing", all_zero || strictly_decreasing(&errors));
    rep.check_below("final_relative_error", rel_final, cfg.tol_final);
    rep.note("C_{α,β} is fitted at the smallest λ and is empirical");
    Ok(rep)
}

/// `max |√λ (F f_λ)(√λ z) − F(λ) f(z)|` over the points for `F ∈ {Z, Z̄}` (and right variants).
pub fn field_dilation_defect<F: SmoothFunction + Clone>(f: &F, lambda: f64, points: &[Vec<C64>]) -> Result<f64> {
    ensure(lambda > 0.0, || "λ must be positive".into())?;
    let fl = Dilated { inner: f.clone(), lambda };
    let r = lambda.sqrt();
    let scaled: Vec<Vec<C64>> = points.iter().map(|z| z.iter().map(|v| v * r).collect()).collect();
    let mut worst: f64 = 0.0;
    for kind in [FieldKind::Z, FieldKind::Zbar, FieldKind::ZRight, FieldKind::ZbarRight] {
        for j in 0..f.dim() {
            let lhs = field_apply(FieldSpec::new(kind, j, 1.0), &fl, &scaled)?;
            let rhs = field_apply(FieldSpec::new(kind, j, lambda), f, points)?;
            for (a, b) in lhs.iter().zip(&rhs) {
                worst = worst.max((a * r - b).norm());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_tends_to_power() {
        let w = subordination_weight(0.5, 1e-4, 1, 4.0).unwrap();
        assert!((w - 0.5).abs() < 1e-3);
        assert_eq!(subordination_weight(0.5, 0.0, 1, 4.0).unwrap(), 0.5);
    }
}
