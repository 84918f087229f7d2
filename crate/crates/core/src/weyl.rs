//! Weyl transform `W_λ`, twisted convolution `∗_λ`, the symplectic Fourier
//! transform `ℱ_λ` and the Weyl correspondence `G_λ` of polynomials.
//!
//! Conventions: `π_λ(z,0)φ(ξ) = e^{iλ(x·ξ + ½x·y)} φ(ξ+y)` for `z = x + iy`;
//! operator matrices store `⟨T Φ_β, Φ_α⟩` at `(α, β)`.

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::constants::registry;
use crate::error::{ensure, Error, Result};
use crate::geller::SolidHarmonic;
use crate::hermite::{hermite_functions_1d, ladder_matrix, HermiteBasisSpec, Ladder, MultiIndex, OperatorMatrix};
use crate::quadrature::{gauss_hermite, GaussHermite};
use crate::C64;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Complex samples on the lattice `{−R + i·2R/N : 0 ≤ i < N}^{2n}` over `ℂⁿ ≅ ℝ^{2n}`.
///
/// Axes are ordered `x_1..x_n, y_1..y_n`, last axis fastest. `N` is even, so
/// the origin is a node and `z − w` of two nodes is again a node (or off the grid).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub n: usize,
    pub extent: f64,
    pub points_per_axis: usize,
    pub samples: Vec<C64>,
}

impl GridFunction {
    pub fn zeros(n: usize, extent: f64, points_per_axis: usize) -> Result<Self> {
        ensure(n >= 1, || "n must be positive".into())?;
        ensure(extent > 0.0 && extent.is_finite(), || "extent must be positive".into())?;
        ensure(points_per_axis >= 2 && points_per_axis % 2 == 0, || "points_per_axis must be even and ≥ 2".into())?;
        let total = points_per_axis.pow(2 * n as u32);
        Ok(GridFunction { n, extent, points_per_axis, samples: vec![C64::new(0.0, 0.0); total] })
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(&[C64]) -> C64>(n: usize, extent: f64, points_per_axis: usize, f: F) -> Result<Self> {
        let mut g = Self::zeros(n, extent, points_per_axis)?;
        for i in 0..g.samples.len() {
            let z = g.point(i);
            let v = f(&z);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(format!("sample at {z:?}")));
            }
            g.samples[i] = v;
        }
        Ok(g)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.points_per_axis as f64
    }
    pub fn coord(&self, i: usize) -> f64 {
        -self.extent + i as f64 * self.spacing()
    }
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(2 * self.n as i32)
    }
    /// Per-axis indices of a flat index.
    pub fn axes(&self, flat: usize) -> Vec<usize> {
        let m = self.points_per_axis;
        let mut rem = flat;
        let mut out = vec![0; 2 * self.n];
        for a in (0..2 * self.n).rev() {
            out[a] = rem % m;
            rem /= m;
        }
        out
    }
    pub fn flat(&self, axes: &[usize]) -> usize {
        axes.iter().fold(0, |acc, &i| acc * self.points_per_axis + i)
    }
    /// Node `flat` as a point of `ℂⁿ`.
    pub fn point(&self, flat: usize) -> Vec<C64> {
        let ax = self.axes(flat);
        (0..self.n).map(|j| C64::new(self.coord(ax[j]), self.coord(ax[self.n + j]))).collect()
    }
    pub(crate) fn same_grid(&self, o: &Self) -> Result<()> {
        if self.n != o.n || self.extent != o.extent || self.points_per_axis != o.points_per_axis {
            return Err(Error::GridMismatch(format!(
                "(n={}, R={}, N={}) vs (n={}, R={}, N={})",
                self.n, self.extent, self.points_per_axis, o.n, o.extent, o.points_per_axis
            )));
        }
        Ok(())
    }
    pub fn check_finite(&self) -> Result<()> {
        if self.samples.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("grid samples".into()));
        }
        Ok(())
    }
    /// Trapezoidal integral `∫ f`.
    pub fn integral(&self) -> C64 {
        self.samples.iter().sum::<C64>() * self.cell_volume()
    }
    pub fn l1_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).sum::<f64>() * self.cell_volume()
    }
    pub fn l2_norm_sq(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_volume()
    }
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
    /// Largest `|f|` on the outermost shell of nodes relative to `sup |f|`.
    pub fn boundary_ratio(&self) -> f64 {
        let sup = self.sup_norm();
        if sup == 0.0 {
            return 0.0;
        }
        let last = self.points_per_axis - 1;
        let mut b: f64 = 0.0;
        for i in 0..self.samples.len() {
            if self.axes(i).iter().any(|&a| a == 0 || a == last) {
                b = b.max(self.samples[i].norm());
            }
        }
        b / sup
    }
    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        GridFunction { samples: self.samples.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }
    pub fn zip_with(&self, o: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.same_grid(o)?;
        Ok(GridFunction { samples: self.samples.iter().zip(&o.samples).map(|(&a, &b)| f(a, b)).collect(), ..self.clone() })
    }
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "extent": self.extent,
            "points_per_axis": self.points_per_axis,
            "shape": vec![self.points_per_axis; 2 * self.n],
            "samples": self.samples.iter().map(|v| json!([v.re, v.im])).collect::<Vec<_>>(),
        })
    }
}

/// A function on `ℂⁿ` with pointwise access to its real partial derivatives.
///
/// Gradients are returned as `(∂f/∂x_j, ∂f/∂y_j)` pairs; the Hessian, when
/// available, is `2n × 2n` in the coordinate order `x_1..x_n, y_1..y_n`.
pub trait SmoothFunction: Sync {
    fn dim(&self) -> usize;
    fn value(&self, z: &[C64]) -> C64;
    fn gradient(&self, z: &[C64]) -> Vec<(C64, C64)>;
    fn hessian(&self, _z: &[C64]) -> Option<DMatrix<C64>> {
        None
    }
    /// `∂f/∂z_j = ½(∂_x − i∂_y) f`
    fn d_z(&self, z: &[C64], j: usize) -> C64 {
        let (dx, dy) = self.gradient(z)[j];
        0.5 * (dx - C64::i() * dy)
    }
    /// `∂f/∂z̄_j = ½(∂_x + i∂_y) f`
    fn d_zbar(&self, z: &[C64], j: usize) -> C64 {
        let (dx, dy) = self.gradient(z)[j];
        0.5 * (dx + C64::i() * dy)
    }
}

/// One-axis matrix coefficients `⟨π_λ(x+iy,0) h_β, h_α⟩` for all `α, β ≤ kmax`,
/// by Gauss-Hermite quadrature centred at `ξ = −y/2`.
fn axis_coefficients(lambda: f64, kmax: usize, x: f64, y: f64, rule: &GaussHermite) -> DMatrix<C64> {
    let s = lambda.abs().sqrt();
    let m = rule.nodes.len();
    let mut a = DMatrix::<f64>::zeros(kmax + 1, m);
    let mut bc = DMatrix::<C64>::zeros(m, kmax + 1);
    for i in 0..m {
        let xi = rule.nodes[i] / s - 0.5 * y;
        let ha = hermite_functions_1d(kmax, s * xi);
        let hb = hermite_functions_1d(kmax, s * (xi + y));
        // s^{1/2} · s^{1/2} from the two scaled functions, 1/s from dξ = du/s
        let c = C64::from_polar(rule.fn_weights[i], lambda * (x * xi + 0.5 * x * y));
        for k in 0..=kmax {
            a[(k, i)] = ha[k];
            bc[(i, k)] = c * hb[k];
        }
    }
    a.map(|v| C64::new(v, 0.0)) * bc
}

/// Gauss-Hermite rule in `ξ` for `|x| ≤ reach`. The phase `e^{iλxξ}` has
/// Hermite content up to order `≈ |λ|x²/2`, which the rule must also resolve.
fn rule_for(spec: &HermiteBasisSpec, reach: f64) -> GaussHermite {
    let w = spec.lambda().abs().sqrt() * reach;
    gauss_hermite(2 * spec.k() + 8 + (0.5 * w * w + 4.0 * w).ceil() as usize)
}

/// `⟨π_λ(z,0) Φ_β^λ, Φ_α^λ⟩`.
pub fn matrix_coefficient(spec: &HermiteBasisSpec, z: &[C64], alpha: &MultiIndex, beta: &MultiIndex) -> Result<C64> {
    ensure(z.len() == spec.n(), || "point dimension mismatch".into())?;
    if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite(format!("{z:?}")));
    }
    for m in [alpha, beta] {
        if m.order() > spec.k() {
            return Err(Error::OutOfTruncation { order: m.order(), k: spec.k() });
        }
    }
    let reach = z.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let rule = rule_for(spec, reach);
    let mut v = C64::new(1.0, 0.0);
    for j in 0..spec.n() {
        let kmax = alpha.0[j].max(beta.0[j]);
        let t = axis_coefficients(spec.lambda(), kmax, z[j].re, z[j].im, &rule);
        v *= t[(alpha.0[j], beta.0[j])];
    }
    Ok(v)
}

/// `W_λ(f)` with its boundary-decay diagnostic.
#[derive(Debug, Clone)]
pub struct WeylTransform {
    pub op: OperatorMatrix,
    /// `max |f|` on the grid boundary relative to `sup |f|`.
    pub boundary_ratio: f64,
    pub warning: Option<String>,
}

/// `W_λ(f) = ∫ f(z) π_λ(z,0) dz`: trapezoid in `z`, Gauss-Hermite in `ξ`.
pub fn weyl_transform(f: &GridFunction, spec: &HermiteBasisSpec) -> Result<WeylTransform> {
    ensure(f.n == spec.n(), || "grid and basis dimensions differ".into())?;
    f.check_finite()?;
    // only nodes carrying non-negligible mass need the phase resolved
    let floor = 1e-13 * f.sup_norm();
    let reach = (0..f.samples.len())
        .filter(|&i| f.samples[i].norm() > floor)
        .map(|i| f.point(i).iter().map(|v| v.re.abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let rule = rule_for(spec, reach);
    let n = spec.n();
    let kmax = spec.k();
    let dv = f.cell_volume();
    let d = spec.len();
    let lam = spec.lambda();
    let idx = spec.indices();
    let mut acc = DMatrix::<C64>::zeros(d, d);
    let m = f.points_per_axis;
    if n == 1 {
        for (flat, &fv) in f.samples.iter().enumerate() {
            if fv == C64::new(0.0, 0.0) {
                continue;
            }
            let ax = f.axes(flat);
            acc += axis_coefficients(lam, kmax, f.coord(ax[0]), f.coord(ax[1]), &rule) * (fv * dv);
        }
    } else {
        // one table per (x_j, y_j) node pair, shared by all axes
        let tables: Vec<DMatrix<C64>> = (0..m * m)
            .map(|key| axis_coefficients(lam, kmax, f.coord(key / m), f.coord(key % m), &rule))
            .collect();
        for (flat, &fv) in f.samples.iter().enumerate() {
            if fv == C64::new(0.0, 0.0) {
                continue;
            }
            let ax = f.axes(flat);
            let tabs: Vec<&DMatrix<C64>> = (0..n).map(|j| &tables[ax[j] * m + ax[n + j]]).collect();
            for (r, a) in idx.iter().enumerate() {
                for (c, b) in idx.iter().enumerate() {
                    let mut v = fv * dv;
                    for j in 0..n {
                        v *= tabs[j][(a.0[j], b.0[j])];
                    }
                    acc[(r, c)] += v;
                }
            }
        }
    }
    let boundary_ratio = f.boundary_ratio();
    let warning = (boundary_ratio > 1e-10)
        .then(|| format!("samples at the grid boundary reach {boundary_ratio:.2e} of the maximum; enlarge the extent"));
    Ok(WeylTransform { op: OperatorMatrix { basis: spec.clone(), entries: acc, leakage: 0.0 }, boundary_ratio, warning })
}

/// `f ∗_λ g(z) = ∫ f(z−w) g(w) e^{i(λ/2)ℑ(z·w̄)} dw` by direct summation over nodes.
pub fn twisted_convolution(f: &GridFunction, g: &GridFunction, lambda: f64) -> Result<GridFunction> {
    f.same_grid(g)?;
    let m = f.points_per_axis;
    let half = m / 2;
    let n = f.n;
    let dv = f.cell_volume();
    let coords: Vec<f64> = (0..m).map(|i| f.coord(i)).collect();
    // e^{i(λ/2) a b} for node coordinates a, b
    let phase: Vec<C64> = (0..m * m)
        .map(|k| C64::from_polar(1.0, 0.5 * lambda * coords[k / m] * coords[k % m]))
        .collect();
    let mut out = GridFunction { samples: vec![C64::new(0.0, 0.0); f.samples.len()], ..f.clone() };
    if n == 1 {
        // ℑ(z w̄) = y u − x v for z = x+iy, w = u+iv
        for ix in 0..m {
            for iy in 0..m {
                let mut total = C64::new(0.0, 0.0);
                for ju in 0..m {
                    let fx = ix + half;
                    if fx < ju || fx - ju >= m {
                        continue;
                    }
                    let fxi = fx - ju;
                    let frow = &f.samples[fxi * m..(fxi + 1) * m];
                    let grow = &g.samples[ju * m..(ju + 1) * m];
                    let p2 = &phase[ix * m..(ix + 1) * m];
                    let mut s = C64::new(0.0, 0.0);
                    let lo = (iy + half).saturating_sub(m - 1);
                    let hi = (iy + half).min(m - 1);
                    for jv in lo..=hi {
                        s += frow[iy + half - jv] * grow[jv] * p2[jv].conj();
                    }
                    total += s * phase[iy * m + ju];
                }
                out.samples[ix * m + iy] = total * dv;
            }
        }
        return Ok(out);
    }
    let total = f.samples.len();
    for zi in 0..total {
        let za = f.axes(zi);
        let mut acc = C64::new(0.0, 0.0);
        'w: for wi in 0..total {
            let gv = g.samples[wi];
            if gv == C64::new(0.0, 0.0) {
                continue;
            }
            let wa = f.axes(wi);
            let mut diff = vec![0usize; 2 * n];
            for a in 0..2 * n {
                let d = za[a] + half;
                if d < wa[a] || d - wa[a] >= m {
                    continue 'w;
                }
                diff[a] = d - wa[a];
            }
            let mut ph = C64::new(1.0, 0.0);
            for j in 0..n {
                ph *= phase[za[n + j] * m + wa[j]] * phase[za[j] * m + wa[n + j]].conj();
            }
            acc += f.samples[f.flat(&diff)] * gv * ph;
        }
        out.samples[zi] = acc * dv;
    }
    Ok(out)
}

/// `ℱ_λ f(z) = (2π)^{−n} ∫ f(z−w) e^{i(λ/2)ℑ(z·w̄)} dw = (2π)^{−n} ∫ f(u) e^{−i(λ/2)ℑ(z·ū)} du`.
pub fn symplectic_fourier(f: &GridFunction, lambda: f64) -> Result<GridFunction> {
    f.check_finite()?;
    let m = f.points_per_axis;
    let n = f.n;
    let coords: Vec<f64> = (0..m).map(|i| f.coord(i)).collect();
    let scale = f.cell_volume() / TWO_PI.powi(n as i32);
    let ph = |a: f64, b: f64| C64::from_polar(1.0, 0.5 * lambda * a * b);
    let mut out = GridFunction { samples: vec![C64::new(0.0, 0.0); f.samples.len()], ..f.clone() };
    if n == 1 {
        // ℑ(z ū) = y u − x v; stage 1 sums v, stage 2 sums u.
        let mut t = vec![C64::new(0.0, 0.0); m * m];
        for iu in 0..m {
            for ix in 0..m {
                let mut s = C64::new(0.0, 0.0);
                for iv in 0..m {
                    s += f.samples[iu * m + iv] * ph(coords[ix], coords[iv]);
                }
                t[iu * m + ix] = s;
            }
        }
        for ix in 0..m {
            for iy in 0..m {
                let mut s = C64::new(0.0, 0.0);
                for iu in 0..m {
                    s += t[iu * m + ix] * ph(coords[iy], coords[iu]).conj();
                }
                out.samples[ix * m + iy] = s * scale;
            }
        }
        return Ok(out);
    }
    for zi in 0..f.samples.len() {
        let za = f.axes(zi);
        let mut acc = C64::new(0.0, 0.0);
        for ui in 0..f.samples.len() {
            let ua = f.axes(ui);
            let mut arg = 0.0;
            for j in 0..n {
                arg += coords[za[n + j]] * coords[ua[j]] - coords[za[j]] * coords[ua[n + j]];
            }
            acc += f.samples[ui] * C64::from_polar(1.0, -0.5 * lambda * arg);
        }
        out.samples[zi] = acc * scale;
    }
    Ok(out)
}

/// `G_λ(z_j^a z̄_k^b) = c(a,b) λ^{−a−b} (A_k(λ)*)^b A_j(λ)^a`, with `c(a,b)`
/// from the constants registry and the normalization `G_λ(1) = I`.
///
/// Axes are 0-based. For `n = 1` only pure powers are accepted; for `n ≥ 2`
/// mixed monomials need `j ≠ k`.
pub fn weyl_correspondence_monomial(spec: &HermiteBasisSpec, j: usize, k: usize, a: usize, b: usize) -> Result<OperatorMatrix> {
    let n = spec.n();
    ensure(j < n && k < n, || format!("axis out of range for n = {n}"))?;
    if a > 0 && b > 0 && j == k {
        return Err(Error::Unsupported(format!(
            "z_{j}^{a} z̄_{k}^{b}: the monomial correspondence is only available for distinct axes (or pure powers)"
        )));
    }
    let c = registry().weyl_monomial(a, b)?;
    let lam = spec.lambda();
    let mut m = OperatorMatrix::identity(spec);
    let ann = ladder_matrix(spec, Ladder::Annihilate(j))?;
    let cre = ladder_matrix(spec, Ladder::Create(k))?;
    for _ in 0..a {
        m = ann.mul(&m)?;
    }
    for _ in 0..b {
        m = cre.mul(&m)?;
    }
    Ok(m.scale(c * lam.powi(-(a as i32) - b as i32)))
}

/// `G_λ(z^α z̄^β)` for a general monomial. Factors on distinct axes commute,
/// so the correspondence is the product of single-axis pure powers, each
/// carrying its own registry constant. Axes with both `α_j, β_j > 0` are rejected.
pub fn weyl_correspondence_multi(spec: &HermiteBasisSpec, alpha: &MultiIndex, beta: &MultiIndex) -> Result<OperatorMatrix> {
    let n = spec.n();
    ensure(alpha.dim() == n && beta.dim() == n, || "monomial dimension mismatch".into())?;
    let holo: Vec<usize> = (0..n).filter(|&j| alpha.0[j] > 0).collect();
    let anti: Vec<usize> = (0..n).filter(|&j| beta.0[j] > 0).collect();
    if let Some(j) = holo.iter().find(|j| beta.0[**j] > 0) {
        return Err(Error::Unsupported(format!(
            "z_{j} and z̄_{j} both occur: same-axis mixed monomials are not covered by the monomial correspondence"
        )));
    }
    // z_j^a z̄_k^b with one axis each: use the two-index constant directly.
    if holo.len() <= 1 && anti.len() <= 1 {
        let j = holo.first().copied().unwrap_or(0);
        let k = anti.first().copied().unwrap_or(if n > 1 && j == 0 { 1 } else { 0 });
        return weyl_correspondence_monomial(spec, j, k, alpha.0[j], beta.0[k]);
    }
    let mut m = OperatorMatrix::identity(spec);
    for &j in &holo {
        m = weyl_correspondence_monomial(spec, j, j, alpha.0[j], 0)?.mul(&m)?;
    }
    for &k in &anti {
        m = weyl_correspondence_monomial(spec, k, k, 0, beta.0[k])?.mul(&m)?;
    }
    Ok(m)
}

/// `G_λ(P)` for a solid harmonic, by linearity over its monomials.
pub fn weyl_correspondence(p: &SolidHarmonic, spec: &HermiteBasisSpec) -> Result<OperatorMatrix> {
    ensure(p.n == spec.n(), || "polynomial and basis dimensions differ".into())?;
    let mut m = OperatorMatrix::zeros(spec);
    for ((alpha, beta), c) in &p.coeffs {
        if *c == C64::new(0.0, 0.0) {
            continue;
        }
        m = m.add(&weyl_correspondence_multi(spec, alpha, beta)?.scale(*c))?;
    }
    Ok(m)
}
