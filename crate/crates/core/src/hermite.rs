//! Scaled Hermite basis `Φ_α^λ`, ladder operators, diagonal spectral
//! multipliers of `H(λ)` and Gauss-Hermite tensor grids.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::error::{ensure, Error, Result};
use crate::quadrature::gauss_hermite;
use crate::C64;

/// Multi-index `α ∈ ℕⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }
    pub fn dim(&self) -> usize {
        self.0.len()
    }
    /// `α + e_j`
    pub fn raised(&self, j: usize) -> Self {
        let mut v = self.0.clone();
        v[j] += 1;
        MultiIndex(v)
    }
    /// `α − e_j`, or `None` when `α_j = 0`
    pub fn lowered(&self, j: usize) -> Option<Self> {
        let mut v = self.0.clone();
        if v[j] == 0 {
            return None;
        }
        v[j] -= 1;
        Some(MultiIndex(v))
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

/// All multi-indices of length `n` and order exactly `k`, lexicographically
/// decreasing (`(k,0,..)` first).
pub fn indices_of_order(n: usize, k: usize) -> Vec<MultiIndex> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if n == 1 {
            prefix.push(k);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first);
            rec(n - 1, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug)]
struct BasisInner {
    n: usize,
    lambda: f64,
    k: usize,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
}

/// Truncated scaled Hermite basis `{Φ_α^λ : |α| ≤ K}` in graded lexicographic order.
#[derive(Debug, Clone)]
pub struct HermiteBasisSpec(Arc<BasisInner>);

impl PartialEq for HermiteBasisSpec {
    fn eq(&self, o: &Self) -> bool {
        self.0.n == o.0.n && self.0.lambda == o.0.lambda && self.0.k == o.0.k
    }
}

impl HermiteBasisSpec {
    pub fn new(n: usize, lambda: f64, k: usize) -> Result<Self> {
        ensure(n >= 1, || "dimension n must be positive".into())?;
        ensure(lambda != 0.0 && lambda.is_finite(), || "lambda must be finite and nonzero".into())?;
        ensure(k >= 1, || "truncation K must be at least 1".into())?;
        let indices: Vec<MultiIndex> = (0..=k).flat_map(|l| indices_of_order(n, l)).collect();
        let lookup = indices.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        Ok(HermiteBasisSpec(Arc::new(BasisInner { n, lambda, k, indices, lookup })))
    }
    pub fn n(&self) -> usize {
        self.0.n
    }
    pub fn lambda(&self) -> f64 {
        self.0.lambda
    }
    pub fn k(&self) -> usize {
        self.0.k
    }
    pub fn len(&self) -> usize {
        self.0.indices.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn indices(&self) -> &[MultiIndex] {
        &self.0.indices
    }
    pub fn index_of(&self, a: &MultiIndex) -> Option<usize> {
        self.0.lookup.get(a).copied()
    }
    /// Same truncation at another `λ`.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.n(), lambda, self.k())
    }
    fn check(&self, a: &MultiIndex) -> Result<()> {
        ensure(a.dim() == self.n(), || format!("multi-index has length {}, expected {}", a.dim(), self.n()))?;
        if a.order() > self.k() {
            return Err(Error::OutOfTruncation { order: a.order(), k: self.k() });
        }
        Ok(())
    }
}

/// Normalized Hermite functions `h_0(x), …, h_kmax(x)` (unit `L²(ℝ)` norm,
/// positive leading coefficient), by the upward recurrence
/// `h_{k+1} = √(2/(k+1)) x h_k − √(k/(k+1)) h_{k−1}`.
///
/// The Gaussian factor is applied last, with the running magnitude tracked
/// separately, so large `|x|` does not underflow the recurrence.
pub fn hermite_functions_1d(kmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    let base_log = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let mut log_scale = 0.0f64;
    let (mut prev, mut cur) = (0.0f64, 1.0f64);
    out[0] = base_log.exp();
    for k in 0..kmax {
        let next = (2.0 / (k as f64 + 1.0)).sqrt() * x * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            cur *= 1e-150;
            prev *= 1e-150;
            log_scale += 150.0 * std::f64::consts::LN_10;
        }
        out[k + 1] = cur * (base_log + log_scale).exp();
    }
    out
}

/// `Φ_α^λ(x) = |λ|^{n/4} Π_j h_{α_j}(√|λ| x_j)` at each point.
pub fn hermite_eval(spec: &HermiteBasisSpec, alpha: &MultiIndex, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    spec.check(alpha)?;
    let s = spec.lambda().abs().sqrt();
    let pref = spec.lambda().abs().powf(spec.n() as f64 / 4.0);
    points
        .iter()
        .map(|p| {
            ensure(p.len() == spec.n(), || "point dimension mismatch".into())?;
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("{p:?}")));
            }
            Ok(p.iter()
                .zip(&alpha.0)
                .map(|(&x, &a)| hermite_functions_1d(a, s * x)[a])
                .product::<f64>()
                * pref)
        })
        .collect()
}

/// Tensor Gauss-Hermite rule for the weight `e^{−|λ||x|²}` on `ℝⁿ`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    /// `weights[i] · e^{|λ||x_i|²}`: weights for integrating plain functions.
    pub fn_weights: Vec<f64>,
    pub accuracy_degree: usize,
}

impl QuadratureGrid {
    /// `∫ f g` for functions (not weight-stripped polynomials) sampled at the nodes.
    pub fn integrate_product(&self, f: &[f64], g: &[f64]) -> f64 {
        self.fn_weights.iter().zip(f).zip(g).map(|((w, a), b)| w * a * b).sum()
    }
}

/// Gauss-Hermite tensor grid adapted to `spec`; requires `points_per_axis ≥ 2K+2`.
pub fn gauss_hermite_grid(spec: &HermiteBasisSpec, points_per_axis: usize) -> Result<QuadratureGrid> {
    let required = 2 * spec.k() + 2;
    if points_per_axis < required {
        return Err(Error::TooFewPoints { required, k: spec.k(), got: points_per_axis });
    }
    let rule = gauss_hermite(points_per_axis);
    let s = spec.lambda().abs().sqrt();
    let n = spec.n();
    let total = points_per_axis.pow(n as u32);
    let mut nodes = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut fn_weights = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut p = vec![0.0; n];
        let (mut w, mut fw) = (1.0, 1.0);
        for j in (0..n).rev() {
            let i = rem % points_per_axis;
            rem /= points_per_axis;
            p[j] = rule.nodes[i] / s;
            w *= rule.weights[i] / s;
            fw *= rule.fn_weights[i] / s;
        }
        nodes.push(p);
        weights.push(w);
        fn_weights.push(fw);
    }
    Ok(QuadratureGrid { nodes, weights, fn_weights, accuracy_degree: 2 * points_per_axis - 1 })
}

/// Finite truncation of a bounded operator in the scaled Hermite basis.
/// Entry `(α, β)` is `⟨T Φ_β, Φ_α⟩`.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub basis: HermiteBasisSpec,
    pub entries: DMatrix<C64>,
    /// Accumulated bound on mass lost to truncation.
    pub leakage: f64,
}

impl OperatorMatrix {
    pub fn zeros(basis: &HermiteBasisSpec) -> Self {
        let d = basis.len();
        OperatorMatrix { basis: basis.clone(), entries: DMatrix::zeros(d, d), leakage: 0.0 }
    }
    pub fn identity(basis: &HermiteBasisSpec) -> Self {
        let d = basis.len();
        OperatorMatrix { basis: basis.clone(), entries: DMatrix::identity(d, d), leakage: 0.0 }
    }
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
    pub fn get(&self, a: &MultiIndex, b: &MultiIndex) -> C64 {
        match (self.basis.index_of(a), self.basis.index_of(b)) {
            (Some(i), Some(j)) => self.entries[(i, j)],
            _ => C64::new(0.0, 0.0),
        }
    }
    fn same_basis(&self, o: &Self) -> Result<()> {
        if self.basis != o.basis {
            return Err(Error::GridMismatch("operators live on different bases".into()));
        }
        Ok(())
    }
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_basis(o)?;
        Ok(OperatorMatrix { basis: self.basis.clone(), entries: &self.entries * &o.entries, leakage: self.leakage + o.leakage })
    }
    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_basis(o)?;
        Ok(OperatorMatrix { basis: self.basis.clone(), entries: &self.entries + &o.entries, leakage: self.leakage + o.leakage })
    }
    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_basis(o)?;
        Ok(OperatorMatrix { basis: self.basis.clone(), entries: &self.entries - &o.entries, leakage: self.leakage + o.leakage })
    }
    pub fn scale(&self, c: C64) -> Self {
        OperatorMatrix { basis: self.basis.clone(), entries: &self.entries * c, leakage: self.leakage }
    }
    pub fn adjoint(&self) -> Self {
        OperatorMatrix { basis: self.basis.clone(), entries: self.entries.adjoint(), leakage: self.leakage }
    }
    /// Hilbert-Schmidt norm (Frobenius norm of the entries).
    pub fn hs_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
    /// `tr(S* T)`
    pub fn hs_inner(&self, s: &Self) -> C64 {
        self.entries.iter().zip(s.entries.iter()).map(|(t, s)| t * s.conj()).sum()
    }
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let x = nalgebra::DVector::from_column_slice(v);
        (&self.entries * x).iter().copied().collect()
    }
    /// Restriction to columns of level `k` (`T P_k`).
    pub fn times_projection(&self, k: usize) -> Self {
        let mut out = self.clone();
        for (j, b) in self.basis.indices().iter().enumerate() {
            if b.order() != k {
                out.entries.column_mut(j).fill(C64::new(0.0, 0.0));
            }
        }
        out
    }
    /// JSON form: shape, basis metadata and row-major `[re, im]` pairs.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.dim())
            .flat_map(|i| (0..self.dim()).map(move |j| (i, j)))
            .map(|(i, j)| json!([self.entries[(i, j)].re, self.entries[(i, j)].im]))
            .collect();
        json!({
            "n": self.basis.n(),
            "lambda": self.basis.lambda(),
            "trunc_k": self.basis.k(),
            "shape": [self.dim(), self.dim()],
            "leakage": self.leakage,
            "entries": rows,
        })
    }
}

/// Which ladder operator to apply, with its axis `j` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    /// `A_j(λ) Φ_α = √(2α_j|λ|) Φ_{α−e_j}`
    Annihilate(usize),
    /// `A_j(λ)* Φ_α = √((2α_j+2)|λ|) Φ_{α+e_j}`
    Create(usize),
}

/// Output of [`ladder_apply`]: shifted coefficients and the squared norm dropped at the cutoff.
#[derive(Debug, Clone)]
pub struct LadderOutput {
    pub coeffs: Vec<C64>,
    pub discarded_mass: f64,
}

pub fn ladder_apply(spec: &HermiteBasisSpec, kind: Ladder, coeffs: &[C64]) -> Result<LadderOutput> {
    ensure(coeffs.len() == spec.len(), || format!("expected {} coefficients, got {}", spec.len(), coeffs.len()))?;
    let j = match kind {
        Ladder::Annihilate(j) | Ladder::Create(j) => j,
    };
    ensure(j < spec.n(), || format!("axis {j} out of range for n = {}", spec.n()))?;
    let lam = spec.lambda().abs();
    let mut out = vec![C64::new(0.0, 0.0); spec.len()];
    let mut lost = 0.0;
    for (i, a) in spec.indices().iter().enumerate() {
        let c = coeffs[i];
        match kind {
            Ladder::Annihilate(j) => {
                if let Some(b) = a.lowered(j) {
                    let f = (2.0 * a.0[j] as f64 * lam).sqrt();
                    out[spec.index_of(&b).unwrap()] += c * f;
                }
            }
            Ladder::Create(j) => {
                let f = ((2.0 * a.0[j] as f64 + 2.0) * lam).sqrt();
                let b = a.raised(j);
                match spec.index_of(&b) {
                    Some(t) => out[t] += c * f,
                    None => lost += (c * f).norm_sqr(),
                }
            }
        }
    }
    Ok(LadderOutput { coeffs: out, discarded_mass: lost })
}

/// Matrix of a ladder operator on the truncation. Columns whose image leaves
/// the truncation are zero; `leakage` records the largest dropped column mass.
pub fn ladder_matrix(spec: &HermiteBasisSpec, kind: Ladder) -> Result<OperatorMatrix> {
    let mut m = OperatorMatrix::zeros(spec);
    let mut leak: f64 = 0.0;
    for j in 0..spec.len() {
        let mut e = vec![C64::new(0.0, 0.0); spec.len()];
        e[j] = C64::new(1.0, 0.0);
        let o = ladder_apply(spec, kind, &e)?;
        leak = leak.max(o.discarded_mass);
        for (i, v) in o.coeffs.into_iter().enumerate() {
            m.entries[(i, j)] = v;
        }
    }
    m.leakage = leak;
    Ok(m)
}

/// Diagonal operator with entry `scalar_map(|α|)` at `(α, α)`.
pub fn spectral_multiplier<F: Fn(usize) -> C64>(spec: &HermiteBasisSpec, scalar_map: F) -> Result<OperatorMatrix> {
    let table: Vec<C64> = (0..=spec.k()).map(&scalar_map).collect();
    if let Some(k) = table.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite(format!("multiplier value at level {k}")));
    }
    let mut m = OperatorMatrix::zeros(spec);
    for (i, a) in spec.indices().iter().enumerate() {
        m.entries[(i, i)] = table[a.order()];
    }
    Ok(m)
}

/// Orthogonal projection `P_k` onto the level-`k` eigenspace of `H(λ)`.
pub fn projection(spec: &HermiteBasisSpec, k: usize) -> Result<OperatorMatrix> {
    if k > spec.k() {
        return Err(Error::OutOfTruncation { order: k, k: spec.k() });
    }
    spectral_multiplier(spec, |l| C64::new(if l == k { 1.0 } else { 0.0 }, 0.0))
}

/// `H(λ) = ½ Σ_j (A_j A_j* + A_j* A_j)` assembled from ladder matrices.
/// Correct on the interior `|α| ≤ K−1`; the top level is truncated.
pub fn hamiltonian_from_ladders(spec: &HermiteBasisSpec) -> Result<OperatorMatrix> {
    let mut h = OperatorMatrix::zeros(spec);
    for j in 0..spec.n() {
        let a = ladder_matrix(spec, Ladder::Annihilate(j))?;
        let c = ladder_matrix(spec, Ladder::Create(j))?;
        h = h.add(&a.mul(&c)?.add(&c.mul(&a)?)?.scale(C64::new(0.5, 0.0)))?;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order() {
        let s = HermiteBasisSpec::new(2, 1.0, 2).unwrap();
        let v: Vec<Vec<usize>> = s.indices().iter().map(|a| a.0.clone()).collect();
        assert_eq!(v, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn no_underflow_far_out() {
        let h = hermite_functions_1d(300, 30.0);
        assert!(h.iter().all(|v| v.is_finite()));
        assert!(h[300] > 0.0);
    }
}
