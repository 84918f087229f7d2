//! Bigraded solid harmonics, Geller constants and operator spherical
//! harmonics, operator homogeneity of degree zero, the `U(1)` band projection
//! and the transfer operator `C_δ(H) H^{−(a+b)/2}`.
//!
//! Two notions are kept apart: a multiplier `m(λ)` can be dilation-homogeneous
//! (covariant under `d_r`) without being operator-homogeneous in the sense
//! tested by [`homogeneity_test`], which asks for `k`-independent normalized
//! Geller coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{ensure, Error, Result};
use crate::hermite::{indices_of_order, spectral_multiplier, HermiteBasisSpec, MultiIndex, OperatorMatrix};
use crate::weyl::weyl_correspondence;
use crate::C64;

/// Monomial key `(α, β)` for `z^α z̄^β`.
pub type Monomial = (MultiIndex, MultiIndex);

/// `P(z) = Σ a_{αβ} z^α z̄^β` of bidegree `(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolidHarmonic {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub coeffs: BTreeMap<Monomial, C64>,
}

impl SolidHarmonic {
    /// The single monomial `z^α z̄^β` with coefficient 1.
    pub fn monomial(alpha: MultiIndex, beta: MultiIndex) -> Self {
        let (n, a, b) = (alpha.dim(), alpha.order(), beta.order());
        SolidHarmonic { n, a, b, coeffs: BTreeMap::from([((alpha, beta), C64::new(1.0, 0.0))]) }
    }
    pub fn eval(&self, z: &[C64]) -> C64 {
        self.coeffs
            .iter()
            .map(|((al, be), c)| {
                let mut v = *c;
                for j in 0..self.n {
                    v *= z[j].powu(al.0[j] as u32) * z[j].conj().powu(be.0[j] as u32);
                }
                v
            })
            .sum()
    }
    /// Coefficients of `ΔP` with `Δ = 4 Σ ∂²/∂z_j∂z̄_j`.
    pub fn laplacian(&self) -> BTreeMap<Monomial, C64> {
        let mut out: BTreeMap<Monomial, C64> = BTreeMap::new();
        for ((al, be), c) in &self.coeffs {
            for j in 0..self.n {
                if let (Some(a2), Some(b2)) = (al.lowered(j), be.lowered(j)) {
                    *out.entry((a2, b2)).or_default() += c * (4.0 * (al.0[j] * be.0[j]) as f64);
                }
            }
        }
        out
    }
    pub fn scaled(&self, s: C64) -> Self {
        SolidHarmonic { coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * s)).collect(), ..self.clone() }
    }
}

/// Monomials of bidegree `(a, b)` in lexicographic `(α, β)` order.
pub fn monomials(n: usize, a: usize, b: usize) -> Vec<Monomial> {
    let mut alphas = indices_of_order(n, a);
    let mut betas = indices_of_order(n, b);
    alphas.sort();
    betas.sort();
    alphas.iter().flat_map(|al| betas.iter().map(move |be| (al.clone(), be.clone()))).collect()
}

/// Exact rational basis of `{P ∈ 𝒫_{a,b} : ΔP = 0}`, as coefficient vectors
/// over [`monomials`], from the reduced row echelon form of the Laplacian.
pub fn harmonic_null_space(n: usize, a: usize, b: usize) -> Vec<Vec<BigRational>> {
    let cols = monomials(n, a, b);
    if a == 0 || b == 0 {
        return (0..cols.len())
            .map(|i| (0..cols.len()).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
    }
    let rows = monomials(n, a - 1, b - 1);
    let row_of: BTreeMap<&Monomial, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = vec![vec![BigRational::zero(); cols.len()]; rows.len()];
    for (c, (al, be)) in cols.iter().enumerate() {
        for j in 0..n {
            if let (Some(a2), Some(b2)) = (al.lowered(j), be.lowered(j)) {
                let r = row_of[&(a2, b2)];
                mat[r][c] += BigRational::from_integer(BigInt::from(4 * al.0[j] * be.0[j]));
            }
        }
    }
    // reduced row echelon form
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols.len() {
        let Some(p) = (r..rows.len()).find(|&i| !mat[i][c].is_zero()) else { continue };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for v in mat[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for k in 0..cols.len() {
                    let t = &mat[r][k] * &f;
                    mat[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols.len()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); cols.len()];
            v[fc] = BigRational::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = -mat[pr][fc].clone();
            }
            v
        })
        .collect()
}

/// Exact check that a rational coefficient vector over [`monomials`] is harmonic.
pub fn is_harmonic_exact(n: usize, a: usize, b: usize, v: &[BigRational]) -> bool {
    if a == 0 || b == 0 {
        return true;
    }
    let cols = monomials(n, a, b);
    let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
    for (c, (al, be)) in cols.iter().enumerate() {
        for j in 0..n {
            if let (Some(a2), Some(b2)) = (al.lowered(j), be.lowered(j)) {
                *acc.entry((a2, b2)).or_insert_with(BigRational::zero) +=
                    &v[c] * BigRational::from_integer(BigInt::from(4 * al.0[j] * be.0[j]));
            }
        }
    }
    acc.values().all(|x| x.is_zero())
}

fn ln_factorial(m: usize) -> f64 {
    ln_gamma(m as f64 + 1.0)
}

/// Gaussian moment `(2π)^{−1} ∫_ℂ |z|^{2m} e^{−|z|²/2} dz = 2^m m!`.
fn moment(m: usize) -> f64 {
    (m as f64 * std::f64::consts::LN_2 + ln_factorial(m)).exp()
}

/// `(P, Q) = 2^{−(n+a+b−1)}/Γ(n+a+b) ∫ P Q̄ e^{−|z|²/2} dμ(z)` with the
/// normalized measure `dμ = (2π)^{−n} dz`, evaluated exactly from moments.
/// `(a, b)` is the bidegree of `P`.
pub fn gaussian_inner_product(p: &SolidHarmonic, q: &SolidHarmonic) -> Result<C64> {
    ensure(p.n == q.n, || "dimension mismatch".into())?;
    let n = p.n;
    let pref = (-((n + p.a + p.b - 1) as f64) * std::f64::consts::LN_2 - ln_gamma((n + p.a + p.b) as f64)).exp();
    let mut acc = C64::new(0.0, 0.0);
    for ((a1, b1), c1) in &p.coeffs {
        for ((a2, b2), c2) in &q.coeffs {
            // z^{a1} z̄^{b1} · conj(z^{a2} z̄^{b2}) = z^{a1+b2} z̄^{b1+a2}
            let mut v = 1.0;
            for j in 0..n {
                let (hol, anti) = (a1.0[j] + b2.0[j], b1.0[j] + a2.0[j]);
                if hol != anti {
                    v = 0.0;
                    break;
                }
                v *= moment(hol);
            }
            acc += c1 * c2.conj() * v;
        }
    }
    Ok(acc * pref)
}

/// Orthonormal basis of `ℋ_{a,b}` (n ∈ {1, 2}) under [`gaussian_inner_product`].
///
/// Gram-Schmidt over the exact null-space vectors, always taking the remaining
/// vector of largest residual norm next (ties broken by monomial order).
pub fn solid_harmonic_basis(n: usize, a: usize, b: usize) -> Result<Vec<SolidHarmonic>> {
    ensure(n == 1 || n == 2, || format!("solid harmonics implemented for n ∈ {{1,2}}, got {n}"))?;
    let cols = monomials(n, a, b);
    let null = harmonic_null_space(n, a, b);
    let to_poly = |v: &Vec<BigRational>| SolidHarmonic {
        n,
        a,
        b,
        coeffs: cols
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), C64::new(rational_to_f64(c), 0.0)))
            .collect(),
    };
    let mut rest: Vec<SolidHarmonic> = null.iter().map(to_poly).collect();
    let mut out: Vec<SolidHarmonic> = Vec::new();
    while !rest.is_empty() {
        let norms: Vec<f64> = rest.iter().map(|p| gaussian_inner_product(p, p).map(|v| v.re)).collect::<Result<_>>()?;
        let mut best = 0;
        for i in 1..norms.len() {
            if norms[i] > norms[best] * (1.0 + 1e-12) {
                best = i;
            }
        }
        let e = rest.remove(best).scaled(C64::new(1.0 / norms[best].sqrt(), 0.0));
        for p in rest.iter_mut() {
            let c = gaussian_inner_product(p, &e)?;
            for (k, v) in &e.coeffs {
                *p.coeffs.entry(k.clone()).or_default() -= c * v;
            }
        }
        out.push(e);
    }
    Ok(out)
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let num: f64 = r.numer().to_string().parse().unwrap();
    let den: f64 = r.denom().to_string().parse().unwrap();
    num / den
}

/// `C_δ(2k+n) = (4^{a+b} 2^{n+a+b−1} Γ(k+n+b)/Γ(k−a+1) · Γ(k+1)Γ(n)/Γ(k+n))^{1/2}`.
pub fn geller_constant(n: usize, a: usize, b: usize, k: usize) -> Result<f64> {
    ensure(n >= 1, || "n must be positive".into())?;
    if k < a {
        return Err(Error::Domain(format!("Geller constant needs k ≥ a (k = {k}, a = {a})")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let ln2 = std::f64::consts::LN_2;
    let l = 2.0 * (a + b) as f64 * ln2 + (nf + (a + b) as f64 - 1.0) * ln2 + ln_gamma(kf + nf + b as f64)
        - ln_gamma(kf - a as f64 + 1.0)
        + ln_gamma(kf + 1.0)
        + ln_gamma(nf)
        - ln_gamma(kf + nf);
    Ok((0.5 * l).exp())
}

/// `(T, S)_k = k!(n−1)!/(k+n−1)! Σ_{|α|=k} (TΦ_α, SΦ_α)`.
pub fn operator_inner_product_k(t: &OperatorMatrix, s: &OperatorMatrix, k: usize) -> Result<C64> {
    if t.basis != s.basis {
        return Err(Error::GridMismatch("operators live on different bases".into()));
    }
    let basis = &t.basis;
    if k > basis.k() {
        return Err(Error::OutOfTruncation { order: k, k: basis.k() });
    }
    let n = basis.n();
    let dim_ek = (ln_factorial(k + n - 1) - ln_factorial(k) - ln_factorial(n - 1)).exp();
    let mut acc = C64::new(0.0, 0.0);
    for (c, al) in basis.indices().iter().enumerate() {
        if al.order() != k {
            continue;
        }
        for r in 0..basis.len() {
            acc += t.entries[(r, c)] * s.entries[(r, c)].conj();
        }
    }
    Ok(acc / dim_ek.round())
}

/// A harmonic label `δ = (a, b)` with basis index `j` (0-based) and its polynomial.
#[derive(Debug, Clone)]
pub struct DeltaBasis {
    pub a: usize,
    pub b: usize,
    pub j: usize,
    pub poly: SolidHarmonic,
}

/// All `(δ, j)` at `n` with `|a − b| ≤ max_band` and `a + b ≤ max_degree`,
/// keeping only those whose correspondence is constructible.
pub fn delta_catalog(spec: &HermiteBasisSpec, max_band: usize, max_degree: usize) -> Result<Vec<DeltaBasis>> {
    let n = spec.n();
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        for a in (0..=deg).rev() {
            let b = deg - a;
            if a.abs_diff(b) > max_band {
                continue;
            }
            for (j, poly) in solid_harmonic_basis(n, a, b)?.into_iter().enumerate() {
                if weyl_correspondence(&poly, spec).is_ok() {
                    out.push(DeltaBasis { a, b, j, poly });
                }
            }
        }
    }
    Ok(out)
}

/// `S^δ_{j,k} = C_δ(2k+n)^{−1} G(P_j^δ) P_k`.
pub fn geller_basis_element(p: &SolidHarmonic, k: usize, spec: &HermiteBasisSpec) -> Result<OperatorMatrix> {
    let c = geller_constant(spec.n(), p.a, p.b, k)?;
    Ok(weyl_correspondence(p, spec)?.times_projection(k).scale(C64::new(1.0 / c, 0.0)))
}

/// Whether `G(P^δ) P_k` fits inside the truncation (image level `k − a + b ≤ K`).
pub fn fits_truncation(spec: &HermiteBasisSpec, a: usize, b: usize, k: usize) -> bool {
    k <= spec.k() && k + b <= spec.k() + a
}

/// One cell of a Geller coefficient table.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientCell {
    pub a: usize,
    pub b: usize,
    pub j: usize,
    pub k: usize,
    /// `C_δ(2k+n)^{−2} (M, G(P_j^δ))_k`
    pub raw: C64Pair,
    /// `C_δ(2k+n)^{−1} (M, G(P_j^δ))_k`
    pub normalized: C64Pair,
    pub leakage_flag: bool,
}

/// Serializable complex number.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct C64Pair {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for C64Pair {
    fn from(z: C64) -> Self {
        C64Pair { re: z.re, im: z.im }
    }
}
impl From<C64Pair> for C64 {
    fn from(z: C64Pair) -> Self {
        C64::new(z.re, z.im)
    }
}

/// Geller coefficients of `M` over the given levels and harmonic labels.
pub fn geller_coefficients(m: &OperatorMatrix, ks: &[usize], deltas: &[DeltaBasis]) -> Result<Vec<CoefficientCell>> {
    let spec = &m.basis;
    let mut out = Vec::new();
    for d in deltas {
        let g = weyl_correspondence(&d.poly, spec)?;
        for &k in ks {
            if k < d.a || k > spec.k() {
                continue;
            }
            let c = geller_constant(spec.n(), d.a, d.b, k)?;
            let ip = operator_inner_product_k(m, &g, k)?;
            out.push(CoefficientCell {
                a: d.a,
                b: d.b,
                j: d.j,
                k,
                raw: (ip / (c * c)).into(),
                normalized: (ip / c).into(),
                leakage_flag: !fits_truncation(spec, d.a, d.b, k),
            });
        }
    }
    Ok(out)
}

/// Verdict for one `(δ, j)` coefficient sequence.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaVerdict {
    pub a: usize,
    pub b: usize,
    pub j: usize,
    pub mean: C64Pair,
    pub max_deviation: f64,
    pub homogeneous: bool,
    pub inconclusive: bool,
}

/// Homogeneity diagnostics for an operator.
#[derive(Debug, Clone, Serialize)]
pub struct HomogeneityReport {
    pub tol: f64,
    pub cells: Vec<CoefficientCell>,
    pub verdicts: Vec<DeltaVerdict>,
    pub homogeneous: bool,
    /// `B^δ_j` (the sequence means) when every verdict passes.
    pub reconstructed_b: Option<Vec<BEntry>>,
    /// `‖(M − synthesis) P_k‖_HS` per level, when reconstructed.
    pub reconstruction_distance: Option<Vec<f64>>,
}

/// A synthesis coefficient `B^δ_j`.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct BEntry {
    pub a: usize,
    pub b: usize,
    pub j: usize,
    pub value: C64Pair,
}

/// Options for [`homogeneity_test`].
#[derive(Debug, Clone, Copy)]
pub struct HomogeneityOptions {
    pub max_band: usize,
    pub max_degree: usize,
    /// Levels `a, …, a + window − 1` are examined for each δ.
    pub window: usize,
}

impl Default for HomogeneityOptions {
    fn default() -> Self {
        HomogeneityOptions { max_band: 3, max_degree: 3, window: 13 }
    }
}

/// Tests `k`-independence of `C_δ(2k+n)^{−1}(M, G(P^δ_j))_k`. A sequence is
/// constant when every entry is within `tol · max(1, |mean|)` of its mean;
/// cells whose image leaves the truncation are excluded and, if that leaves
/// fewer than 5 levels, the verdict is inconclusive.
pub fn homogeneity_test(m: &OperatorMatrix, tol: f64, opts: HomogeneityOptions) -> Result<HomogeneityReport> {
    let spec = &m.basis;
    let deltas = delta_catalog(spec, opts.max_band, opts.max_degree)?;
    let mut cells = Vec::new();
    let mut verdicts = Vec::new();
    for d in &deltas {
        let ks: Vec<usize> = (d.a..d.a + opts.window).collect();
        let row = geller_coefficients(m, &ks, std::slice::from_ref(d))?;
        let good: Vec<C64> = row.iter().filter(|c| !c.leakage_flag).map(|c| c.normalized.into()).collect();
        let inconclusive = good.len() < 5;
        let mean = if good.is_empty() { C64::new(0.0, 0.0) } else { good.iter().sum::<C64>() / good.len() as f64 };
        let max_deviation = good.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
        let homogeneous = !inconclusive && max_deviation < tol * mean.norm().max(1.0);
        verdicts.push(DeltaVerdict { a: d.a, b: d.b, j: d.j, mean: mean.into(), max_deviation, homogeneous, inconclusive });
        cells.extend(row);
    }
    let all = verdicts.iter().all(|v| v.homogeneous);
    let (reconstructed_b, reconstruction_distance) = if all {
        let b: Vec<BEntry> = verdicts
            .iter()
            .filter(|v| C64::from(v.mean).norm() > tol)
            .map(|v| BEntry { a: v.a, b: v.b, j: v.j, value: v.mean })
            .collect();
        let synth = homogeneous_synthesis(&b, spec)?;
        let diff = m.sub(&synth)?;
        let dist = (0..=spec.k()).map(|k| diff.times_projection(k).hs_norm()).collect();
        (Some(b), Some(dist))
    } else {
        (None, None)
    };
    Ok(HomogeneityReport { tol, cells, verdicts, homogeneous: all, reconstructed_b, reconstruction_distance })
}

/// `C_δ(H)^{−1} = Σ_{k ≥ a} C_δ(2k+n)^{−1} P_k` (zero on levels below `a`).
pub fn inverse_geller_multiplier(spec: &HermiteBasisSpec, a: usize, b: usize) -> Result<OperatorMatrix> {
    let n = spec.n();
    spectral_multiplier(spec, |k| {
        if k < a {
            C64::new(0.0, 0.0)
        } else {
            C64::new(1.0 / geller_constant(n, a, b, k).unwrap(), 0.0)
        }
    })
}

/// `M = Σ_δ Σ_j B_j^δ G(P_j^δ) C_δ(H)^{−1}`.
pub fn homogeneous_synthesis(b: &[BEntry], spec: &HermiteBasisSpec) -> Result<OperatorMatrix> {
    let mut m = OperatorMatrix::zeros(spec);
    for e in b {
        let basis = solid_harmonic_basis(spec.n(), e.a, e.b)?;
        let p = basis
            .get(e.j)
            .ok_or_else(|| Error::InvalidArgument(format!("δ = ({}, {}) has no basis element {}", e.a, e.b, e.j)))?;
        let term = weyl_correspondence(p, spec)?.mul(&inverse_geller_multiplier(spec, e.a, e.b)?)?;
        m = m.add(&term.scale(e.value.into()))?;
    }
    Ok(m)
}

/// Band of `M` where (column level − row level) = `a − b` (n = 1).
pub fn delta_projection_u1(m: &OperatorMatrix, a: usize, b: usize) -> Result<OperatorMatrix> {
    if m.basis.n() != 1 {
        return Err(Error::Unsupported("band projection is implemented for n = 1 only".into()));
    }
    ensure(a == 0 || b == 0, || "exactly one of a, b may be nonzero".into())?;
    let shift = a as i64 - b as i64;
    let mut out = m.clone();
    let idx = m.basis.indices();
    for (r, al) in idx.iter().enumerate() {
        for (c, be) in idx.iter().enumerate() {
            if be.order() as i64 - al.order() as i64 != shift {
                out.entries[(r, c)] = C64::new(0.0, 0.0);
            }
        }
    }
    Ok(out)
}

/// `c_i` in `(1 − d)^{1/2} = 1 − Σ_{i≥1} c_i d^i`, i.e. `Γ(2i+1)/(2^{2i}Γ(i+1)²(2i−1))`.
///
/// Evaluated as `Π_{m≤i} (2m−1)/(2m) / (2i−1)`, which is exact for small `i`.
pub fn power_series_coeff(i: usize) -> Result<f64> {
    ensure(i >= 1, || "power series index starts at 1".into())?;
    let mut r = 1.0;
    for m in 1..=i {
        r *= (2 * m - 1) as f64 / (2 * m) as f64;
    }
    Ok(r / (2 * i - 1) as f64)
}

/// `C_δ(H) H^{−(a+b)/2}` on levels `0..=K`, split into its normalization
/// constant and the `a + b` factors of the transfer lemma.
#[derive(Debug, Clone)]
pub struct TransferOperator {
    pub matrix: OperatorMatrix,
    /// `(4^{a+b} 2^{n+a+b−1} Γ(n))^{1/2}`
    pub normalization: f64,
    /// Diagonals (indexed by level) of `((k+j)/(2k+n))^{1/2}` for `n ≤ j ≤ n+b−1`,
    /// then `((k−j)/(2k+n))^{1/2}` for `0 ≤ j ≤ a−1`.
    pub factors: Vec<Vec<f64>>,
    /// Levels below `a`, where the operator is set to zero.
    pub zeroed_levels: Vec<usize>,
}

pub fn transfer_operator(n: usize, a: usize, b: usize, k_max: usize) -> Result<TransferOperator> {
    ensure(k_max >= a, || format!("need K ≥ a (K = {k_max}, a = {a})"))?;
    let spec = HermiteBasisSpec::new(n, 1.0, k_max.max(1))?;
    let ln2 = std::f64::consts::LN_2;
    let normalization = (0.5 * (2.0 * (a + b) as f64 * ln2 + (n + a + b - 1) as f64 * ln2 + ln_gamma(n as f64))).exp();
    let level = |k: usize| (2 * k + n) as f64;
    let mut factors = Vec::new();
    for j in n..n + b {
        factors.push((0..=spec.k()).map(|k| ((k + j) as f64 / level(k)).sqrt()).collect());
    }
    for j in 0..a {
        factors.push((0..=spec.k()).map(|k| if k >= j { ((k - j) as f64 / level(k)).sqrt() } else { 0.0 }).collect());
    }
    let matrix = spectral_multiplier(&spec, |k| {
        if k < a {
            C64::new(0.0, 0.0)
        } else {
            C64::new(geller_constant(n, a, b, k).unwrap() * level(k).powf(-((a + b) as f64) / 2.0), 0.0)
        }
    })?;
    Ok(TransferOperator { matrix, normalization, factors, zeroed_levels: (0..a.min(spec.k() + 1)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_null_space_is_exact() {
        for (n, a, b) in [(2, 1, 1), (2, 2, 1), (2, 2, 2), (1, 3, 0)] {
            for v in harmonic_null_space(n, a, b) {
                assert!(is_harmonic_exact(n, a, b, &v));
            }
        }
        assert!(harmonic_null_space(1, 1, 1).is_empty());
        assert!(!is_harmonic_exact(1, 1, 1, &[BigRational::one()]));
    }
}
