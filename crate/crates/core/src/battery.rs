//! Analytic Gaussian test functions and the seeded battery used by the
//! Plancherel, projection and Sobolev checks.

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::weyl::SmoothFunction;
use crate::C64;

/// `f(q) = A exp(−a|q − c|² + i k·q)` on `ℂⁿ ≅ ℝ^{2n}`,
/// coordinates ordered `x_1..x_n, y_1..y_n`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Gaussian {
    pub amplitude: f64,
    pub width: f64,
    pub center: Vec<f64>,
    pub modulation: Vec<f64>,
}

impl Gaussian {
    /// Centred, unmodulated `e^{−a|z|²}` on `ℂⁿ`.
    pub fn centered(n: usize, a: f64) -> Self {
        Gaussian { amplitude: 1.0, width: a, center: vec![0.0; 2 * n], modulation: vec![0.0; 2 * n] }
    }
    pub fn n(&self) -> usize {
        self.center.len() / 2
    }
    fn coords(z: &[C64]) -> Vec<f64> {
        z.iter().map(|v| v.re).chain(z.iter().map(|v| v.im)).collect()
    }
    fn linear(&self, q: &[f64]) -> Vec<C64> {
        q.iter()
            .enumerate()
            .map(|(m, &x)| C64::new(-2.0 * self.width * (x - self.center[m]), self.modulation[m]))
            .collect()
    }
    /// `‖f‖₂² = A² (π/(2a))^n`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.amplitude.powi(2) * (std::f64::consts::PI / (2.0 * self.width)).powi(self.n() as i32)
    }
    /// `f̂(ζ) = ∫ f(q) e^{−iζ·q} dq`.
    pub fn fourier(&self, zeta: &[f64]) -> C64 {
        let a = self.width;
        let mut expo = C64::new(0.0, 0.0);
        for (m, &s) in zeta.iter().enumerate() {
            let d = s - self.modulation[m];
            expo += C64::new(-d * d / (4.0 * a), -d * self.center[m]);
        }
        self.amplitude * (std::f64::consts::PI / a).powi(self.n() as i32) * expo.exp()
    }
    /// Gradient of `f̂` divided by `f̂`.
    pub fn fourier_log_gradient(&self, zeta: &[f64]) -> Vec<C64> {
        zeta.iter()
            .enumerate()
            .map(|(m, &s)| C64::new(-(s - self.modulation[m]) / (2.0 * self.width), -self.center[m]))
            .collect()
    }
}

impl SmoothFunction for Gaussian {
    fn dim(&self) -> usize {
        self.n()
    }
    fn value(&self, z: &[C64]) -> C64 {
        let q = Self::coords(z);
        let mut e = C64::new(0.0, 0.0);
        for (m, &x) in q.iter().enumerate() {
            let d = x - self.center[m];
            e += C64::new(-self.width * d * d, self.modulation[m] * x);
        }
        self.amplitude * e.exp()
    }
    fn gradient(&self, z: &[C64]) -> Vec<(C64, C64)> {
        let q = Self::coords(z);
        let f = self.value(z);
        let l = self.linear(&q);
        let n = self.n();
        (0..n).map(|j| (f * l[j], f * l[n + j])).collect()
    }
    fn hessian(&self, z: &[C64]) -> Option<DMatrix<C64>> {
        let q = Self::coords(z);
        let f = self.value(z);
        let l = self.linear(&q);
        let d = q.len();
        Some(DMatrix::from_fn(d, d, |r, c| {
            let diag = if r == c { -2.0 * self.width } else { 0.0 };
            f * (l[r] * l[c] + diag)
        }))
    }
}

const BATTERY: &str = include_str!("../data/battery.json");

/// The ten seeded Gaussians on `ℂ¹` shipped in `data/battery.json`.
pub fn battery() -> Vec<Gaussian> {
    serde_json::from_str(BATTERY).expect("shipped battery.json parses")
}
