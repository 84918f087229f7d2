//! Registry of calibrated normalization constants.
//!
//! Several identities hold only up to a normalization the source material
//! leaves open. Each such constant is fitted once (see [`calibrate`]), written
//! to `data/constants.json` and frozen; reports embed the file's SHA-256.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::C64;

pub mod calibrate;

const SHIPPED: &str = include_str!("../data/constants.json");

/// One complex constant indexed by a bidegree.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Bidegree {
    pub a: usize,
    pub b: usize,
    pub re: f64,
    pub im: f64,
}

/// The frozen constants. Field docs state what each constant normalizes.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Registry {
    pub version: u32,
    /// How and where the values were fitted.
    pub provenance: String,
    /// `C_n` in `‖f‖² = C_n |λ|^n ‖W_λ f‖²_HS` (n = 1).
    pub weyl_plancherel: f64,
    /// `W_λ(ℱ_λ 1)` at `λ = 1`; dividing by it (scaled by `|λ|^{−2n}`) gives `G_λ(1) = I`.
    pub weyl_correspondence_unit: f64,
    /// `c(a,b)` in `G_λ(z_j^a z̄_k^b) = c(a,b) λ^{−a−b} (A_k*)^b A_j^a`.
    pub weyl_monomial: Vec<Bidegree>,
    /// `c_n(a,0)` in `G(z^a) P_k = c_n(a,0) W(z^a φ_{k−a}^{n+a−1})` (n = 1).
    pub hecke_bochner: Vec<Bidegree>,
    /// Mass constant in `∫ p_t^λ = C (cosh t|λ|)^{−n}`.
    pub heat_mass: f64,
    /// `c_{n,λ}` of the fundamental-solution integral (n = 1, λ = 1).
    pub fundamental: f64,
    /// Prefactor of `K_γ^λ` and `K_γ^0` making `∫ e^{−iℜ(z·w̄)} K_γ^0(w) dw = (γ² + |z|²)^{−1/2}` (n = 1).
    pub resolvent_kernel: f64,
}

impl Registry {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("constants registry: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("registry serializes") + "\n"
    }

    pub fn weyl_monomial(&self, a: usize, b: usize) -> Result<C64> {
        if a == 0 && b == 0 {
            return Ok(C64::new(1.0, 0.0));
        }
        self.weyl_monomial
            .iter()
            .find(|c| c.a == a && c.b == b)
            .map(|c| C64::new(c.re, c.im))
            .ok_or_else(|| Error::Unsupported(format!("no calibrated constant c({a},{b})")))
    }

    pub fn hecke_bochner(&self, a: usize, b: usize) -> Result<C64> {
        self.hecke_bochner
            .iter()
            .find(|c| c.a == a && c.b == b)
            .map(|c| C64::new(c.re, c.im))
            .ok_or_else(|| Error::Unsupported(format!("no calibrated constant c_1({a},{b})")))
    }
}

/// The shipped registry.
pub fn registry() -> &'static Registry {
    static R: OnceLock<Registry> = OnceLock::new();
    R.get_or_init(|| Registry::from_json(SHIPPED).expect("shipped constants.json parses"))
}

/// SHA-256 (hex) of the shipped registry file.
pub fn registry_hash() -> String {
    hex::encode(Sha256::digest(SHIPPED.as_bytes()))
}

/// Raw text of the shipped registry file.
pub fn registry_text() -> &'static str {
    SHIPPED
}
