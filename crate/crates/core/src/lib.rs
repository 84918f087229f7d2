//! Numerical laboratory for harmonic analysis on the Heisenberg group.
//!
//! The crate is organised bottom-up:
//!
//! - [`hermite`]: scaled Hermite basis, ladder operators, spectral multipliers.
//! - [`weyl`]: Weyl transform, twisted convolution, Weyl correspondence.
//! - [`laguerre`]: special Hermite operator `L(λ)`, Laguerre projections and kernels.
//! - [`geller`]: solid harmonics, Geller's operator spherical harmonics, homogeneity tests.
//! - [`riesz`]: scaled special-Hermite Riesz transforms and their `λ → 0` limit.
//! - [`heisenberg`]: the contracted groups `H¹_ε` and the `ε → 0` experiments.
//!
//! Calibrated constants live in [`constants`]; [`experiments`] wires everything
//! into reproducible [`report::ExperimentReport`]s.

pub mod error;
pub mod quadrature;
pub mod hermite;
pub mod constants;
pub mod weyl;
pub mod battery;
pub mod geller;
pub mod laguerre;
pub mod riesz;
pub mod heisenberg;
pub mod report;
pub mod experiments;

pub use error::{Error, Result};

/// Complex double.
pub type C64 = num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/hermite.md")]
    pub struct Hermite;
    #[doc = include_str!("../../../book/src/weyl.md")]
    pub struct Weyl;
    #[doc = include_str!("../../../book/src/laguerre.md")]
    pub struct Laguerre;
    #[doc = include_str!("../../../book/src/geller.md")]
    pub struct Geller;
    #[doc = include_str!("../../../book/src/riesz.md")]
    pub struct Riesz;
    #[doc = include_str!("../../../book/src/heisenberg.md")]
    pub struct Heisenberg;
    #[doc = include_str!("../../../book/src/experiments.md")]
    pub struct Experiments;
}
