//! Pseudospectral laboratory for the Novikov-Veselov (NV) and modified
//! Novikov-Veselov (mNV) equations on a periodic box.
//!
//! The crate has three layers:
//!
//! * spectral plumbing: grids, transforms, Fourier multipliers, norms
//!   ([`grid`], [`field`], [`norms`], [`cutoffs`], [`spacetime`], [`localized`]);
//! * the NV-specific operators and time evolution: dispersion symbol,
//!   Wirtinger derivatives and their unimodular inverse ratios, the quadratic
//!   and cubic nonlinearities, exponential integrators and the Duhamel/Picard
//!   fixed-point machinery ([`symbols`], [`operators`], [`timestep`]);
//! * numerical verification harnesses for the dispersive, Strichartz, L^4,
//!   multilinear and X^{s,b} inequalities satisfied by the linear flow, and
//!   the supercritical counterexample that separates N^{-4s-4} from N^{-s-4}
//!   ([`harness`], [`illposed`]).
//!
//! Everything is deterministic given a seed, and every verification routine
//! returns an [`report::EstimateReport`] that can be serialized as CSV.

pub mod cutoffs;
pub mod field;
pub mod fft;
pub mod grid;
pub mod harness;
pub mod illposed;
pub mod io;
pub mod localized;
pub mod norms;
pub mod operators;
pub mod quad;
pub mod report;
pub mod rng;
pub mod spacetime;
pub mod symbols;
pub mod timestep;

use thiserror::Error;

/// Errors shared by every module of the laboratory.
#[derive(Debug, Error)]
pub enum NvError {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite multiplier value at (xi, mu) = ({xi}, {mu})")]
    NonFiniteMultiplier { xi: f64, mu: f64 },
    #[error("Nyquist modes are contaminated (max |coeff| = {0:e})")]
    NyquistContamination(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("divergent norm: homogeneous weight with s < 0 requires zero mean")]
    DivergentNorm,
    #[error("band violation: {0}")]
    BandViolation(String),
    #[error("non-finite field detected at t = {0}")]
    NonFinite(f64),
    #[error("inadmissible Strichartz triple: 3/p + 2/q = {lhs} but 1 - gamma = {rhs}")]
    Inadmissible { lhs: f64, rhs: f64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad field file: {0}")]
    BadFieldFile(String),
}

pub type Result<T> = std::result::Result<T, NvError>;

pub use field::{PhysicalField, SpectralField};
pub use grid::{GridSpec, SpaceTimeGridSpec};
pub use spacetime::{NormSpec, SpaceTimeField};
