//! Exact and truncated matrix product states (MPS) for finite-dimensional
//! quantum states, with the workbenches built on top of them:
//!
//! - [`linalg`]: dense complex matrices, SVD, and Hermitian eigensolver.
//! - [`state`]: dense states, reduced density matrices, Schmidt spectra and
//!   von Neumann entropy computed directly from amplitudes.
//! - [`mps`]: Vidal-form MPS construction, truncation, contraction, and
//!   periodic (trace-form) MPS.
//! - [`ising`]: transverse-field Ising chain, Lanczos ground states, block
//!   entropy scans and central charge fits.
//! - [`clifford`]: gamma-matrix MPS for the Levi-Civita tensor and the
//!   Slater (Laughlin `m = 1`) state.
//! - [`image`]: quadtree addressing of grey images and MPS-truncation
//!   compression.
//!
//! All flat indices are big-endian in site order: site 1 is the most
//! significant digit.

pub mod clifford;
pub mod error;
pub mod image;
pub mod ising;
pub mod linalg;
pub mod mps;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Library version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
