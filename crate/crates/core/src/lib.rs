//! Two-mode bosonic simulator for the beam-splitter / parametric-amplifier
//! duality.
//!
//! The crate is organised bottom-up:
//!
//! - [`fock`]: truncated two-mode Fock space, ladder operators and the
//!   Jordan–Schwinger realisations of su(2) and su(1,1).
//! - [`linalg`]: dense complex matrix exponential (scaling and squaring).
//! - [`devices`]: beam splitter and parametric amplifier amplitudes, the
//!   disentangled amplifier action and a brute-force exponential oracle.
//! - [`duality`]: the matrix-element relation between an amplifier of gain
//!   `g` and a beam splitter of transmittance `1/g`.
//! - [`qubit`]: a small dense statevector simulator with post-selected Bell
//!   measurements and a line-oriented circuit text format.
//! - [`qpdc`]: binary/physical encodings and the `q = 1` truncated amplifier
//!   circuit built from beam-splitter rotations only.
//! - [`observables`]: photon-number and two-mode quadrature observables of
//!   the truncated amplifier.
//!
//! Conventions used everywhere:
//!
//! - Beam splitter `U = exp(2iθ J_y)` with `cos²θ = η`, so that
//!   `a → cosθ a + sinθ b`, `b → −sinθ a + cosθ b` in the Heisenberg picture.
//! - Amplifier `U = exp(2iφ K_y)` with `cosh²φ = g`.
//! - Fock basis ordered by ascending total photon number, then ascending
//!   occupation of mode `a`.
//! - Qubit 0 is the least significant bit of a basis label.

pub mod devices;
pub mod duality;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod observables;
pub mod qpdc;
pub mod qubit;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Tolerance for identities that hold exactly up to round-off.
pub const EXACT_TOL: f64 = 1e-10;

/// Tolerance for identities limited by Fock-space truncation.
pub const TRUNCATION_TOL: f64 = 1e-8;
