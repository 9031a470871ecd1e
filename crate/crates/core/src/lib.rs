//! Verification kernel for Reid-type operator inequalities
//! `|⟨AKx, x⟩| <= ‖K‖ ⟨Ax, x⟩` on finite-dimensional complex Hilbert spaces.
//!
//! The crate is `no_std` and only needs `alloc`. It provides
//!
//! * dense complex matrices and a Hermitian eigensolver ([`matrix`], [`spectral`]),
//! * tolerance-gated operator-class predicates ([`predicates`]),
//! * a certified decision procedure for `|⟨Mx, x⟩| <= ⟨Px, x⟩` over all `x`
//!   ([`certifier`]),
//! * seeded generators of hypothesis-satisfying pairs ([`generators`]),
//! * the truncated unilateral shift counterexample in exact integer
//!   arithmetic ([`shift`]),
//! * executable checks for each step of the domination argument
//!   ([`proof_steps`]).
//!
//! File formats, reports and the command-line front end live in the
//! `reid-lab` crate.

#![no_std]

extern crate alloc;

pub mod certifier;
pub mod error;
pub mod generators;
pub mod matrix;
pub mod predicates;
pub mod proof_steps;
pub mod shift;
pub mod spectral;
pub mod tolerance;

pub use certifier::{CertStatus, GapCertificate, ReidInstance};
pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, ComplexVector};
pub use spectral::SpectralDecomposition;
pub use tolerance::TolerancePolicy;
