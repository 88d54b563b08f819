//! Quantum Fisher information, state distances and multipartite entanglement
//! bounds for qubit registers.
//!
//! The crate is layered bottom-up:
//!
//! - [`linalg`]: validated dense complex matrices, states and eigensystems.
//! - [`families`]: GHZ-type families, the collective `σ_z/2` Hamiltonian and
//!   closed-form QFI / GME / relative block sizes.
//! - [`qfi`]: QFI by spectral sum, SLD, purification and sampled convex roof.
//! - [`geometry`]: fidelity, Bures and trace distance.
//! - [`entanglement`]: geometric measure of entanglement and producibility.
//! - [`bounds`]: continuity relations, caps and audits.
//! - [`scaling`]: scheduled sweeps over `N` and exponent fits.
//!
//! Qubit 0 is the most significant bit of a basis index. All randomness is
//! seeded ([`random::rng`]).

pub mod bounds;
pub mod entanglement;
pub mod error;
pub mod families;
pub mod geometry;
pub mod linalg;
pub mod optimize;
pub mod qfi;
pub mod random;
pub mod scaling;
pub mod tol;

pub use error::{Error, Result};
pub use families::{DenseCap, FamilyKind, ScheduleSpec, StateFamilySpec};
pub use linalg::{ComplexMatrix, DensityMatrix, EigenSystem, HermitianMatrix, PureState, C64};

/// Crate version, embedded in every serialised output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
