//! Quantum friction between two moving ground-state atoms, computed from
//! the velocity series F = Σₙ D⁽ⁿ⁾Λ⁽ⁿ⁾ in the non-retarded regime.
//!
//! Units are reduced: ħ = 1, 4πε₀ = 1, lengths in a reference L,
//! frequencies in a reference Ω, temperature as Θ = kT/ħ.
//!
//! The modules follow the physics pipeline:
//! [`green`] (dipole kernels and contraction tensors) →
//! [`response`] (polarizabilities, FDT, correlation factors Λ⁽ⁿ⁾) →
//! [`dynamics`] (D⁽ⁿ⁾, forces, the direct memory-integral oracle) →
//! [`work`] and [`macroscopic`]. [`scenarios`] drives the batch CLI.

pub mod config;
pub mod dd;
pub mod dynamics;
pub mod error;
pub mod fd;
pub mod green;
pub mod macroscopic;
pub mod quad;
pub mod response;
pub mod scenarios;
pub mod table;
pub mod trajectory;
pub mod work;

pub use error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;
