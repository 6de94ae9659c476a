//! Global action-angle duality between the hyperbolic BC(n)
//! Ruijsenaars–Schneider–van Diejen system and its trigonometric dual,
//! realised numerically through Hamiltonian reduction of the Heisenberg
//! double of `SU(2n)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`] — dense complex linear algebra and the `𝒦 ⊕ ℬ` pairing;
//! * [`model`] — parameters, domains and coordinate charts;
//! * [`triples`] — explicit solutions of the momentum constraints;
//! * [`reconstruct`] — group-level representatives and the dual actions;
//! * [`hamiltonians`] — both Hamiltonian families and the van Diejen suite;
//! * [`poisson`] — finite-difference Poisson brackets on the double;
//! * [`flows`] — torus flows and symplectic integration;
//! * [`cli`] — the command-line driver.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod flows;
pub mod hamiltonians;
pub mod model;
pub mod poisson;
pub mod reconstruct;
pub mod sampling;
pub mod triples;

pub use error::{Error, Result};
pub use model::Params;
