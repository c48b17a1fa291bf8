//! Exact numerics for U(1) and SU(2) asymmetry of qubit lattice states.
//!
//! The crate prepares states on periodic qubit lattices (product states,
//! brickwork-circuit outputs, kink and Dicke states), computes the
//! entanglement asymmetry `ΔS = S_V(𝒢[ρ]) − S_V(ρ)` exactly for the U(1)
//! charge `Q = Σ_j (σ^z_j + 1)/2` and for SU(2), and evaluates the entropy
//! bounds that clustering states obey.
//!
//! Conventions used throughout:
//! - site 0 is the most significant bit of a basis index;
//! - `|0⟩` carries charge 1, so `q` counts zeros;
//! - entropies are in nats.

pub mod closed_forms;
pub mod clustering;
pub mod error;
pub mod exec;
pub mod lattice;
pub mod oracles;
pub mod quantum;
pub mod states;
pub mod su2;
pub mod u1;

pub use error::{Error, Result};
pub use exec::Exec;
pub use lattice::LatticeGeometry;
