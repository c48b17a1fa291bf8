//! Exact state representation and evolution.

pub mod channel;
pub mod circuit;
pub mod entropy;
pub mod gates;
pub(crate) mod kernel;
pub mod observable;
pub mod random;
pub mod state;

pub use num_complex::Complex64 as C64;

pub use channel::{apply_channel, KrausChannel};
pub use circuit::{apply_circuit, random_brickwork, BrickworkCircuit, Gate};
pub use entropy::{shannon, von_neumann_entropy};
pub use observable::{expectation, reduced_density_matrix, Observable, Pauli, PauliString};
pub use random::random_state;
pub use state::{product_state, Caps, DensityMatrix, LocalState, QuantumState, StateVector};
