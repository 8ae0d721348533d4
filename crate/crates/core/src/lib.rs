//! Simulation of continuous-time quantum computation on desk-scale systems.
//!
//! The crate covers continuous-time quantum walks on graphs, quantum-walk
//! search on the hypercube, adiabatic and hybrid interpolations between a
//! walk Hamiltonian and a diagonal problem Hamiltonian, and the spectral
//! analysis (instantaneous gaps) that governs their run times.
//!
//! Layout:
//! - [`graph`]: graph families and their adjacency/degree/Laplacian matrices.
//! - [`encode`]: bitstring labels and unary/binary encoding cost.
//! - [`hamiltonian`]: walk, hypercube, marked-state and Ising Hamiltonians.
//! - [`dynamics`]: states, schedules, time evolution and gap scans.
//! - [`protocols`]: search, adiabatic, sampling and transport experiments.
//! - [`cli`]: experiment configs and the `ctwalk` command-line front end.

pub mod cli;
pub mod dynamics;
pub mod encode;
pub mod error;
pub mod exec;
pub mod graph;
pub mod hamiltonian;
pub mod protocols;
pub mod sparse;
pub mod stats;

pub use error::{Error, Result};
pub use exec::Execution;

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;

/// Library version embedded in every output record.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
