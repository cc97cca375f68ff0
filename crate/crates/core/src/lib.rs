//! Qubit coupled cluster with anti-commuting generator sets.
//!
//! Pauli-word algebra in symplectic form, GF(2) elimination, generator
//! screening, the iterative QCC optimizer, the involutory linear
//! combination (ILCAP) solver with perturbative corrections, FCIDUMP
//! parsing with the Jordan-Wigner map, and exact-diagonalization oracles.

pub mod acset;
pub mod bits;
pub mod chemio;
pub mod cli;
pub mod constants;
pub mod error;
pub mod gf2;
pub mod ilcap;
pub mod morse;
pub mod optim;
pub mod oracle;
pub mod pauli;
pub mod qcc;
pub mod screen;

pub use acset::{build_anticommuting_set, canonical_generator, AnticommutingSet, XWord};
pub use bits::BitVector;
pub use error::{Error, Result};
pub use gf2::BinaryMatrix;
pub use pauli::{Pauli, PauliSum, PauliWord, Phase, ReferenceState};
