//! Exact tools for permutation-gate groups, discrete Wigner functions and
//! state-dependent contextuality in small qudit dimensions.

pub mod context;
pub mod cyclo;
pub mod fixtures;
pub mod gates;
pub mod graph;
pub mod matrix;
pub mod pauli;
pub mod report;
pub mod spectra;
pub mod wigner;

pub use cyclo::{CycloError, Cyclotomic, Sign};
pub use gates::{GateGroup, Permutation, PermutationGate};
pub use matrix::Matrix;
pub use spectra::Ray;
