//! Symbolic index iteration and splitting numbers.

pub mod decomp;
pub mod iterate;
pub mod splitting;

pub use decomp::{IndexSeed, NormalFormDecomposition};
pub use iterate::{iterate_index, mean_index, mean_index_exact, parity, viterbo_index};
pub use splitting::{c_of_m, delta_k, q_of_m, splitting_numbers, OmegaPoint, SplittingTable};
