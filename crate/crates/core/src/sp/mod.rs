//! Symplectic linear algebra: the standard form, basic normal-form blocks,
//! diamond sums, spectra, Krein signatures, and normal-form recovery.

pub mod block;
pub mod decompose;
pub mod krein;
pub mod matrix;
pub mod spectrum;

pub use block::{BasicBlock, N2Class};
pub use krein::KreinSignature;
pub use matrix::{diamond, diamond_all, standard_j, symplectic_defect, SymplecticMatrix};
pub use spectrum::{classify, floquet_spectrum, Classification, EllipticityClass};
