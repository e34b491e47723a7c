//! A∞ persistent homology: filtered complexes, persistent homology, transferred
//! A∞-coalgebra structures on homology, and the kernels of their operations
//! as persistence modules, together with the distances used to compare them.

pub mod chain_core;

pub use chain_core::*;
pub mod reduction;
pub mod transfer;
pub mod fixtures;
pub mod ainfty_persistence;
pub mod metrics;
pub mod filtration_builders;
