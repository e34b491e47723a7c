//! Exact arithmetic, simplices, filtered complexes and sparse linear algebra.

pub mod complex;
pub mod exact;
pub mod field;
pub mod simplex;
pub mod sparse;

pub use complex::{validate, ComplexError, FilteredComplex};
pub use exact::{parse_rational, ratio, Exact, ParseExactError};
pub use field::{FieldElement, FieldError, PrimeField};
pub use simplex::{aw_diagonal, boundary, Chain, Simplex, SimplexError, TensorChain};
pub use sparse::{SparseMatrix, SparseVec};
