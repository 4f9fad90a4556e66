//! Finite-dimensional modules in category O as matrix data.

pub mod iso;
pub mod json;
pub mod matrix_module;
pub mod simple;
pub mod submodule;
pub mod verma;

pub use iso::{iso_search, module_iso_check, IsoOutcome, IsoWitness};
pub use matrix_module::{validate_module, MatrixModule};
pub use simple::{has_split_weights, simple_check};
pub use submodule::{z_torsion, z_torsion_with_index, SubmoduleBasis};
pub use verma::{descent_coefficient, verma_quotient};
