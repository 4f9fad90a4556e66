//! Exact linear algebra: Howell forms over `Z/mZ` and dense matrices over
//! the coefficient ring.

pub mod matrix;
pub mod zmod;

pub use matrix::Matrix;
