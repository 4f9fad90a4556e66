//! Coefficient rings `k[b]/(b^t)`, polynomials in `h` over them, quotients,
//! affine automorphisms and Bézout certificates.

pub mod automorphism;
pub mod bezout;
pub mod poly;
pub mod quotient;
pub mod scalar;

pub use automorphism::AffineAutomorphism;
pub use bezout::{bezout_witness, BezoutWitness};
pub use poly::Poly;
pub use quotient::QuotientRing;
pub use scalar::{CoefRing, CoefScalar};
