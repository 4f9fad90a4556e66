//! Generalized Weyl algebras `H(R, φ, z)`: instances with their hypothesis
//! certificates, and elements in normal form.

pub mod element;
pub mod instance;

pub use element::{gwa_multiply, gwa_power, random_element, yx_power_identity, GwaElement};
pub use instance::{validate_instance, GwaInstance};
