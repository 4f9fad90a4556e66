pub mod applications;
pub mod error;
pub mod functor;
pub mod gwa;
pub mod idempotent;
pub mod job;
pub mod linalg;
pub mod module;
pub mod report;
pub mod ring;
pub mod selftest;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    mod coefficients {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/idempotents.md")]
    mod idempotents {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/functors.md")]
    mod functors {}
    #[doc = include_str!("../../../book/src/applications.md")]
    mod applications {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
