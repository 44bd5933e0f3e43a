//! Coverage scheduling for mobile sensors that must recharge.
//!
//! Start with [`harness::solve`] for a schedule, [`verify::verify`] to check
//! one, and [`oracle`] for exact optima on small instances. The guide under
//! `book/` walks through each module; its code blocks run as doctests.

pub mod csc2;
pub mod error;
pub mod harness;
pub mod instance;
pub mod kernel;
pub mod oracle;
pub mod rcsc;
pub mod render;
pub mod route;
pub mod verify;

// The guide's chapters, compiled as doctests so the book cannot drift.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/routes.md")]
    mod routes {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
    #[doc = include_str!("../../../book/src/verifier.md")]
    mod verifier {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
