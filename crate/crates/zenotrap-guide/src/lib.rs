//! Compiles every fenced Rust block in `book/src` as a doctest, one module
//! per chapter, so `cargo test --workspace` fails whenever the guide and the
//! library drift apart. The crate exports nothing else.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/manifold.md")]
pub mod manifold {}

#[doc = include_str!("../../../book/src/couplings.md")]
pub mod couplings {}

#[doc = include_str!("../../../book/src/ensembles.md")]
pub mod ensembles {}

#[doc = include_str!("../../../book/src/analysis.md")]
pub mod analysis {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/numerics.md")]
pub mod numerics {}
