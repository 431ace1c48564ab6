//! Compiles every chapter of the guide in `book/src` as documentation, so
//! `cargo test` runs each Rust snippet as a doctest.
#![doc = include_str!("../../../book/src/introduction.md")]

#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}

#[doc = include_str!("../../../book/src/symbols.md")]
pub mod symbols {}

#[doc = include_str!("../../../book/src/toeplitz.md")]
pub mod toeplitz {}

#[doc = include_str!("../../../book/src/completion.md")]
pub mod completion {}

#[doc = include_str!("../../../book/src/extension.md")]
pub mod extension {}

#[doc = include_str!("../../../book/src/hankel.md")]
pub mod hankel {}

#[doc = include_str!("../../../book/src/positivity.md")]
pub mod positivity {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
