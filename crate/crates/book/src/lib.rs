//! Doc-test harness for the mdbook guide under `book/`.
//!
//! Each chapter is included verbatim, so its Rust blocks run on
//! `cargo test --workspace` and cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/curve.md")]
pub mod curve {}

#[doc = include_str!("../../../book/src/surface.md")]
pub mod surface {}

#[doc = include_str!("../../../book/src/selfconsistent.md")]
pub mod selfconsistent {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/criticality.md")]
pub mod criticality {}

#[doc = include_str!("../../../book/src/ideal_gas.md")]
pub mod ideal_gas {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
