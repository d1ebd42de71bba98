//! Doc-test shim for the book.
//!
//! mdBook cannot run chapter examples against the workspace crates, so
//! each chapter is included here as the documentation of an empty module
//! and `cargo test --doc -p tsirelson-book` compiles and runs every
//! fenced Rust block. A chapter that drifts from the library breaks the
//! workspace test run, which is the point.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/vectors.md")]
pub mod vectors {}

#[doc = include_str!("../../../book/src/schreier.md")]
pub mod schreier {}

#[doc = include_str!("../../../book/src/norm.md")]
pub mod norm {}

#[doc = include_str!("../../../book/src/isometries.md")]
pub mod isometries {}

#[doc = include_str!("../../../book/src/suites-and-cli.md")]
pub mod suites_and_cli {}
