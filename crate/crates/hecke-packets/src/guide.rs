//! The long-form guide, rendered with mdbook from the repository's
//! `book/` directory. Each chapter is included here as module
//! documentation so that `cargo test --doc` compiles and runs every code
//! block in the book, keeping the prose and the library in lockstep.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/arithmetic.md")]
pub mod arithmetic {}

#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}

#[doc = include_str!("../../../book/src/characters.md")]
pub mod characters {}

#[doc = include_str!("../../../book/src/counting.md")]
pub mod counting {}

#[doc = include_str!("../../../book/src/galois.md")]
pub mod galois {}

#[doc = include_str!("../../../book/src/correspondence.md")]
pub mod correspondence {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
