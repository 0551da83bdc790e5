//! Doc-test shims for the guide under `book/`. Each chapter is
//! attached verbatim as module documentation, so every fenced Rust
//! block in the book compiles and runs with `cargo test --doc`, and
//! a book example that drifts from the library fails the suite.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/getting-started.md")]
mod getting_started {}

#[doc = include_str!("../../../book/src/presented-groups.md")]
mod presented_groups {}

#[doc = include_str!("../../../book/src/free-lie-ring.md")]
mod free_lie_ring {}

#[doc = include_str!("../../../book/src/quasi-lie-ring.md")]
mod quasi_lie_ring {}

#[doc = include_str!("../../../book/src/tree-diagrams.md")]
mod tree_diagrams {}

#[doc = include_str!("../../../book/src/exact-sequences.md")]
mod exact_sequences {}

#[doc = include_str!("../../../book/src/command-line.md")]
mod command_line {}

#[doc = include_str!("../../../book/src/reports-and-caching.md")]
mod reports_and_caching {}
