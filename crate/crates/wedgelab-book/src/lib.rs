//! Doc-test carrier for the guide in `book/`.
//!
//! Each chapter of the mdbook is attached verbatim as the documentation
//! of an empty module, so every fenced Rust block in the book compiles
//! and runs under `cargo test --workspace`. If a chapter drifts away
//! from the library's API, the workspace stops building — the book
//! cannot silently rot.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exact-arithmetic.md")]
pub mod exact_arithmetic {}

#[doc = include_str!("../../../book/src/lie-algebras.md")]
pub mod lie_algebras {}

#[doc = include_str!("../../../book/src/euler-elements.md")]
pub mod euler_elements {}

#[doc = include_str!("../../../book/src/gl2-splitting.md")]
pub mod gl2_splitting {}

#[doc = include_str!("../../../book/src/wedge-couples.md")]
pub mod wedge_couples {}

#[doc = include_str!("../../../book/src/covariance-certificates.md")]
pub mod covariance_certificates {}

#[doc = include_str!("../../../book/src/de-sitter.md")]
pub mod de_sitter {}

#[doc = include_str!("../../../book/src/standard-subspaces.md")]
pub mod standard_subspaces {}

#[doc = include_str!("../../../book/src/net-calculus.md")]
pub mod net_calculus {}

#[doc = include_str!("../../../book/src/suite-and-cli.md")]
pub mod suite_and_cli {}
