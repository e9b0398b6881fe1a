//! The segeval guide, one module per chapter of the book under `book/`.
//!
//! Embedding the chapters here makes `cargo test --doc` compile and run
//! every code block in the guide, so the prose cannot drift from the
//! library it documents.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/images-and-labels.md")]
pub mod images_and_labels {}

#[doc = include_str!("../../../book/src/saliency.md")]
pub mod saliency {}

#[doc = include_str!("../../../book/src/merging-cost.md")]
pub mod merging_cost {}

#[doc = include_str!("../../../book/src/scale-and-standardization.md")]
pub mod scale_and_standardization {}

#[doc = include_str!("../../../book/src/quality.md")]
pub mod quality {}

#[doc = include_str!("../../../book/src/baselines.md")]
pub mod baselines {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
