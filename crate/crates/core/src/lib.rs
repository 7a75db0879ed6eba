//! Heuristic PDF parsing and title-aware chunking for retrieval pipelines.
//!
//! The flow is `pdf` (raw spans and rules) → `layout` (lines, blocks,
//! header/footer removal) → `tables` and `headings` → `markdown` →
//! `chunker`. `eval` scores retrieval over the resulting chunks and
//! `pipeline` wires everything together, including benchmarking.

pub mod error;
pub mod chunker;
pub mod corpus;
pub mod eval;
pub mod geometry;
pub mod headings;
pub mod layout;
pub mod markdown;
pub mod pdf;
pub mod pipeline;
pub mod tables;

pub use error::{Error, Result};
