//! End-to-end pipelines: configuration, per-document parsing, batch runs
//! with error isolation, and the parse benchmark.

mod batch;
mod bench;
mod config;
mod parse;

pub use batch::{process_path, run_pipeline, BatchResult, DocumentFailure, DocumentOutput};
pub use bench::{bench_parse, compute_cpu_energy, process_cpu_seconds, BenchDocument, BenchReport, CpuSampler};
pub use config::{OutputFormat, PipelineConfig, CONFIG_ENV};
pub use parse::{doc_id_for, parse_markdown, parse_path, parse_raw, ParsedDocument};
