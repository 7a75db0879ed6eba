use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{parse_path, ParsedDocument, PipelineConfig};
use crate::chunker::{chunk_markdown, to_jsonl, Chunk};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentOutput {
    pub path: PathBuf,
    pub parsed: ParsedDocument,
    pub chunks: Vec<Chunk>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentFailure {
    pub path: PathBuf,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BatchResult {
    /// Successful documents in input order.
    pub outputs: Vec<DocumentOutput>,
    pub failures: Vec<DocumentFailure>,
}

impl BatchResult {
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.failures.is_empty())
    }

    pub fn chunks_jsonl(&self) -> String {
        self.outputs.iter().map(|o| to_jsonl(&o.chunks)).collect()
    }
}

/// Parse then chunk one file.
pub fn process_path(path: &Path, cfg: &PipelineConfig) -> Result<DocumentOutput> {
    let parsed = parse_path(path, cfg)?;
    let chunks = chunk_markdown(&parsed.markdown, &cfg.chunker, &parsed.doc_id)?;
    Ok(DocumentOutput { path: path.to_path_buf(), parsed, chunks })
}

/// Processes every input, up to `jobs` at a time (0 picks the core count).
/// A failing document is recorded and does not stop the others.
pub fn run_pipeline(inputs: &[PathBuf], cfg: &PipelineConfig, jobs: usize) -> Result<BatchResult> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| crate::error::Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<(PathBuf, Result<DocumentOutput>)> =
        pool.install(|| inputs.par_iter().map(|p| (p.clone(), process_path(p, cfg))).collect());
    let mut batch = BatchResult::default();
    for (path, r) in results {
        match r {
            Ok(out) => batch.outputs.push(out),
            Err(e) => {
                log::error!("{}: {e}", path.display());
                batch.failures.push(DocumentFailure { path, error: e.to_string() });
            }
        }
    }
    Ok(batch)
}
