use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::dataset::{judge_relevance, load_dataset, Mode};
use super::embed::{Embedder, EmbedderSpec, Embedding};
use super::metrics::{ndcg_at_k, recall_at_k, retrieve_topk, RetrievalResult};
use crate::chunker::ChunkRecord;
use crate::error::{Error, Result};

/// Which chunks a question is searched against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Only chunks of the question's own documents.
    #[default]
    Document,
    /// Every loaded chunk.
    Corpus,
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub dataset: PathBuf,
    pub chunks: Vec<PathBuf>,
    pub embedder: EmbedderSpec,
    pub k: usize,
    pub scope: Scope,
    pub fuzzy: Option<f64>,
    /// JSONL store of computed embeddings, appended batch by batch.
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievedChunk {
    pub rank: usize,
    pub doc_id: String,
    pub start_line: usize,
    pub score: f64,
    pub relevant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionReport {
    pub id: String,
    pub mode: Mode,
    pub total_relevant: usize,
    pub recall: f64,
    pub ndcg: f64,
    pub retrieved: Vec<RetrievedChunk>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Aggregate {
    pub questions: usize,
    pub mean_recall: f64,
    pub mean_ndcg: f64,
    /// Questions whose search pool held no relevant chunk; they score zero.
    pub without_relevant: usize,
}

impl Aggregate {
    fn of<'a>(rows: impl Iterator<Item = &'a QuestionReport>) -> Self {
        let rows: Vec<_> = rows.collect();
        if rows.is_empty() {
            return Self::default();
        }
        let n = rows.len() as f64;
        Self {
            questions: rows.len(),
            mean_recall: rows.iter().map(|r| r.recall).sum::<f64>() / n,
            mean_ndcg: rows.iter().map(|r| r.ndcg).sum::<f64>() / n,
            without_relevant: rows.iter().filter(|r| r.total_relevant == 0).count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// SHA-256 over the settings and input contents.
    pub fingerprint: String,
    pub embedder: String,
    pub k: usize,
    pub scope: Scope,
    pub fuzzy: Option<f64>,
    /// Chunk text is embedded with its prepended headers.
    pub headers_embedded: bool,
    pub chunk_count: usize,
    pub questions: Vec<QuestionReport>,
    pub single: Aggregate,
    pub multi: Aggregate,
    pub overall: Aggregate,
}

/// Reads chunk JSONL files in order.
pub fn load_chunks(paths: &[PathBuf]) -> Result<Vec<ChunkRecord>> {
    let mut out = Vec::new();
    for path in paths {
        let text = read(path)?;
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: ChunkRecord = serde_json::from_str(line).map_err(|e| Error::SchemaViolation {
                path: format!("{}:{}", path.display(), n + 1),
                message: e.to_string(),
            })?;
            out.push(rec);
        }
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

fn cache_key(fingerprint: &str, text: &str) -> String {
    let mut h = Sha256::new();
    h.update(fingerprint.as_bytes());
    h.update([0]);
    h.update(text.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    key: String,
    vector: Vec<f64>,
}

/// Embeds texts once each, reusing and extending the cache.
fn embed_all(embedder: &dyn Embedder, texts: &[String], cache: Option<&Path>) -> Result<Vec<Embedding>> {
    let fp = embedder.fingerprint();
    let mut known: HashMap<String, Embedding> = HashMap::new();
    if let Some(path) = cache.filter(|p| p.exists()) {
        for line in BufReader::new(File::open(path)?).lines() {
            let line = line?;
            // A torn last line from an interrupted run is skipped.
            if let Ok(c) = serde_json::from_str::<CacheLine>(&line) {
                known.insert(c.key, Embedding::new(c.vector));
            }
        }
    }
    let keys: Vec<String> = texts.iter().map(|t| cache_key(&fp, t)).collect();
    let mut missing: Vec<usize> = Vec::new();
    let mut queued = std::collections::HashSet::new();
    for (i, k) in keys.iter().enumerate() {
        if !known.contains_key(k) && queued.insert(k.clone()) {
            missing.push(i);
        }
    }
    let mut writer = match cache {
        Some(p) => Some(OpenOptions::new().create(true).append(true).open(p)?),
        None => None,
    };
    for batch in missing.chunks(embedder.batch_size().max(1)) {
        let batch_texts: Vec<String> = batch.iter().map(|&i| texts[i].clone()).collect();
        let vectors = embedder.embed(&batch_texts)?;
        for (&i, e) in batch.iter().zip(vectors) {
            if let Some(w) = writer.as_mut() {
                let line = CacheLine { key: keys[i].clone(), vector: e.vector.clone() };
                writeln!(w, "{}", serde_json::to_string(&line)?)?;
            }
            known.insert(keys[i].clone(), e);
        }
        if let Some(w) = writer.as_mut() {
            w.flush()?;
        }
    }
    let out: Vec<Embedding> = keys.iter().map(|k| known[k].clone()).collect();
    if let Some(first) = out.first() {
        if let Some(bad) = out.iter().find(|e| e.dim() != first.dim()) {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: bad.dim() });
        }
    }
    Ok(out)
}

fn fingerprint(opts: &EvalOptions, embedder: &str, dataset: &str, chunks: &[String]) -> String {
    let mut h = Sha256::new();
    let settings = serde_json::json!({
        "embedder": embedder,
        "k": opts.k,
        "scope": opts.scope,
        "fuzzy": opts.fuzzy,
        "headers_embedded": true,
    });
    h.update(settings.to_string().as_bytes());
    h.update([0]);
    h.update(dataset.as_bytes());
    for c in chunks {
        h.update([0]);
        h.update(c.as_bytes());
    }
    hex::encode(h.finalize())
}

pub fn run_eval(opts: &EvalOptions) -> Result<EvalReport> {
    let embedder = opts.embedder.build()?;
    run_eval_with(opts, embedder.as_ref())
}

/// Embeds every chunk once, then ranks each question's pool and scores it.
pub fn run_eval_with(opts: &EvalOptions, embedder: &dyn Embedder) -> Result<EvalReport> {
    if opts.k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    let dataset_text = read(&opts.dataset)?;
    let questions = load_dataset(&opts.dataset)?;
    let chunk_texts: Vec<String> = opts.chunks.iter().map(|p| read(p)).collect::<Result<_>>()?;
    let chunks = load_chunks(&opts.chunks)?;

    let texts: Vec<String> = chunks.iter().map(|c| c.text.clone()).collect();
    let question_texts: Vec<String> = questions.iter().map(|q| q.question.clone()).collect();
    let (chunk_vecs, question_vecs) = if questions.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let all: Vec<String> = texts.iter().chain(&question_texts).cloned().collect();
        let mut vecs = embed_all(embedder, &all, opts.cache.as_deref())?;
        let q = vecs.split_off(texts.len());
        (vecs, q)
    };

    let mut rows = Vec::with_capacity(questions.len());
    for (q, qv) in questions.iter().zip(&question_vecs) {
        let docs = q.doc_ids();
        let pool: Vec<usize> = (0..chunks.len())
            .filter(|&i| opts.scope == Scope::Corpus || docs.contains(&chunks[i].doc_id.as_str()))
            .collect();
        let flags = pool.iter().map(|&i| judge_relevance(&chunks[i], q, opts.fuzzy)).collect::<Result<Vec<bool>>>()?;
        let total_relevant = flags.iter().filter(|f| **f).count();
        let pool_vecs: Vec<Embedding> = pool.iter().map(|&i| chunk_vecs[i].clone()).collect();
        let ranked = retrieve_topk(qv, &pool_vecs, opts.k)?;
        let result = RetrievalResult {
            question_id: q.id.clone(),
            k: opts.k,
            relevant: ranked.iter().map(|(p, _)| flags[*p]).collect(),
            ranked: ranked.iter().map(|(p, s)| (pool[*p], *s)).collect(),
        };
        let (recall, ndcg) = if total_relevant == 0 {
            log::warn!("question {} has no relevant chunk in its pool", q.id);
            (0.0, 0.0)
        } else {
            (recall_at_k(&result, total_relevant)?, ndcg_at_k(&result, total_relevant)?)
        };
        rows.push(QuestionReport {
            id: q.id.clone(),
            mode: q.mode(),
            total_relevant,
            recall,
            ndcg,
            retrieved: result
                .ranked
                .iter()
                .zip(&result.relevant)
                .enumerate()
                .map(|(rank, ((ci, score), rel))| RetrievedChunk {
                    rank: rank + 1,
                    doc_id: chunks[*ci].doc_id.clone(),
                    start_line: chunks[*ci].start_line,
                    score: *score,
                    relevant: *rel,
                })
                .collect(),
        });
    }
    let fp = embedder.fingerprint();
    Ok(EvalReport {
        fingerprint: fingerprint(opts, &fp, &dataset_text, &chunk_texts),
        embedder: fp,
        k: opts.k,
        scope: opts.scope,
        fuzzy: opts.fuzzy,
        headers_embedded: true,
        chunk_count: chunks.len(),
        single: Aggregate::of(rows.iter().filter(|r| r.mode == Mode::Single)),
        multi: Aggregate::of(rows.iter().filter(|r| r.mode == Mode::Multi)),
        overall: Aggregate::of(rows.iter()),
        questions: rows,
    })
}
