//! Retrieval evaluation: question datasets, embedders, top-k search and
//! rank metrics.

mod dataset;
mod embed;
mod metrics;
mod run;

pub use dataset::{judge_relevance, load_dataset, normalize_passage, parse_dataset, EvalQuestion, Mode, PageRef, Relevance};
pub use embed::{cosine, Embedder, EmbedderSpec, Embedding, HashEmbedder, RemoteEmbedder};
pub use metrics::{ndcg_at_k, recall_at_k, retrieve_topk, RetrievalResult};
pub use run::{load_chunks, run_eval, run_eval_with, Aggregate, EvalOptions, EvalReport, QuestionReport, RetrievedChunk, Scope};
