use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chunker::ChunkRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Single,
    Multi,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageRef {
    pub doc_id: String,
    /// 0-based page index.
    pub page: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relevance {
    Single { doc_id: String, answer_passage: String },
    Multi(Vec<PageRef>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalQuestion {
    pub id: String,
    pub question: String,
    pub relevance: Relevance,
}

impl EvalQuestion {
    pub fn mode(&self) -> Mode {
        match self.relevance {
            Relevance::Single { .. } => Mode::Single,
            Relevance::Multi(_) => Mode::Multi,
        }
    }

    /// Documents holding relevant material.
    pub fn doc_ids(&self) -> Vec<&str> {
        match &self.relevance {
            Relevance::Single { doc_id, .. } => vec![doc_id.as_str()],
            Relevance::Multi(refs) => {
                let mut seen = HashSet::new();
                refs.iter().map(|r| r.doc_id.as_str()).filter(|d| seen.insert(*d)).collect()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Row {
    Single(SingleRow),
    Multi(MultiRow),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SingleRow {
    id: String,
    question: String,
    doc_id: String,
    answer_passage: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MultiRow {
    id: String,
    question: String,
    relevant: Vec<PageRef>,
}

impl Serialize for EvalQuestion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.relevance {
            Relevance::Single { doc_id, answer_passage } => SingleRow {
                id: self.id.clone(),
                question: self.question.clone(),
                doc_id: doc_id.clone(),
                answer_passage: answer_passage.clone(),
            }
            .serialize(s),
            Relevance::Multi(refs) => {
                MultiRow { id: self.id.clone(), question: self.question.clone(), relevant: refs.clone() }.serialize(s)
            }
        }
    }
}

/// Parses dataset JSONL; blank lines are skipped.
pub fn parse_dataset(text: &str) -> Result<Vec<EvalQuestion>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Row = serde_json::from_str(line).map_err(|e| Error::SchemaViolation {
            path: format!("line {}", n + 1),
            message: format!("not a single or multi question row: {e}"),
        })?;
        let q = match row {
            Row::Single(r) => {
                if r.answer_passage.trim().is_empty() {
                    return Err(Error::SchemaViolation {
                        path: format!("line {}.answer_passage", n + 1),
                        message: "empty passage".into(),
                    });
                }
                EvalQuestion {
                    id: r.id,
                    question: r.question,
                    relevance: Relevance::Single { doc_id: r.doc_id, answer_passage: r.answer_passage },
                }
            }
            Row::Multi(r) => {
                if r.relevant.is_empty() {
                    return Err(Error::SchemaViolation {
                        path: format!("line {}.relevant", n + 1),
                        message: "no relevant pages".into(),
                    });
                }
                EvalQuestion { id: r.id, question: r.question, relevance: Relevance::Multi(r.relevant) }
            }
        };
        out.push(q);
    }
    Ok(out)
}

pub fn load_dataset(path: &Path) -> Result<Vec<EvalQuestion>> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    parse_dataset(&text)
}

/// Whitespace-folded, lowercased text.
pub fn normalize_passage(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

fn token_overlap(passage: &str, chunk: &str) -> f64 {
    let chunk_tokens: HashSet<&str> = chunk.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).collect();
    let passage_tokens: Vec<&str> = passage.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).collect();
    if passage_tokens.is_empty() {
        return 0.0;
    }
    passage_tokens.iter().filter(|t| chunk_tokens.contains(*t)).count() as f64 / passage_tokens.len() as f64
}

/// Single questions match by normalized substring (or token overlap at or
/// above `fuzzy` when given); multi questions match by page intersection.
pub fn judge_relevance(chunk: &ChunkRecord, q: &EvalQuestion, fuzzy: Option<f64>) -> Result<bool> {
    match &q.relevance {
        Relevance::Single { doc_id, answer_passage } => {
            if &chunk.doc_id != doc_id {
                return Ok(false);
            }
            let text = normalize_passage(&chunk.text);
            let passage = normalize_passage(answer_passage);
            Ok(text.contains(&passage) || fuzzy.is_some_and(|t| token_overlap(&passage, &text) >= t))
        }
        Relevance::Multi(refs) => {
            let mut doc_refs = refs.iter().filter(|r| r.doc_id == chunk.doc_id).peekable();
            if doc_refs.peek().is_none() {
                return Ok(false);
            }
            let (Some(start), Some(end)) = (chunk.start_page, chunk.end_page) else {
                return Err(Error::MissingPages(format!(
                    "chunk of {} at line {} has no page range",
                    chunk.doc_id, chunk.start_line
                )));
            };
            Ok(doc_refs.any(|r| (start..=end).contains(&r.page)))
        }
    }
}
