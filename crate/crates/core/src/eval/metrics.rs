use serde::{Deserialize, Serialize};

use super::embed::{cosine, Embedding};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalResult {
    pub question_id: String,
    pub k: usize,
    /// `(chunk index, cosine)` best first.
    pub ranked: Vec<(usize, f64)>,
    /// Relevance of each ranked chunk; filled in after judging.
    pub relevant: Vec<bool>,
}

/// Scores equal at this resolution count as ties.
const TIE_RESOLUTION: f64 = 1e-12;

fn tie_key(score: f64) -> i64 {
    (score / TIE_RESOLUTION).round() as i64
}

/// Exact top-k by cosine; equal scores keep insertion order.
pub fn retrieve_topk(question: &Embedding, chunks: &[Embedding], k: usize) -> Result<Vec<(usize, f64)>> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let mut scored = chunks
        .iter()
        .enumerate()
        .map(|(i, c)| cosine(question, c).map(|s| (i, s)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| tie_key(b.1).cmp(&tie_key(a.1)).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    Ok(scored)
}

fn check_total(total_relevant: usize) -> Result<()> {
    if total_relevant < 1 {
        return Err(Error::Domain("total_relevant must be at least 1".into()));
    }
    Ok(())
}

pub fn recall_at_k(result: &RetrievalResult, total_relevant: usize) -> Result<f64> {
    check_total(total_relevant)?;
    let hits = result.relevant.iter().take(result.k).filter(|r| **r).count();
    Ok(hits as f64 / total_relevant as f64)
}

/// Binary-gain NDCG with a `log2(rank + 1)` discount.
pub fn ndcg_at_k(result: &RetrievalResult, total_relevant: usize) -> Result<f64> {
    check_total(total_relevant)?;
    let discount = |rank: usize| 1.0 / ((rank + 1) as f64).log2();
    let dcg: f64 = result
        .relevant
        .iter()
        .take(result.k)
        .enumerate()
        .filter(|(_, r)| **r)
        .map(|(i, _)| discount(i + 1))
        .sum();
    if dcg == 0.0 {
        return Ok(0.0);
    }
    let idcg: f64 = (1..=total_relevant.min(result.k)).map(discount).sum();
    Ok(dcg / idcg)
}
