//! Heading-driven chunking of a markdown document.

mod scan;
mod split;
mod tree;

use serde::{Deserialize, Serialize};

pub use scan::{word_count, LineKind, MarkdownLines};
pub use split::hard_split;
pub use tree::{build_toc_tree, chunk_tree, HeadingLine, TocNode};

use crate::error::{Error, Result};
use crate::markdown::{page_range, MarkdownDoc};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChunkerConfig {
    pub soft_limit_words: usize,
    pub hard_limit_words: usize,
    pub min_words: usize,
}

impl Default for ChunkerConfig {
    fn default() -> Self {
        Self { soft_limit_words: 250, hard_limit_words: 400, min_words: 15 }
    }
}

impl ChunkerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0 < self.min_words && self.min_words < self.soft_limit_words && self.soft_limit_words <= self.hard_limit_words)
        {
            return Err(Error::Config(format!(
                "chunker limits need 0 < min_words ({}) < soft_limit_words ({}) <= hard_limit_words ({})",
                self.min_words, self.soft_limit_words, self.hard_limit_words
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    /// Content lines without the prepended headers.
    pub content: String,
    /// Heading lines from the outermost section inwards, e.g. `["# A", "## B"]`.
    pub parent_headers: Vec<String>,
    /// First content line in the source markdown.
    pub start_line: usize,
    /// Last content line in the source markdown.
    pub end_line: usize,
    pub start_page: Option<usize>,
    pub end_page: Option<usize>,
    /// Words in the content, excluding heading lines.
    pub word_count: usize,
    pub doc_id: String,
}

impl Chunk {
    /// Headers, a blank line, then the content.
    pub fn text(&self) -> String {
        if self.parent_headers.is_empty() {
            self.content.clone()
        } else {
            format!("{}\n\n{}", self.parent_headers.join("\n"), self.content)
        }
    }

    pub fn to_record(&self) -> ChunkRecord {
        ChunkRecord {
            text: self.text(),
            headers: self.parent_headers.clone(),
            start_line: self.start_line,
            start_page: self.start_page,
            end_page: self.end_page,
            word_count: self.word_count,
            doc_id: self.doc_id.clone(),
        }
    }
}

/// One line of chunk JSONL output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkRecord {
    pub text: String,
    pub headers: Vec<String>,
    pub start_line: usize,
    pub start_page: Option<usize>,
    pub end_page: Option<usize>,
    pub word_count: usize,
    pub doc_id: String,
}

pub fn filter_min_words(chunks: Vec<Chunk>, cfg: &ChunkerConfig) -> Vec<Chunk> {
    chunks.into_iter().filter(|c| c.word_count >= cfg.min_words).collect()
}

/// Fills page numbers from the markdown's line map; pages stay unset when
/// the source has none.
pub fn attach_pages(mut chunks: Vec<Chunk>, md: &MarkdownDoc) -> Result<Vec<Chunk>> {
    for c in &mut chunks {
        let range = page_range(md, c.start_line, c.end_line)?;
        c.start_page = range.map(|r| r.0);
        c.end_page = range.map(|r| r.1);
    }
    Ok(chunks)
}

/// Tree, recursive chunking with hard splits, minimum-size filter, pages.
pub fn chunk_markdown(md: &MarkdownDoc, cfg: &ChunkerConfig, doc_id: &str) -> Result<Vec<Chunk>> {
    cfg.validate()?;
    let root = build_toc_tree(md);
    let chunks = filter_min_words(chunk_tree(&root, md, cfg), cfg);
    let mut chunks = attach_pages(chunks, md)?;
    for c in &mut chunks {
        c.doc_id = doc_id.to_string();
    }
    Ok(chunks)
}

/// Chunk records as JSON lines, each terminated by a newline.
pub fn to_jsonl(chunks: &[Chunk]) -> String {
    let mut out = String::new();
    for c in chunks {
        out.push_str(&serde_json::to_string(&c.to_record()).expect("records serialize"));
        out.push('\n');
    }
    out
}
