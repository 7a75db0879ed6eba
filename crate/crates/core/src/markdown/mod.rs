//! Markdown serialization of the recovered structure, with a map from each
//! output line back to source pages.

mod inline;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::headings::{Heading, MAX_LEVEL};
use crate::layout::Block;
use crate::tables::Table;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MarkdownDoc {
    pub text: String,
    /// Indexed by 0-based line number; `None` for blank lines and for
    /// sources without pages.
    pub line_pages: Vec<Option<(usize, usize)>>,
    pub main_title: Option<String>,
}

impl MarkdownDoc {
    /// Wraps markdown that has no page information.
    pub fn from_markdown(text: &str) -> Self {
        let text = text.replace("\r\n", "\n");
        let n = text.split('\n').count();
        Self { text, line_pages: vec![None; n], main_title: None }
    }

    pub fn lines(&self) -> Vec<&str> {
        self.text.split('\n').collect()
    }

    pub fn line_count(&self) -> usize {
        self.line_pages.len()
    }

    pub fn is_paginated(&self) -> bool {
        self.line_pages.iter().any(Option::is_some)
    }
}

struct Writer {
    lines: Vec<String>,
    pages: Vec<Option<(usize, usize)>>,
}

impl Writer {
    fn push(&mut self, line: String, page: usize) {
        self.lines.push(line);
        self.pages.push(Some((page, page)));
    }

    fn item(&mut self, lines: Vec<String>, page: usize) {
        if !self.lines.is_empty() {
            self.lines.push(String::new());
            self.pages.push(None);
        }
        for l in lines {
            self.push(l, page);
        }
    }
}

fn escape_leading(text: String) -> String {
    let special = text.starts_with('#')
        || text.starts_with('|')
        || text.starts_with("```")
        || text.starts_with("~~~");
    if special {
        format!("\\{text}")
    } else {
        text
    }
}

fn is_code_block(block: &Block) -> bool {
    block.spans().all(|s| s.monospaced) && block.lines.len() > 1
}

/// Serializes blocks and tables in reading order. The block at
/// `title_block`, when given, becomes the single H1 and every heading level
/// shifts down by one.
pub fn emit(blocks: &[Block], headings: &[Heading], tables: &[Table], title_block: Option<usize>) -> MarkdownDoc {
    let shift = usize::from(title_block.is_some());
    let mut heading_of: Vec<Option<u8>> = vec![None; blocks.len()];
    for h in headings {
        if Some(h.block_ref) != title_block && h.block_ref < blocks.len() {
            heading_of[h.block_ref] = Some((h.level as usize + shift).min(MAX_LEVEL as usize) as u8);
        }
    }
    let mut tables: Vec<&Table> = tables.iter().collect();
    tables.sort_by(|a, b| a.page_index().cmp(&b.page_index()).then(a.bbox().y0.total_cmp(&b.bbox().y0)));
    let mut pending = tables.into_iter().peekable();

    let mut w = Writer { lines: Vec::new(), pages: Vec::new() };
    let main_title = title_block.filter(|&i| i < blocks.len()).map(|i| blocks[i].text());
    if let (Some(i), Some(title)) = (title_block, &main_title) {
        w.item(vec![format!("# {title}")], blocks[i].page_index);
    }
    for (i, block) in blocks.iter().enumerate() {
        while let Some(t) = pending.next_if(|t| (t.page_index(), t.bbox().y0) < (block.page_index, block.bbox.y0)) {
            w.item(t.markdown().split('\n').map(String::from).collect(), t.page_index());
        }
        if Some(i) == title_block {
            continue;
        }
        let lines = if let Some(level) = heading_of[i] {
            vec![format!("{} {}", "#".repeat(level as usize), block.text())]
        } else if is_code_block(block) {
            let mut v = vec!["```".to_string()];
            v.extend(block.lines.iter().map(|l| l.text()));
            v.push("```".to_string());
            v
        } else {
            vec![escape_leading(inline::render_block(block))]
        };
        w.item(lines, block.page_index);
    }
    for t in pending {
        w.item(t.markdown().split('\n').map(String::from).collect(), t.page_index());
    }
    let text = w.lines.join("\n");
    let line_pages = if w.lines.is_empty() { vec![None] } else { w.pages };
    MarkdownDoc { text, line_pages, main_title }
}

/// Page span of lines `line_start..=line_end`. Blank lines take the page
/// of the nearest mapped line above them. `None` when nothing is mapped.
pub fn page_range(md: &MarkdownDoc, line_start: usize, line_end: usize) -> Result<Option<(usize, usize)>> {
    let len = md.line_count();
    if line_start > line_end || line_end >= len {
        return Err(Error::RangeOutOfBounds { start: line_start, end: line_end, len });
    }
    let mut inherited = md.line_pages[..line_start].iter().rev().find_map(|p| *p);
    let mut out: Option<(usize, usize)> = None;
    for p in &md.line_pages[line_start..=line_end] {
        if p.is_some() {
            inherited = *p;
        }
        if let Some((s, e)) = inherited {
            out = Some(match out {
                Some((os, oe)) => (os.min(s), oe.max(e)),
                None => (s, e),
            });
        }
    }
    Ok(out)
}
