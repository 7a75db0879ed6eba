use std::ops::Range;

use super::scan::{LineKind, MarkdownLines};
use super::{hard_split, Chunk, ChunkerConfig};
use crate::markdown::MarkdownDoc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadingLine {
    pub level: u8,
    /// The full heading line, e.g. `## Methods`.
    pub text: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TocNode {
    /// `None` for the root.
    pub heading: Option<HeadingLine>,
    /// Lines after the heading and before the first child.
    pub content_lines: Range<usize>,
    pub children: Vec<TocNode>,
    /// One past the last line of this node's subtree.
    pub end: usize,
}

impl TocNode {
    fn level(&self) -> u8 {
        self.heading.as_ref().map_or(0, |h| h.level)
    }

    /// First line of the subtree below the heading.
    fn body_start(&self) -> usize {
        self.heading.as_ref().map_or(0, |h| h.line + 1)
    }

    pub fn subtree_lines(&self) -> Range<usize> {
        self.body_start()..self.end
    }
}

/// Each heading attaches under the nearest open heading of a smaller level;
/// text before the first heading belongs to the root.
pub fn build_toc_tree(md: &MarkdownDoc) -> TocNode {
    let scan = MarkdownLines::new(&md.text);
    let n = scan.lines.len();
    let mut stack = vec![TocNode { heading: None, content_lines: 0..n, children: Vec::new(), end: n }];
    let mut content_closed = vec![false];

    let close = |stack: &mut Vec<TocNode>, closed: &mut Vec<bool>, at: usize| {
        let mut node = stack.pop().unwrap();
        if !closed.pop().unwrap() {
            node.content_lines.end = at;
        }
        node.end = at;
        let parent = stack.last_mut().unwrap();
        parent.children.push(node);
    };

    for (i, kind) in scan.kinds.iter().enumerate() {
        let LineKind::Heading(level) = *kind else { continue };
        while stack.len() > 1 && stack.last().unwrap().level() >= level {
            close(&mut stack, &mut content_closed, i);
        }
        let parent = stack.len() - 1;
        if !content_closed[parent] {
            stack[parent].content_lines.end = i;
            content_closed[parent] = true;
        }
        stack.push(TocNode {
            heading: Some(HeadingLine { level, text: scan.lines[i].trim_end().to_string(), line: i }),
            content_lines: i + 1..n,
            children: Vec::new(),
            end: n,
        });
        content_closed.push(false);
    }
    while stack.len() > 1 {
        close(&mut stack, &mut content_closed, n);
    }
    stack.pop().unwrap()
}

fn make_chunk(scan: &MarkdownLines, headers: &[String], range: Range<usize>) -> Option<Chunk> {
    let first = range.clone().find(|&i| scan.kinds[i] != LineKind::Blank)?;
    let last = range.clone().rev().find(|&i| scan.kinds[i] != LineKind::Blank)?;
    Some(Chunk {
        content: scan.lines[first..=last].join("\n"),
        parent_headers: headers.to_vec(),
        start_line: first,
        end_line: last,
        start_page: None,
        end_page: None,
        word_count: scan.words_in(first..last + 1),
        doc_id: String::new(),
    })
}

/// Depth-first: a subtree within the soft limit is one chunk; a larger one
/// yields its own content as a chunk and recurses into its children; an
/// oversized leaf goes to [`hard_split`].
pub fn chunk_tree(root: &TocNode, md: &MarkdownDoc, cfg: &ChunkerConfig) -> Vec<Chunk> {
    let scan = MarkdownLines::new(&md.text);
    let mut out = Vec::new();
    visit(root, &[], &scan, cfg, &mut out);
    out
}

fn visit(node: &TocNode, ancestors: &[String], scan: &MarkdownLines, cfg: &ChunkerConfig, out: &mut Vec<Chunk>) {
    let mut headers = ancestors.to_vec();
    if let Some(h) = &node.heading {
        headers.push(h.text.clone());
    }
    let subtree = node.subtree_lines();
    // A heading with nothing of its own under it hands off to its children
    // so they keep the full heading path.
    let own_empty = node.content_lines.clone().all(|i| scan.kinds[i] == LineKind::Blank);
    let fits = scan.words_in(subtree.clone()) <= cfg.soft_limit_words && !own_empty;
    let range = if fits || node.children.is_empty() {
        subtree
    } else {
        node.content_lines.clone()
    };
    if let Some(chunk) = make_chunk(scan, &headers, range.clone()) {
        out.extend(hard_split(chunk, cfg));
    }
    if range.end < node.end {
        for child in &node.children {
            visit(child, &headers, scan, cfg, out);
        }
    }
}
