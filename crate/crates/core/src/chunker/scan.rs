use std::sync::LazyLock;

use regex::Regex;

static ATX: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(#{1,6})[ \t]+\S").unwrap());

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Blank,
    Text,
    Heading(u8),
    TableRow,
    /// Any line of a fenced code block, fences included.
    Code,
}

/// Markdown lines classified with fence awareness.
#[derive(Debug, Clone)]
pub struct MarkdownLines<'a> {
    pub lines: Vec<&'a str>,
    pub kinds: Vec<LineKind>,
    /// For each fence-opening line, the index of its closing line (or the
    /// last line when unclosed).
    pub fence_end: Vec<Option<usize>>,
}

fn fence_marker(line: &str) -> Option<&'static str> {
    let t = line.trim_start();
    if t.starts_with("```") {
        Some("```")
    } else if t.starts_with("~~~") {
        Some("~~~")
    } else {
        None
    }
}

impl<'a> MarkdownLines<'a> {
    pub fn new(text: &'a str) -> Self {
        Self::from_lines(text.split('\n').collect())
    }

    pub fn from_lines(lines: Vec<&'a str>) -> Self {
        let n = lines.len();
        let mut kinds = Vec::with_capacity(n);
        let mut fence_end = vec![None; n];
        let mut open: Option<(usize, &str)> = None;
        for (i, line) in lines.iter().enumerate() {
            if let Some((start, marker)) = open {
                kinds.push(LineKind::Code);
                if line.trim() == marker {
                    fence_end[start] = Some(i);
                    open = None;
                }
                continue;
            }
            let kind = if let Some(marker) = fence_marker(line) {
                open = Some((i, marker));
                LineKind::Code
            } else if line.trim().is_empty() {
                LineKind::Blank
            } else if let Some(c) = ATX.captures(line) {
                LineKind::Heading(c[1].len() as u8)
            } else if line.trim_start().starts_with('|') {
                LineKind::TableRow
            } else {
                LineKind::Text
            };
            kinds.push(kind);
        }
        if let Some((start, _)) = open {
            fence_end[start] = Some(n - 1);
        }
        Self { lines, kinds, fence_end }
    }

    /// Words on line `i`; heading lines count zero.
    pub fn words(&self, i: usize) -> usize {
        match self.kinds[i] {
            LineKind::Heading(_) => 0,
            _ => word_count(self.lines[i]),
        }
    }

    pub fn words_in(&self, range: std::ops::Range<usize>) -> usize {
        range.map(|i| self.words(i)).sum()
    }
}

/// Maximal runs of non-whitespace characters.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}
