//! Spans → lines → blocks, plus the document-level clean-up passes that run
//! on spans (header/footer removal, link binding) and on blocks (main title).

mod headers_footers;
mod lines;
mod links;
mod stats;
mod title;

use serde::{Deserialize, Serialize};

pub use headers_footers::{position_signature, remove_headers_footers, remove_headers_footers_with};
pub use lines::{assemble_blocks, assemble_blocks_with, assemble_lines, assemble_lines_with};
pub use links::{bind_links, bind_links_with};
pub use stats::{bucket, estimate_body_stats, estimate_body_stats_with};
pub use title::{find_main_title, infer_main_title};

use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::pdf::Span;

/// Tunable constants for the layout heuristics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LayoutConfig {
    /// Spans join a line when baselines differ by at most this × font size.
    pub line_merge_tolerance: f64,
    /// Lines join a block when the baseline gap is at most this × body spacing.
    pub block_gap_factor: f64,
    /// A position signature recurring on more than this fraction of pages is
    /// a header or footer.
    pub header_footer_ratio: f64,
    /// Documents with fewer pages skip header/footer removal.
    pub header_footer_min_pages: usize,
    /// Minimum share of a span's area a link box must cover to bind.
    pub link_min_overlap: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            line_merge_tolerance: 0.3,
            block_gap_factor: 1.5,
            header_footer_ratio: 0.33,
            header_footer_min_pages: 3,
            link_min_overlap: 0.5,
        }
    }
}

impl LayoutConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("line_merge_tolerance", self.line_merge_tolerance),
            ("block_gap_factor", self.block_gap_factor),
            ("header_footer_ratio", self.header_footer_ratio),
            ("link_min_overlap", self.link_min_overlap),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("layout.{name} must be positive, got {v}")));
            }
        }
        if self.header_footer_ratio >= 1.0 || self.link_min_overlap > 1.0 {
            return Err(Error::Config("layout ratios must not exceed 1".into()));
        }
        if self.header_footer_min_pages == 0 {
            return Err(Error::Config("layout.header_footer_min_pages must be positive".into()));
        }
        Ok(())
    }
}

/// Document-wide typography statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyStats {
    pub body_font_size: f64,
    pub body_line_spacing: f64,
    pub page_count: usize,
}

impl BodyStats {
    /// Spacing used for block building; falls back to 1.2 × body size when
    /// the document has no repeated body line gap.
    pub fn effective_line_spacing(&self) -> f64 {
        if self.body_line_spacing > 0.0 {
            self.body_line_spacing
        } else {
            1.2 * self.body_font_size
        }
    }
}

/// Character-weighted dominant font size of a set of spans.
pub(crate) fn dominant_size<'a>(spans: impl IntoIterator<Item = &'a Span>) -> f64 {
    let mut weights: Vec<(f64, usize)> = Vec::new();
    for s in spans {
        let b = bucket(s.font_size);
        match weights.iter_mut().find(|(size, _)| *size == b) {
            Some((_, w)) => *w += s.char_count(),
            None => weights.push((b, s.char_count())),
        }
    }
    weights
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.total_cmp(&a.0)))
        .map(|(size, _)| size)
        .unwrap_or(0.0)
}

/// Joins spans left to right, inserting a space where glyph boxes do not touch.
pub(crate) fn join_spans<'a>(spans: impl IntoIterator<Item = &'a Span>) -> String {
    let mut out = String::new();
    let mut prev: Option<&Span> = None;
    for s in spans {
        if let Some(p) = prev {
            let gap = s.bbox.x0 - p.bbox.x1;
            if gap > 0.1 * p.font_size.min(s.font_size) || s.rotated || p.rotated {
                out.push(' ');
            }
        }
        out.push_str(&s.text);
        prev = Some(s);
    }
    out
}

/// Spans sharing a baseline, ordered left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub spans: Vec<Span>,
    pub bbox: Rect,
    pub page_index: usize,
}

impl Line {
    pub fn new(mut spans: Vec<Span>) -> Self {
        assert!(!spans.is_empty(), "a line needs at least one span");
        spans.sort_by(|a, b| a.bbox.x0.total_cmp(&b.bbox.x0).then(a.bbox.x1.total_cmp(&b.bbox.x1)));
        let bbox = Rect::union_all(spans.iter().map(|s| &s.bbox)).expect("non-empty");
        let page_index = spans[0].page_index;
        Self { spans, bbox, page_index }
    }

    pub fn text(&self) -> String {
        join_spans(&self.spans)
    }

    /// Baseline of the dominant-size spans (first such span).
    pub fn baseline(&self) -> f64 {
        let size = self.font_size();
        self.spans
            .iter()
            .find(|s| bucket(s.font_size) == size)
            .unwrap_or(&self.spans[0])
            .baseline()
    }

    pub fn font_size(&self) -> f64 {
        dominant_size(&self.spans)
    }

    pub fn max_font_size(&self) -> f64 {
        self.spans.iter().map(|s| s.font_size).fold(0.0, f64::max)
    }

    pub fn is_bold(&self) -> bool {
        self.spans.iter().all(|s| s.bold)
    }

    pub fn is_rotated(&self) -> bool {
        self.spans.iter().any(|s| s.rotated)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Paragraph,
    HeadingCandidate,
    TableRegion,
    Other,
}

/// Vertically grouped lines on one page.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub lines: Vec<Line>,
    pub bbox: Rect,
    pub page_index: usize,
    pub kind: BlockKind,
}

impl Block {
    pub fn new(lines: Vec<Line>, kind: BlockKind) -> Self {
        assert!(!lines.is_empty(), "a block needs at least one line");
        let bbox = Rect::union_all(lines.iter().map(|l| &l.bbox)).expect("non-empty");
        let page_index = lines[0].page_index;
        Self { lines, bbox, page_index, kind }
    }

    /// Line texts joined by single spaces.
    pub fn text(&self) -> String {
        self.lines.iter().map(Line::text).collect::<Vec<_>>().join(" ")
    }

    pub fn spans(&self) -> impl Iterator<Item = &Span> {
        self.lines.iter().flat_map(|l| l.spans.iter())
    }

    pub fn font_size(&self) -> f64 {
        dominant_size(self.spans())
    }

    pub fn max_font_size(&self) -> f64 {
        self.lines.iter().map(Line::max_font_size).fold(0.0, f64::max)
    }

    pub fn is_bold(&self) -> bool {
        self.lines.iter().all(Line::is_bold)
    }

    pub fn word_count(&self) -> usize {
        self.spans().map(|s| s.text.split_whitespace().count()).sum()
    }
}
