//! Raw geometric primitives pulled out of a PDF, and their JSON fixture form.

mod extract;
mod fixture;
mod fonts;
pub mod writer;

use serde::{Deserialize, Serialize};

pub use extract::{extract_raw, extract_raw_from_bytes};
pub use fixture::{dump_fixture, fixture_to_string, load_fixture, parse_fixture};

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};

/// Fraction of the font size that a glyph box extends below the baseline.
pub const DESCENT_RATIO: f64 = 0.2;
/// Fraction of the font size that a glyph box extends above the baseline.
pub const ASCENT_RATIO: f64 = 0.8;

/// A run of characters sharing one font, size and style.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Span {
    #[serde(rename = "page")]
    pub page_index: usize,
    pub bbox: Rect,
    pub text: String,
    pub font_size: f64,
    pub font_name: String,
    pub bold: bool,
    pub italic: bool,
    #[serde(rename = "mono")]
    pub monospaced: bool,
    /// Set for text drawn with a non-horizontal text matrix.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub rotated: bool,
    /// URI bound by [`crate::layout::bind_links`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link: Option<String>,
}

impl Span {
    /// Baseline y recovered from the glyph box, on a micro-point grid.
    pub fn baseline(&self) -> f64 {
        ((self.bbox.y1 - DESCENT_RATIO * self.font_size) * 1e6).round() / 1e6
    }

    pub fn char_count(&self) -> usize {
        self.text.chars().count()
    }
}

/// A stroked line segment from the drawing layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrawSegment {
    #[serde(rename = "page")]
    pub page_index: usize,
    pub p0: Point,
    pub p1: Point,
    #[serde(rename = "width")]
    pub stroke_width: f64,
}

/// A URI link annotation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBox {
    #[serde(rename = "page")]
    pub page_index: usize,
    pub bbox: Rect,
    pub uri: String,
}

/// One outline entry from the document catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetadataTocEntry {
    pub title: String,
    pub level: u32,
    #[serde(rename = "page")]
    pub page_index: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub page_count: usize,
    pub page_sizes: Vec<(f64, f64)>,
    pub spans: Vec<Span>,
    pub segments: Vec<DrawSegment>,
    pub links: Vec<LinkBox>,
    #[serde(rename = "toc")]
    pub metadata_toc: Option<Vec<MetadataTocEntry>>,
}

impl RawDocument {
    /// Checks every structural invariant, reporting the first violation.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvariantViolation(msg));
        if self.page_sizes.len() != self.page_count {
            return fail(format!(
                "page_sizes has {} entries but page_count is {}",
                self.page_sizes.len(),
                self.page_count
            ));
        }
        let check_page = |what: &str, i: usize, page: usize| -> Result<()> {
            if page >= self.page_count {
                return Err(Error::InvariantViolation(format!(
                    "{what}[{i}]: page_index {page} < page_count {}",
                    self.page_count
                )));
            }
            Ok(())
        };
        let check_rect = |what: &str, i: usize, r: &Rect| -> Result<()> {
            if r.x0 > r.x1 {
                return Err(Error::InvariantViolation(format!("{what}[{i}]: x0 ≤ x1")));
            }
            if r.y0 > r.y1 {
                return Err(Error::InvariantViolation(format!("{what}[{i}]: y0 ≤ y1")));
            }
            Ok(())
        };
        for (i, s) in self.spans.iter().enumerate() {
            check_page("spans", i, s.page_index)?;
            check_rect("spans", i, &s.bbox)?;
            if !(s.font_size > 0.0) {
                return fail(format!("spans[{i}]: font_size > 0"));
            }
            if s.text.trim().is_empty() {
                return fail(format!("spans[{i}]: text non-empty"));
            }
        }
        for (i, s) in self.segments.iter().enumerate() {
            check_page("segments", i, s.page_index)?;
        }
        for (i, l) in self.links.iter().enumerate() {
            check_page("links", i, l.page_index)?;
            check_rect("links", i, &l.bbox)?;
            if l.uri.is_empty() {
                return fail(format!("links[{i}]: uri non-empty"));
            }
        }
        if let Some(toc) = &self.metadata_toc {
            for (i, e) in toc.iter().enumerate() {
                check_page("toc", i, e.page_index)?;
                if e.level < 1 {
                    return fail(format!("toc[{i}]: level ≥ 1"));
                }
            }
        }
        Ok(())
    }

    /// Spans of one page, in stored order.
    pub fn page_spans(&self, page: usize) -> impl Iterator<Item = &Span> {
        self.spans.iter().filter(move |s| s.page_index == page)
    }
}

/// Reading order used throughout: `(page, y0, x0)`.
pub fn sort_spans(spans: &mut [Span]) {
    spans.sort_by(|a, b| {
        a.page_index
            .cmp(&b.page_index)
            .then(a.bbox.y0.total_cmp(&b.bbox.y0))
            .then(a.bbox.x0.total_cmp(&b.bbox.x0))
    });
}
