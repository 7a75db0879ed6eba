//! Section headings and their hierarchy, resolved from the outline, then a
//! printed table of contents, then typography.

mod font;
mod metadata;
mod numbering;
mod textual;

use serde::{Deserialize, Serialize};

pub use font::{headings_from_font_size, headings_from_font_size_with};
pub use metadata::{headings_from_metadata, headings_from_metadata_with};
pub use numbering::{infer_numbering_level, normalize_title};
pub use textual::{detect_textual_toc, detect_textual_toc_with};

use crate::error::{Error, Result};
use crate::layout::{BodyStats, Block};
use crate::pdf::RawDocument;

pub const MAX_LEVEL: u8 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadingSource {
    MetadataToc,
    ParsedToc,
    FontSize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Heading {
    pub text: String,
    pub level: u8,
    /// Index into the block list the heading was resolved against.
    pub block_ref: usize,
    pub source: HeadingSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeadingConfig {
    /// Share of outline entries that must match a block for the outline to be used.
    pub metadata_min_match: f64,
    /// Consecutive entry lines needed to accept a printed table of contents.
    pub toc_min_entries: usize,
    /// Pages scanned for a printed table of contents.
    pub toc_scan_pages: usize,
    /// Indentation clustering granularity for unnumbered entries, in points.
    pub indent_granularity: f64,
    /// A block must exceed the body size by more than this to count as a heading by size.
    pub size_margin: f64,
    /// Bold blocks at body size count as headings up to this many words.
    pub bold_max_words: usize,
}

impl Default for HeadingConfig {
    fn default() -> Self {
        Self {
            metadata_min_match: 0.5,
            toc_min_entries: 4,
            toc_scan_pages: 10,
            indent_granularity: 5.0,
            size_margin: 0.5,
            bold_max_words: 12,
        }
    }
}

impl HeadingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.metadata_min_match > 0.0 && self.metadata_min_match <= 1.0) {
            return Err(Error::Config(format!(
                "headings.metadata_min_match must be in (0, 1], got {}",
                self.metadata_min_match
            )));
        }
        if self.toc_min_entries == 0 || self.toc_scan_pages == 0 || self.bold_max_words == 0 {
            return Err(Error::Config("headings counts must be positive".into()));
        }
        if !(self.indent_granularity > 0.0) || !(self.size_margin > 0.0) {
            return Err(Error::Config("headings tolerances must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn clamp_level(level: usize) -> u8 {
    level.clamp(1, MAX_LEVEL as usize) as u8
}

/// Orders headings by the position of their source block.
pub(crate) fn sort_by_position(headings: &mut [Heading], blocks: &[Block]) {
    headings.sort_by(|a, b| {
        let (ba, bb) = (&blocks[a.block_ref], &blocks[b.block_ref]);
        ba.page_index
            .cmp(&bb.page_index)
            .then(ba.bbox.y0.total_cmp(&bb.bbox.y0))
            .then(a.block_ref.cmp(&b.block_ref))
    });
}

/// Blocks that can carry a heading: not rotated, not a table, not excluded.
pub(crate) fn eligible(block: &Block) -> bool {
    matches!(block.kind, crate::layout::BlockKind::Paragraph | crate::layout::BlockKind::HeadingCandidate)
}

pub fn resolve_headings(doc: &RawDocument, blocks: &[Block], stats: &BodyStats) -> Vec<Heading> {
    resolve_headings_with(doc, blocks, stats, None, &HeadingConfig::default())
}

/// First non-empty tier wins. `title_block` is left out of every tier so the
/// main title never doubles as a section heading.
pub fn resolve_headings_with(
    doc: &RawDocument,
    blocks: &[Block],
    stats: &BodyStats,
    title_block: Option<usize>,
    cfg: &HeadingConfig,
) -> Vec<Heading> {
    let drop_title = |hs: Vec<Heading>| -> Vec<Heading> {
        hs.into_iter().filter(|h| Some(h.block_ref) != title_block).collect()
    };
    if let Some(hs) = headings_from_metadata_with(doc, blocks, cfg).map(drop_title) {
        if !hs.is_empty() {
            return hs;
        }
    }
    if let Some(hs) = detect_textual_toc_with(blocks, cfg).map(drop_title) {
        if !hs.is_empty() {
            return hs;
        }
    }
    drop_title(headings_from_font_size_with(blocks, stats, title_block, cfg))
}
