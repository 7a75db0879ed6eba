use super::{clamp_level, eligible, sort_by_position, Heading, HeadingConfig, HeadingSource};
use crate::layout::{bucket, BodyStats, Block};

pub fn headings_from_font_size(blocks: &[Block], stats: &BodyStats) -> Vec<Heading> {
    headings_from_font_size_with(blocks, stats, None, &HeadingConfig::default())
}

pub(crate) fn is_size_candidate(block: &Block, stats: &BodyStats, cfg: &HeadingConfig) -> bool {
    let size = block.font_size();
    size > stats.body_font_size + cfg.size_margin
        || (block.is_bold() && block.word_count() <= cfg.bold_max_words && size >= stats.body_font_size)
}

/// Larger type means a shallower level; distinct sizes beyond the sixth share level 6.
pub fn headings_from_font_size_with(
    blocks: &[Block],
    stats: &BodyStats,
    exclude: Option<usize>,
    cfg: &HeadingConfig,
) -> Vec<Heading> {
    let candidates: Vec<usize> = (0..blocks.len())
        .filter(|&i| Some(i) != exclude && eligible(&blocks[i]) && is_size_candidate(&blocks[i], stats, cfg))
        .collect();
    let mut sizes: Vec<f64> = candidates.iter().map(|&i| bucket(blocks[i].font_size())).collect();
    sizes.sort_by(|a, b| b.total_cmp(a));
    sizes.dedup();
    let mut out: Vec<Heading> = candidates
        .into_iter()
        .map(|i| {
            let size = bucket(blocks[i].font_size());
            let rank = sizes.iter().position(|&s| s == size).unwrap();
            Heading { text: blocks[i].text(), level: clamp_level(rank + 1), block_ref: i, source: HeadingSource::FontSize }
        })
        .collect();
    sort_by_position(&mut out, blocks);
    out
}
