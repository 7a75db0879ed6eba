use super::{bucket, Block, BodyStats};

/// Index of the main-title block: the largest-font block on the first page
/// whose size exceeds the body size, topmost on ties.
pub fn find_main_title(blocks: &[Block], stats: &BodyStats) -> Option<usize> {
    blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| b.page_index == 0 && b.max_font_size() > stats.body_font_size)
        .min_by(|(_, a), (_, b)| {
            bucket(b.max_font_size())
                .total_cmp(&bucket(a.max_font_size()))
                .then(a.bbox.y0.total_cmp(&b.bbox.y0))
        })
        .map(|(i, _)| i)
}

pub fn infer_main_title(blocks: &[Block], stats: &BodyStats) -> Option<String> {
    find_main_title(blocks, stats).map(|i| blocks[i].text())
}
