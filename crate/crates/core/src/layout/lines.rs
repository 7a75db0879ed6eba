use super::{bucket, Block, BlockKind, BodyStats, LayoutConfig, Line};
use crate::pdf::{RawDocument, Span};

/// Slack for geometric comparisons so boundary cases do not depend on rounding.
const EPS: f64 = 1e-6;

pub fn assemble_lines(doc: &RawDocument) -> Vec<Line> {
    assemble_lines_with(doc, &LayoutConfig::default())
}

/// Groups spans sharing a baseline into lines. Rotated spans stay alone.
///
/// A span joins the current line when its baseline is within
/// `tolerance × min(size of the span, smallest size in the line)` of the
/// line's first baseline.
pub fn assemble_lines_with(doc: &RawDocument, cfg: &LayoutConfig) -> Vec<Line> {
    let mut lines = Vec::new();
    for page in 0..doc.page_count {
        let (rotated, mut upright): (Vec<&Span>, Vec<&Span>) = doc.page_spans(page).partition(|s| s.rotated);
        upright.sort_by(|a, b| a.baseline().total_cmp(&b.baseline()).then(a.bbox.x0.total_cmp(&b.bbox.x0)));

        let mut current: Vec<Span> = Vec::new();
        let mut anchor = 0.0;
        let mut min_size = f64::INFINITY;
        for s in upright {
            let fits = !current.is_empty()
                && (s.baseline() - anchor).abs() <= cfg.line_merge_tolerance * s.font_size.min(min_size) + EPS;
            if !fits && !current.is_empty() {
                lines.push(Line::new(std::mem::take(&mut current)));
            }
            if current.is_empty() {
                anchor = s.baseline();
                min_size = s.font_size;
            }
            min_size = min_size.min(s.font_size);
            current.push(s.clone());
        }
        if !current.is_empty() {
            lines.push(Line::new(current));
        }
        lines.extend(rotated.into_iter().map(|s| Line::new(vec![s.clone()])));
    }
    sort_lines(&mut lines);
    lines
}

pub(crate) fn sort_lines(lines: &mut [Line]) {
    lines.sort_by(|a, b| {
        a.page_index
            .cmp(&b.page_index)
            .then(a.bbox.y0.total_cmp(&b.bbox.y0))
            .then(a.bbox.x0.total_cmp(&b.bbox.x0))
    });
}

pub fn assemble_blocks(lines: &[Line], stats: &BodyStats) -> Vec<Block> {
    assemble_blocks_with(lines, stats, &LayoutConfig::default())
}

/// Line style used to keep headings out of the paragraphs around them.
fn style_key(line: &Line) -> (f64, bool) {
    (bucket(line.font_size()), line.is_bold())
}

/// Groups consecutive lines into blocks.
///
/// Lines join when they are on the same page, the baseline gap is at most
/// `block_gap_factor × body spacing`, their x-extents overlap, and their
/// dominant size and boldness agree. Rotated lines always stand alone.
pub fn assemble_blocks_with(lines: &[Line], stats: &BodyStats, cfg: &LayoutConfig) -> Vec<Block> {
    let max_gap = cfg.block_gap_factor * stats.effective_line_spacing();
    let mut blocks = Vec::new();
    let mut current: Vec<Line> = Vec::new();
    for line in lines {
        if let Some(prev) = current.last() {
            let gap = line.baseline() - prev.baseline();
            let joins = prev.page_index == line.page_index
                && !prev.is_rotated()
                && !line.is_rotated()
                && gap >= -EPS
                && gap <= max_gap + EPS
                && prev.bbox.overlaps_x(&line.bbox)
                && style_key(prev) == style_key(line);
            if !joins {
                let lines = std::mem::take(&mut current);
                blocks.push(classify(lines, stats));
            }
        }
        current.push(line.clone());
    }
    if !current.is_empty() {
        blocks.push(classify(current, stats));
    }
    blocks
}

fn classify(lines: Vec<Line>, stats: &BodyStats) -> Block {
    let mut block = Block::new(lines, BlockKind::Paragraph);
    let size = block.font_size();
    block.kind = if block.lines.iter().any(Line::is_rotated) {
        BlockKind::Other
    } else if size > stats.body_font_size + 0.5
        || (block.is_bold() && block.word_count() <= 12 && size >= stats.body_font_size)
    {
        BlockKind::HeadingCandidate
    } else {
        BlockKind::Paragraph
    };
    block
}
