use super::{assemble_lines_with, LayoutConfig, BodyStats, Line};
use crate::error::{Error, Result};
use crate::pdf::RawDocument;

/// Rounds to the nearest 0.5pt.
pub fn bucket(x: f64) -> f64 {
    (x * 2.0).round() / 2.0
}

/// Most frequent key; ties go to the smaller key.
fn weighted_mode(items: impl IntoIterator<Item = (f64, usize)>) -> Option<f64> {
    let mut counts: Vec<(f64, usize)> = Vec::new();
    for (k, w) in items {
        match counts.iter_mut().find(|(c, _)| *c == k) {
            Some((_, total)) => *total += w,
            None => counts.push((k, w)),
        }
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.total_cmp(&a.0)))
        .map(|(k, _)| k)
}

pub fn estimate_body_stats(doc: &RawDocument) -> Result<BodyStats> {
    estimate_body_stats_with(doc, &LayoutConfig::default())
}

pub fn estimate_body_stats_with(doc: &RawDocument, cfg: &LayoutConfig) -> Result<BodyStats> {
    let body_font_size = weighted_mode(
        doc.spans
            .iter()
            .map(|s| (bucket(s.font_size), s.char_count())),
    )
    .ok_or(Error::EmptyDocument)?;

    let lines = assemble_lines_with(doc, cfg);
    let gaps = lines.windows(2).filter_map(|pair| {
        let (a, b): (&Line, &Line) = (&pair[0], &pair[1]);
        let same_page = a.page_index == b.page_index;
        let body = a.font_size() == body_font_size && b.font_size() == body_font_size;
        let gap = b.baseline() - a.baseline();
        (same_page && body && gap > 0.0 && !a.is_rotated() && !b.is_rotated()).then(|| (bucket(gap), 1))
    });
    let body_line_spacing = weighted_mode(gaps).unwrap_or(0.0);

    Ok(BodyStats {
        body_font_size,
        body_line_spacing,
        page_count: doc.page_count,
    })
}
