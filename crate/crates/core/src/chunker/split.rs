use super::scan::{LineKind, MarkdownLines};
use super::{Chunk, ChunkerConfig};

/// Line ranges that must not be split: a fenced block, a run of table rows,
/// or a single line.
fn atomic_units(scan: &MarkdownLines) -> Vec<std::ops::Range<usize>> {
    let n = scan.lines.len();
    let mut units = Vec::new();
    let mut i = 0;
    while i < n {
        let end = match scan.kinds[i] {
            LineKind::Code => scan.fence_end[i].map_or(i + 1, |e| e + 1),
            LineKind::TableRow => (i..n).find(|&j| scan.kinds[j] != LineKind::TableRow).unwrap_or(n),
            _ => i + 1,
        };
        units.push(i..end);
        i = end;
    }
    units
}

/// Greedily packs atomic units into subchunks of at most
/// `hard_limit_words`, each carrying the original headers.
pub fn hard_split(chunk: Chunk, cfg: &ChunkerConfig) -> Vec<Chunk> {
    if chunk.word_count <= cfg.hard_limit_words {
        return vec![chunk];
    }
    let scan = MarkdownLines::new(&chunk.content);
    let mut groups: Vec<std::ops::Range<usize>> = Vec::new();
    let mut current: Option<(std::ops::Range<usize>, usize)> = None;
    for unit in atomic_units(&scan) {
        let words = scan.words_in(unit.clone());
        current = match current {
            Some((range, w)) if w > 0 && w + words > cfg.hard_limit_words => {
                groups.push(range);
                Some((unit, words))
            }
            Some((range, w)) => Some((range.start..unit.end, w + words)),
            None => Some((unit, words)),
        };
    }
    groups.extend(current.map(|(r, _)| r));

    groups
        .into_iter()
        .filter_map(|range| {
            let first = range.clone().find(|&i| scan.kinds[i] != LineKind::Blank)?;
            let last = range.clone().rev().find(|&i| scan.kinds[i] != LineKind::Blank)?;
            Some(Chunk {
                content: scan.lines[first..=last].join("\n"),
                parent_headers: chunk.parent_headers.clone(),
                start_line: chunk.start_line + first,
                end_line: chunk.start_line + last,
                start_page: None,
                end_page: None,
                word_count: scan.words_in(first..last + 1),
                doc_id: chunk.doc_id.clone(),
            })
        })
        .collect()
}
