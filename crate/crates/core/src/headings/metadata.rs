use super::{clamp_level, eligible, normalize_title, sort_by_position, Heading, HeadingConfig, HeadingSource};
use crate::layout::Block;
use crate::pdf::RawDocument;

pub fn headings_from_metadata(doc: &RawDocument, blocks: &[Block]) -> Option<Vec<Heading>> {
    headings_from_metadata_with(doc, blocks, &HeadingConfig::default())
}

/// Outline entries matched to blocks on the entry's page or a neighbour.
/// `None` when there is no outline or too few entries match.
pub fn headings_from_metadata_with(doc: &RawDocument, blocks: &[Block], cfg: &HeadingConfig) -> Option<Vec<Heading>> {
    let toc = doc.metadata_toc.as_ref().filter(|t| !t.is_empty())?;
    let normalized: Vec<String> = blocks.iter().map(|b| normalize_title(&b.text())).collect();
    let mut used = vec![false; blocks.len()];
    let mut out = Vec::new();
    for entry in toc {
        let want = normalize_title(&entry.title);
        if want.is_empty() {
            continue;
        }
        // Closest page first, then document order.
        let found = (0..blocks.len())
            .filter(|&i| {
                !used[i]
                    && eligible(&blocks[i])
                    && blocks[i].page_index.abs_diff(entry.page_index) <= 1
                    && normalized[i] == want
            })
            .min_by_key(|&i| (blocks[i].page_index.abs_diff(entry.page_index), i));
        if let Some(i) = found {
            used[i] = true;
            out.push(Heading {
                text: blocks[i].text(),
                level: clamp_level(entry.level as usize),
                block_ref: i,
                source: HeadingSource::MetadataToc,
            });
        }
    }
    if (out.len() as f64) < cfg.metadata_min_match * toc.len() as f64 || out.is_empty() {
        return None;
    }
    sort_by_position(&mut out, blocks);
    Some(out)
}
