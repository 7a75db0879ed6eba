use std::sync::LazyLock;

use regex::Regex;

use super::{clamp_level, eligible, infer_numbering_level, normalize_title, sort_by_position, Heading, HeadingConfig, HeadingSource};
use crate::layout::Block;

static ENTRY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^\s*(?:(\d+(?:\.(?:\d+|[A-Za-z]))*)\.?\s+)?(.*?\pL.*?)(?:\s*(?:\.\s*){2,}|\s*…+|\s+)(\d{1,4})\s*$")
        .unwrap()
});

/// One printed table-of-contents line.
#[derive(Debug, Clone, PartialEq)]
pub struct TocLine {
    pub text: String,
    pub x0: f64,
    pub numbering: Option<usize>,
}

pub(crate) fn parse_entry(text: &str, x0: f64) -> Option<TocLine> {
    let caps = ENTRY.captures(text)?;
    let numbering = caps.get(1).and_then(|m| infer_numbering_level(m.as_str()));
    Some(TocLine { text: text.to_string(), x0, numbering })
}

/// Levels by numbering depth when any entry is numbered; otherwise by
/// indentation, with x positions grouped at `granularity` and ranked left to right.
pub fn toc_entry_levels(entries: &[TocLine], granularity: f64) -> Vec<u8> {
    if entries.iter().any(|e| e.numbering.is_some()) {
        return entries.iter().map(|e| clamp_level(e.numbering.unwrap_or(1))).collect();
    }
    let mut xs: Vec<f64> = entries.iter().map(|e| e.x0).collect();
    xs.sort_by(f64::total_cmp);
    let mut cluster_starts: Vec<f64> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for x in xs {
        if x - last > granularity {
            cluster_starts.push(x);
        }
        last = x;
    }
    entries
        .iter()
        .map(|e| {
            let rank = cluster_starts.iter().rposition(|&s| s <= e.x0).unwrap_or(0);
            clamp_level(rank + 1)
        })
        .collect()
}

pub fn detect_textual_toc(blocks: &[Block]) -> Option<Vec<Heading>> {
    detect_textual_toc_with(blocks, &HeadingConfig::default())
}

/// Finds the first run of entry-shaped lines in the opening pages, assigns
/// levels, and matches each entry to a later block with the same title.
pub fn detect_textual_toc_with(blocks: &[Block], cfg: &HeadingConfig) -> Option<Vec<Heading>> {
    let mut run: Vec<(usize, TocLine)> = Vec::new();
    let mut found: Option<Vec<(usize, TocLine)>> = None;
    'scan: for (bi, block) in blocks.iter().enumerate() {
        if block.page_index >= cfg.toc_scan_pages {
            break;
        }
        for line in &block.lines {
            match parse_entry(&line.text(), line.bbox.x0) {
                Some(entry) => run.push((bi, entry)),
                None => {
                    if run.len() >= cfg.toc_min_entries {
                        found = Some(std::mem::take(&mut run));
                        break 'scan;
                    }
                    run.clear();
                }
            }
        }
    }
    if found.is_none() && run.len() >= cfg.toc_min_entries {
        found = Some(run);
    }
    let run = found?;
    let entries: Vec<TocLine> = run.iter().map(|(_, e)| e.clone()).collect();
    let levels = toc_entry_levels(&entries, cfg.indent_granularity);
    let last_toc_block = run.last().map(|(bi, _)| *bi).unwrap_or(0);

    let normalized: Vec<String> = blocks.iter().map(|b| normalize_title(&b.text())).collect();
    let mut cursor = last_toc_block + 1;
    let mut out = Vec::new();
    for (entry, level) in entries.iter().zip(levels) {
        let want = normalize_title(&entry.text);
        if want.is_empty() {
            continue;
        }
        if let Some(i) = (cursor..blocks.len()).find(|&i| eligible(&blocks[i]) && normalized[i] == want) {
            out.push(Heading { text: blocks[i].text(), level, block_ref: i, source: HeadingSource::ParsedToc });
            cursor = i + 1;
        }
    }
    sort_by_position(&mut out, blocks);
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::super::test_support::block;
    use super::*;

    fn lines(texts: &[(&str, f64)]) -> Vec<Block> {
        texts
            .iter()
            .enumerate()
            .map(|(i, (t, x))| block(0, *x, 100.0 + 30.0 * i as f64, 11.0, false, t))
            .collect()
    }

    #[test]
    fn entry_pattern() {
        assert_eq!(parse_entry("1. Intro .... 3", 0.0).unwrap().numbering, Some(1));
        assert_eq!(parse_entry("1.1 Scope .... 4", 0.0).unwrap().numbering, Some(2));
        assert_eq!(parse_entry("Appendix 12", 0.0).unwrap().numbering, None);
        assert!(parse_entry("Plain sentence.", 0.0).is_none());
        assert!(parse_entry("42", 0.0).is_none());
    }

    #[test]
    fn numbered_levels() {
        let entries: Vec<TocLine> = ["1. Intro .... 3", "1.1 Scope .... 4", "2. Methods .... 7", "2.1 Data .... 8"]
            .iter()
            .map(|t| parse_entry(t, 72.0).unwrap())
            .collect();
        assert_eq!(toc_entry_levels(&entries, 5.0), vec![1, 2, 1, 2]);
    }

    #[test]
    fn indentation_levels() {
        let entries: Vec<TocLine> = [("Intro 1", 72.0), ("Background 2", 72.0), ("Detail 3", 90.0), ("End 4", 72.0)]
            .iter()
            .map(|(t, x)| parse_entry(t, *x).unwrap())
            .collect();
        assert_eq!(toc_entry_levels(&entries, 5.0), vec![1, 1, 2, 1]);
    }

    #[test]
    fn run_below_threshold_is_ignored() {
        let blocks = lines(&[("Intro .... 1", 72.0), ("Scope .... 2", 72.0), ("End .... 3", 72.0), ("Body text here.", 72.0)]);
        assert!(detect_textual_toc(&blocks).is_none());
    }

    #[test]
    fn entries_match_later_blocks() {
        let mut blocks = lines(&[
            ("Contents", 72.0),
            ("Intro .... 1", 72.0),
            ("Scope .... 1", 90.0),
            ("Methods .... 2", 72.0),
            ("Data .... 2", 90.0),
            ("Body text here.", 72.0),
        ]);
        for t in ["Intro", "Scope", "Methods", "Data"] {
            blocks.push(block(1, 72.0, 100.0 + 20.0 * blocks.len() as f64, 11.0, true, t));
        }
        let hs = detect_textual_toc(&blocks).unwrap();
        assert_eq!(hs.iter().map(|h| (h.text.as_str(), h.level)).collect::<Vec<_>>(), vec![
            ("Intro", 1),
            ("Scope", 2),
            ("Methods", 1),
            ("Data", 2)
        ]);
        assert!(hs.iter().all(|h| h.block_ref >= 6));
    }
}
