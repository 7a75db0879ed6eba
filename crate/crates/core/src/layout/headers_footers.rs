use std::collections::{HashMap, HashSet};

use super::LayoutConfig;
use crate::pdf::{RawDocument, Span};

/// Position signature: bbox rounded to whole points plus the text with
/// every digit replaced by `#`, so running page numbers compare equal.
pub fn position_signature(span: &Span) -> (i64, i64, i64, i64, String) {
    let r = &span.bbox;
    let text: String = span
        .text
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .chars()
        .map(|c| if c.is_ascii_digit() { '#' } else { c })
        .collect();
    (
        r.x0.round() as i64,
        r.y0.round() as i64,
        r.x1.round() as i64,
        r.y1.round() as i64,
        text,
    )
}

pub fn remove_headers_footers(doc: &RawDocument) -> RawDocument {
    remove_headers_footers_with(doc, &LayoutConfig::default())
}

/// Drops every span whose signature appears on more than
/// `header_footer_ratio` of the pages (and on at least two pages).
pub fn remove_headers_footers_with(doc: &RawDocument, cfg: &LayoutConfig) -> RawDocument {
    if doc.page_count < cfg.header_footer_min_pages {
        return doc.clone();
    }
    let mut pages_by_signature: HashMap<_, HashSet<usize>> = HashMap::new();
    for s in &doc.spans {
        pages_by_signature
            .entry(position_signature(s))
            .or_default()
            .insert(s.page_index);
    }
    let repeated = |s: &Span| {
        let pages = pages_by_signature[&position_signature(s)].len();
        pages >= 2 && pages as f64 > cfg.header_footer_ratio * doc.page_count as f64
    };
    RawDocument {
        spans: doc.spans.iter().filter(|s| !repeated(s)).cloned().collect(),
        ..doc.clone()
    }
}
