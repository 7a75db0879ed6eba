use pdfchunk_core::geometry::Rect;
use pdfchunk_core::layout::{
    assemble_blocks, assemble_lines, estimate_body_stats, remove_headers_footers, BodyStats, Line,
};
use pdfchunk_core::pdf::{RawDocument, Span};
use proptest::prelude::*;

/// Spans on a quarter-point grid so translations stay exact.
fn arb_span(pages: usize) -> impl Strategy<Value = Span> {
    (0..pages, 0u32..1600, 0u32..2800, prop::sample::select(vec![8.0, 10.0, 11.0, 12.0, 16.0]), 1usize..20, any::<bool>())
        .prop_map(|(page, x, y, size, chars, bold)| Span {
            page_index: page,
            bbox: Rect::new(x as f64 / 4.0, y as f64 / 4.0, x as f64 / 4.0 + chars as f64 * size / 2.0, y as f64 / 4.0 + size),
            text: "w".repeat(chars),
            font_size: size,
            font_name: "Helvetica".into(),
            bold,
            italic: false,
            monospaced: false,
            rotated: false,
            link: None,
        })
}

fn arb_doc() -> impl Strategy<Value = RawDocument> {
    (1usize..6).prop_flat_map(|pages| {
        prop::collection::vec(arb_span(pages), 1..60).prop_map(move |spans| RawDocument {
            page_count: pages,
            page_sizes: vec![(612.0, 792.0); pages],
            spans,
            ..Default::default()
        })
    })
}

/// A key identifying a span independently of its position in a list.
fn key(s: &Span) -> String {
    format!("{}|{:?}|{}|{}", s.page_index, s.bbox, s.text, s.bold)
}

fn sorted_keys<'a>(spans: impl Iterator<Item = &'a Span>) -> Vec<String> {
    let mut v: Vec<String> = spans.map(key).collect();
    v.sort();
    v
}

fn line_keys(lines: &[Line]) -> Vec<Vec<String>> {
    lines.iter().map(|l| l.spans.iter().map(key).collect()).collect()
}

fn translate(doc: &RawDocument, dx: f64, dy: f64) -> RawDocument {
    let mut d = doc.clone();
    for s in &mut d.spans {
        s.bbox = s.bbox.translate(dx, dy);
    }
    d
}

proptest! {
    #[test]
    fn lines_and_blocks_partition(doc in arb_doc()) {
        let lines = assemble_lines(&doc);
        prop_assert_eq!(sorted_keys(lines.iter().flat_map(|l| l.spans.iter())), sorted_keys(doc.spans.iter()));
        for l in &lines {
            prop_assert!(l.spans.iter().all(|s| s.page_index == l.page_index));
            prop_assert!(l.spans.windows(2).all(|w| w[0].bbox.x0 <= w[1].bbox.x0));
        }
        let stats = estimate_body_stats(&doc).unwrap();
        let blocks = assemble_blocks(&lines, &stats);
        let from_blocks: Vec<Vec<String>> = blocks.iter().flat_map(|b| line_keys(&b.lines)).collect();
        prop_assert_eq!(from_blocks, line_keys(&lines));
        for b in &blocks {
            prop_assert!(!b.lines.is_empty());
            prop_assert!(b.lines.windows(2).all(|w| w[0].bbox.y0 <= w[1].bbox.y0));
        }
    }

    #[test]
    fn header_footer_removal_is_safe_and_idempotent(doc in arb_doc()) {
        let once = remove_headers_footers(&doc);
        let twice = remove_headers_footers(&once);
        prop_assert_eq!(&once, &twice);
        // A span whose signature appears on a single page always survives.
        for s in &doc.spans {
            let sig = pdfchunk_core::layout::position_signature(s);
            let mut pages: Vec<usize> = doc
                .spans
                .iter()
                .filter(|o| pdfchunk_core::layout::position_signature(o) == sig)
                .map(|o| o.page_index)
                .collect();
            pages.sort();
            pages.dedup();
            if pages.len() == 1 {
                prop_assert!(once.spans.contains(s));
            }
        }
    }

    #[test]
    fn grouping_is_translation_invariant(doc in arb_doc(), dx in -200i32..200, dy in -200i32..200) {
        let moved = translate(&doc, dx as f64, dy as f64);
        let (a, b) = (assemble_lines(&doc), assemble_lines(&moved));
        let sizes = |ls: &[Line]| ls.iter().map(|l| l.spans.iter().map(|s| s.text.len()).collect::<Vec<_>>()).collect::<Vec<_>>();
        prop_assert_eq!(sizes(&a), sizes(&b));
        let stats = BodyStats { body_font_size: 11.0, body_line_spacing: 14.0, page_count: doc.page_count };
        let count = |ls: &[Line]| assemble_blocks(ls, &stats).iter().map(|b| b.lines.len()).collect::<Vec<_>>();
        prop_assert_eq!(count(&a), count(&b));
    }
}
