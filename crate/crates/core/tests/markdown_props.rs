mod common;

use pdfchunk_core::geometry::Rect;
use pdfchunk_core::headings::resolve_headings;
use pdfchunk_core::layout::{find_main_title, Block, BlockKind, BodyStats, Line};
use pdfchunk_core::markdown::emit;
use pdfchunk_core::pdf::{RawDocument, Span};
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;

fn span(page: usize, x0: f64, y0: f64, size: f64, text: String) -> Span {
    let x1 = x0 + 0.5 * size * text.chars().count() as f64;
    Span {
        page_index: page,
        bbox: Rect::new(x0, y0, x1, y0 + size),
        text,
        font_size: size,
        font_name: "Helvetica".into(),
        bold: false,
        italic: false,
        monospaced: false,
        rotated: false,
        link: None,
    }
}

fn random_blocks(rng: &mut ChaCha8Rng) -> (usize, Vec<Block>) {
    let pages = rng.random_range(1..4);
    let mut out = Vec::new();
    for page in 0..pages {
        let mut y = 40.0;
        for _ in 0..rng.random_range(1..8) {
            if rng.random_bool(0.3) {
                let size = *[11.0, 14.0, 16.0, 18.0, 22.0].choose(rng).unwrap();
                let n = rng.random_range(1..6);
                let mut s = span(page, 72.0, y, size, common::words(rng, n));
                s.bold = rng.random_bool(0.5);
                out.push(Block::new(vec![Line::new(vec![s])], BlockKind::Paragraph));
                y += size + 12.0;
                continue;
            }
            let code = rng.random_bool(0.15);
            let mut lines = Vec::new();
            for _ in 0..rng.random_range(1..5) {
                let mut x = 72.0;
                let mut spans = Vec::new();
                for _ in 0..rng.random_range(1..4) {
                    let n = rng.random_range(1..5);
                    let mut s = span(page, x, y, 11.0, common::words(rng, n));
                    s.bold = !code && rng.random_bool(0.2);
                    s.italic = !code && rng.random_bool(0.2);
                    s.monospaced = code;
                    if !code && rng.random_bool(0.1) {
                        s.link = Some(format!("https://example.org/{}", rng.random_range(0..100)));
                    }
                    x = s.bbox.x1 + 3.0;
                    spans.push(s);
                }
                lines.push(Line::new(spans));
                y += 13.0;
            }
            out.push(Block::new(lines, BlockKind::Paragraph));
            y += 10.0;
        }
    }
    (pages, out)
}

/// Words left after stripping the markup this emitter produces.
fn plain_words(md: &str) -> Vec<String> {
    let link = Regex::new(r"\[([^\]]*)\]\([^)]*\)").unwrap();
    let heading = Regex::new(r"^#{1,6} ").unwrap();
    let mut out = Vec::new();
    for line in md.lines() {
        if line.starts_with("```") {
            continue;
        }
        let line = heading.replace(line, "");
        let line = link.replace_all(&line, "$1").replace('*', "");
        out.extend(line.trim_start_matches('\\').split_whitespace().map(String::from));
    }
    out.sort();
    out
}

proptest! {
    #[test]
    fn emission_is_faithful(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (pages, blocks) = random_blocks(&mut rng);
        let stats = BodyStats { body_font_size: 11.0, body_line_spacing: 13.0, page_count: pages };
        let doc = RawDocument { page_count: pages, page_sizes: vec![(612.0, 792.0); pages], ..Default::default() };
        let title = find_main_title(&blocks, &stats);
        let headings = resolve_headings(&doc, &blocks, &stats);
        let md = emit(&blocks, &headings, &[], title);

        let mut want: Vec<String> =
            blocks.iter().flat_map(|b| b.spans()).flat_map(|s| s.text.split_whitespace()).map(String::from).collect();
        want.sort();
        prop_assert_eq!(plain_words(&md.text), want);

        let mut expected = Vec::new();
        if let Some(t) = title {
            expected.push((1, blocks[t].text()));
        }
        for (i, b) in blocks.iter().enumerate() {
            if Some(i) == title {
                continue;
            }
            if let Some(h) = headings.iter().find(|h| h.block_ref == i) {
                let shift = usize::from(title.is_some());
                expected.push(((h.level as usize + shift).min(6), b.text()));
            }
        }
        let atx = Regex::new(r"^(#{1,6}) (.*)$").unwrap();
        let mut in_fence = false;
        let mut got = Vec::new();
        for line in md.lines() {
            if line.starts_with("```") {
                in_fence = !in_fence;
            } else if let (false, Some(c)) = (in_fence, atx.captures(line)) {
                got.push((c[1].len(), c[2].to_string()));
            }
        }
        prop_assert_eq!(got, expected);

        prop_assert_eq!(md.line_pages.len(), md.line_count());
        let starts: Vec<usize> = md.line_pages.iter().flatten().map(|p| p.0).collect();
        prop_assert!(starts.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(md.line_pages.iter().flatten().all(|p| p.0 <= p.1 && p.1 < pages));
    }
}
