mod common;

use pdfchunk_core::geometry::Rect;
use pdfchunk_core::headings::{normalize_title, resolve_headings, HeadingSource};
use pdfchunk_core::layout::{bucket, BlockKind, Block, BodyStats, Line};
use pdfchunk_core::pdf::{MetadataTocEntry, RawDocument, Span};
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIZES: [f64; 7] = [10.0, 11.0, 12.0, 14.0, 16.0, 18.0, 20.0];

fn stats(pages: usize) -> BodyStats {
    BodyStats { body_font_size: 11.0, body_line_spacing: 14.0, page_count: pages }
}

fn block(page: usize, y0: f64, size: f64, bold: bool, text: &str) -> Block {
    let span = Span {
        page_index: page,
        bbox: Rect::new(72.0, y0, 72.0 + 0.5 * size * text.chars().count() as f64, y0 + size),
        text: text.into(),
        font_size: size,
        font_name: "Helvetica".into(),
        bold,
        italic: false,
        monospaced: false,
        rotated: false,
        link: None,
    };
    Block::new(vec![Line::new(vec![span])], BlockKind::Paragraph)
}

fn empty(pages: usize) -> RawDocument {
    RawDocument { page_count: pages, page_sizes: vec![(612.0, 792.0); pages], ..Default::default() }
}

fn random_blocks(rng: &mut ChaCha8Rng, pages: usize) -> Vec<Block> {
    let mut out = Vec::new();
    for page in 0..pages {
        let mut y = 40.0;
        for _ in 0..rng.random_range(1..10) {
            let size = *SIZES.choose(rng).unwrap();
            let n = rng.random_range(1..16);
            let text = format!("{} {}", common::words(rng, n), out.len());
            out.push(block(page, y, size, rng.random_bool(0.3), &text));
            y += size + rng.random_range(4.0..30.0);
        }
    }
    out
}

fn random_case(seed: u64) -> (RawDocument, Vec<Block>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pages = rng.random_range(1..4);
    let blocks = random_blocks(&mut rng, pages);
    let mut doc = empty(pages);
    if rng.random_bool(0.4) {
        let mut entries = Vec::new();
        for b in &blocks {
            if rng.random_bool(0.3) {
                entries.push(MetadataTocEntry { title: b.text(), level: rng.random_range(1..9), page_index: b.page_index });
            }
        }
        doc.metadata_toc = Some(entries);
    }
    (doc, blocks)
}

proptest! {
    #[test]
    fn levels_sources_and_order(seed in any::<u64>()) {
        let (doc, blocks) = random_case(seed);
        let hs = resolve_headings(&doc, &blocks, &stats(doc.page_count));
        prop_assert!(hs.iter().all(|h| (1..=6).contains(&h.level)));
        prop_assert!(hs.windows(2).all(|w| w[0].source == w[1].source));
        let keys: Vec<(usize, f64)> =
            hs.iter().map(|h| (blocks[h.block_ref].page_index, blocks[h.block_ref].bbox.y0)).collect();
        prop_assert!(keys.windows(2).all(|w| w[0] <= w[1]));
        if let Some(h) = hs.first() {
            if h.source == HeadingSource::MetadataToc {
                let toc = doc.metadata_toc.as_ref().unwrap();
                for h in &hs {
                    let want = toc.iter().filter(|e| normalize_title(&e.title) == normalize_title(&h.text)).map(|e| e.level.clamp(1, 6) as u8);
                    prop_assert!(want.clone().any(|l| l == h.level), "{} at {}", h.text, h.level);
                }
            }
        }
    }

    #[test]
    fn larger_type_never_sits_deeper(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pages = rng.random_range(1..4);
        let blocks = random_blocks(&mut rng, pages);
        let hs = resolve_headings(&empty(pages), &blocks, &stats(pages));
        prop_assert!(hs.iter().all(|h| h.source == HeadingSource::FontSize));
        for a in &hs {
            for b in &hs {
                let (fa, fb) = (bucket(blocks[a.block_ref].font_size()), bucket(blocks[b.block_ref].font_size()));
                if fa > fb {
                    prop_assert!(a.level < b.level, "{fa} at {} vs {fb} at {}", a.level, b.level);
                }
                if fa == fb {
                    prop_assert_eq!(a.level, b.level);
                }
            }
        }
    }
}
