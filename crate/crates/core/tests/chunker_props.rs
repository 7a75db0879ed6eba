mod common;

use pdfchunk_core::chunker::{chunk_markdown, filter_min_words, to_jsonl, ChunkerConfig};
use pdfchunk_core::markdown::MarkdownDoc;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn chunker_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_markdown(&mut rng);
        let cfg = common::random_chunker_config(&mut rng);
        if let Err(e) = common::check_chunker(&g, &cfg) {
            prop_assert!(false, "{}\n--- config {:?}\n{}", e, cfg, g.text);
        }
    }

    #[test]
    fn filtered_chunks_meet_minimum(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_markdown(&mut rng);
        let cfg = common::random_chunker_config(&mut rng);
        let md = MarkdownDoc::from_markdown(&g.text);
        let chunks = chunk_markdown(&md, &cfg, "d").unwrap();
        prop_assert!(chunks.iter().all(|c| c.word_count >= cfg.min_words));
        prop_assert_eq!(to_jsonl(&chunks), to_jsonl(&chunk_markdown(&md, &cfg, "d").unwrap()));
    }
}

#[test]
fn filter_keeps_boundary() {
    let cfg = ChunkerConfig::default();
    let md = MarkdownDoc::from_markdown(&format!("# A\n{}\n# B\n{}", "w ".repeat(15), "w ".repeat(14)));
    let root = pdfchunk_core::chunker::build_toc_tree(&md);
    let all = pdfchunk_core::chunker::chunk_tree(&root, &md, &cfg);
    let kept = filter_min_words(all, &cfg);
    assert_eq!(kept.len(), 1);
    assert_eq!(kept[0].parent_headers, vec!["# A"]);
}
