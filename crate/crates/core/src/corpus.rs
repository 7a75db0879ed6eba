//! Small generated corpus of PDFs with questions whose answers appear
//! verbatim in the text, for end-to-end checks without external data.

use std::path::{Path, PathBuf};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::eval::{EvalQuestion, Relevance};
use crate::pdf::writer::{PdfBuilder, StdFont};

const VOCAB: &[&str] = &[
    "river", "harbor", "engine", "ledger", "copper", "meadow", "signal", "lantern", "orchard", "granite", "compass",
    "voyage", "thunder", "velvet", "canyon", "beacon", "marble", "pepper", "saddle", "timber", "quarry", "falcon",
    "glacier", "harvest", "island", "jasmine", "kettle", "lagoon", "magnet", "nectar", "oyster", "pioneer", "quiver",
    "rocket", "summit", "tunnel", "umbrella", "valley", "walnut", "yonder", "zephyr", "anchor", "bramble", "cobalt",
    "dynamo", "ember", "fjord", "gadget", "hollow", "ivory", "jigsaw", "kernel", "lichen", "mosaic", "nimbus",
    "obsidian", "prism", "quartz", "ripple", "sapphire", "tundra", "uplift", "vortex", "willow", "yarrow", "zenith",
    "archive", "battery", "circuit", "delta", "estuary", "furnace", "gravel", "horizon", "inlet", "junction",
    "kiln", "lattice", "mill", "network", "outpost", "plateau", "reservoir", "satellite", "terrace", "utility",
    "viaduct", "warehouse", "budget", "contract", "policy", "survey", "report", "schedule", "measure", "sample",
    "method", "result", "figure", "record", "region", "sector", "period", "factor", "output", "input", "supply",
    "demand", "capacity", "balance", "pattern", "process", "station", "terminal", "channel", "fabric", "mineral",
];

const CONNECTORS: &[&str] = &["the", "of", "and", "with", "near", "for", "across", "under", "beyond", "within"];

const TOPICS: &[&str] = &["Background", "Operations", "Findings", "Logistics", "Outlook", "Methods", "Review"];

#[derive(Debug, Clone)]
pub struct CorpusDocument {
    pub doc_id: String,
    pub pdf: Vec<u8>,
    pub questions: Vec<EvalQuestion>,
}

fn sentence(rng: &mut ChaCha8Rng, words: usize) -> String {
    let mut out: Vec<String> = Vec::with_capacity(words);
    for i in 0..words {
        let w = if i % 3 == 1 { CONNECTORS.choose(rng) } else { VOCAB.choose(rng) };
        out.push(w.unwrap().to_string());
    }
    let mut s = out.join(" ");
    s[..1].make_ascii_uppercase();
    s.push('.');
    s
}

fn paragraph(rng: &mut ChaCha8Rng, sentences: usize) -> String {
    (0..sentences).map(|_| { let n = rng.random_range(8..15); sentence(rng, n) }).collect::<Vec<_>>().join(" ")
}

fn page_frame(page: &mut crate::pdf::writer::PageBuilder, doc_no: usize, page_no: usize) {
    page.text(72.0, 40.0, 8.0, StdFont::Helvetica, &format!("Field notes volume {doc_no}"));
    page.text(290.0, 760.0, 8.0, StdFont::Helvetica, &format!("Page {page_no}"));
}

/// Five three-page documents, each with a title, an introduction and three
/// numbered sections; every section hides one answer sentence.
pub fn synthetic_corpus(seed: u64) -> Result<Vec<CorpusDocument>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    for d in 1..=5 {
        let doc_id = format!("doc{d}");
        let mut pdf = PdfBuilder::new();
        let mut questions = Vec::new();
        for p in 0..3 {
            let page = pdf.add_page(612.0, 792.0);
            page_frame(page, d, p + 1);
            let mut y = 100.0;
            if p == 0 {
                let title = format!("Survey of the {} {}", VOCAB.choose(&mut rng).unwrap(), VOCAB.choose(&mut rng).unwrap());
                page.text(72.0, y, 24.0, StdFont::HelveticaBold, &title);
                y += 40.0;
                let intro = paragraph(&mut rng, 3);
                y = page.paragraph(72.0, y, 468.0, 11.0, 14.0, StdFont::Helvetica, &intro) + 14.0;
            }
            let heading = format!("{}. {}", p + 1, TOPICS[(d + p) % TOPICS.len()]);
            page.text(72.0, y, 16.0, StdFont::HelveticaBold, &heading);
            y += 28.0;
            let before = paragraph(&mut rng, 3);
            let passage = sentence(&mut rng, 12);
            let after = paragraph(&mut rng, 2);
            y = page.paragraph(72.0, y, 468.0, 11.0, 14.0, StdFont::Helvetica, &format!("{before} {passage} {after}"));
            y += 14.0;
            let closing = paragraph(&mut rng, 4);
            page.paragraph(72.0, y, 468.0, 11.0, 14.0, StdFont::Helvetica, &closing);

            let key: Vec<&str> = passage.trim_end_matches('.').split(' ').filter(|w| w.len() > 4).take(4).collect();
            questions.push(EvalQuestion {
                id: format!("{doc_id}-q{}", p + 1),
                question: format!("What is said about {}?", key.join(", ")),
                relevance: Relevance::Single { doc_id: doc_id.clone(), answer_passage: passage },
            });
        }
        docs.push(CorpusDocument { doc_id, pdf: pdf.to_bytes()?, questions });
    }
    Ok(docs)
}

/// Paths written by [`write_corpus`].
#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub pdfs: Vec<PathBuf>,
    pub dataset: PathBuf,
}

/// Writes `<doc_id>.pdf` files and `questions.jsonl` into `dir`.
pub fn write_corpus(dir: &Path, seed: u64) -> Result<CorpusPaths> {
    std::fs::create_dir_all(dir)?;
    let mut pdfs = Vec::new();
    let mut dataset = String::new();
    for doc in synthetic_corpus(seed)? {
        let path = dir.join(format!("{}.pdf", doc.doc_id));
        std::fs::write(&path, &doc.pdf)?;
        pdfs.push(path);
        for q in &doc.questions {
            dataset.push_str(&serde_json::to_string(q)?);
            dataset.push('\n');
        }
    }
    let dataset_path = dir.join("questions.jsonl");
    std::fs::write(&dataset_path, dataset)?;
    Ok(CorpusPaths { pdfs, dataset: dataset_path })
}
