#![allow(dead_code)]

use std::ops::Range;

use pdfchunk_core::chunker::{build_toc_tree, chunk_tree, Chunk, ChunkerConfig};
use pdfchunk_core::eval::Embedding;
use pdfchunk_core::geometry::{Point, Rect};
use pdfchunk_core::markdown::MarkdownDoc;
use pdfchunk_core::pdf::{DrawSegment, LinkBox, MetadataTocEntry, RawDocument, Span};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const WORDS: &[&str] = &[
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india", "juliet", "kilo", "lima",
    "mike", "november", "oscar", "papa", "quebec", "romeo", "sierra", "tango", "uniform", "victor", "whiskey",
];

pub fn words(rng: &mut ChaCha8Rng, n: usize) -> String {
    (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

/// A float with at most three decimals.
fn milli(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> f64 {
    rng.random_range(lo * 1000..hi * 1000) as f64 / 1000.0
}

fn rect(rng: &mut ChaCha8Rng) -> Rect {
    let (x0, y0) = (rng.random_range(0..500_000), rng.random_range(0..700_000));
    let (w, h) = (rng.random_range(0..100_000), rng.random_range(0..40_000));
    let f = |v: i64| v as f64 / 1000.0;
    Rect::new(f(x0), f(y0), f(x0 + w), f(y0 + h))
}

pub fn random_raw_document(rng: &mut ChaCha8Rng) -> RawDocument {
    let page_count = rng.random_range(1..6);
    let page_sizes = (0..page_count).map(|_| (milli(rng, 200, 900), milli(rng, 200, 900))).collect();
    let spans = (0..rng.random_range(0..40))
        .map(|_| Span {
            page_index: rng.random_range(0..page_count),
            bbox: rect(rng),
            text: {
                let n = rng.random_range(1..6);
                words(rng, n)
            },
            font_size: milli(rng, 1, 30),
            font_name: ["Helvetica", "Times-Bold", "Courier"].choose(rng).unwrap().to_string(),
            bold: rng.random(),
            italic: rng.random(),
            monospaced: rng.random(),
            rotated: rng.random_bool(0.1),
            link: rng.random_bool(0.1).then(|| "https://example.org/x".to_string()),
        })
        .collect();
    let segments = (0..rng.random_range(0..20))
        .map(|_| DrawSegment {
            page_index: rng.random_range(0..page_count),
            p0: Point { x: milli(rng, 0, 600), y: milli(rng, 0, 800) },
            p1: Point { x: milli(rng, 0, 600), y: milli(rng, 0, 800) },
            stroke_width: milli(rng, 0, 3),
        })
        .collect();
    let links = (0..rng.random_range(0..5))
        .map(|_| LinkBox {
            page_index: rng.random_range(0..page_count),
            bbox: rect(rng),
            uri: format!("https://example.org/{}", rng.random_range(0..1000)),
        })
        .collect();
    let metadata_toc = rng.random_bool(0.5).then(|| {
        (0..rng.random_range(0..6))
            .map(|_| MetadataTocEntry {
                title: {
                    let n = rng.random_range(1..4);
                    words(rng, n)
                },
                level: rng.random_range(1..4),
                page_index: rng.random_range(0..page_count),
            })
            .collect()
    });
    RawDocument { page_count, page_sizes, spans, segments, links, metadata_toc }
}

/// Random markdown with the structure the generator put into it.
#[derive(Debug, Clone)]
pub struct GeneratedMarkdown {
    pub text: String,
    /// `(line, level)` of every real heading.
    pub headings: Vec<(usize, u8)>,
    /// Line ranges of tables and fenced blocks.
    pub atomic: Vec<Range<usize>>,
}

impl GeneratedMarkdown {
    pub fn lines(&self) -> Vec<&str> {
        self.text.split('\n').collect()
    }

    pub fn is_heading(&self, line: usize) -> bool {
        self.headings.iter().any(|(l, _)| *l == line)
    }

    /// Heading lines in effect at `line` under the nearest-shallower rule.
    pub fn heading_path(&self, line: usize) -> Vec<String> {
        let lines = self.lines();
        let mut stack: Vec<(u8, usize)> = Vec::new();
        for &(l, level) in self.headings.iter().filter(|(l, _)| *l < line) {
            while stack.last().is_some_and(|(lv, _)| *lv >= level) {
                stack.pop();
            }
            stack.push((level, l));
        }
        stack.into_iter().map(|(_, l)| lines[l].to_string()).collect()
    }
}

pub fn random_markdown(rng: &mut ChaCha8Rng) -> GeneratedMarkdown {
    let mut lines: Vec<String> = Vec::new();
    let mut headings = Vec::new();
    let mut atomic = Vec::new();
    let elements = rng.random_range(0..40);
    for _ in 0..elements {
        match rng.random_range(0..10) {
            0..=1 => {
                let level = rng.random_range(1..7u8);
                headings.push((lines.len(), level));
                let n = rng.random_range(1..5);
                lines.push(format!("{} {}", "#".repeat(level as usize), words(rng, n)));
            }
            2..=5 => {
                for _ in 0..rng.random_range(1..6) {
                    let n = rng.random_range(1..40);
                    lines.push(words(rng, n));
                }
            }
            6 => {
                let start = lines.len();
                for _ in 0..rng.random_range(2..25) {
                    let cells: Vec<String> = (0..3)
                        .map(|_| {
                            let n = rng.random_range(1..8);
                            words(rng, n)
                        })
                        .collect();
                    lines.push(format!("| {} |", cells.join(" | ")));
                }
                atomic.push(start..lines.len());
            }
            7 => {
                let start = lines.len();
                lines.push("```".into());
                for _ in 0..rng.random_range(0..20) {
                    let n = rng.random_range(1..12);
                    let body = words(rng, n);
                    lines.push(if rng.random_bool(0.2) { format!("# {body}") } else { body });
                }
                lines.push("```".into());
                atomic.push(start..lines.len());
            }
            _ => lines.push(String::new()),
        }
        // Separate elements so tables never touch one another.
        if rng.random_bool(0.7) || lines.last().is_some_and(|l| l.starts_with('|')) {
            lines.push(String::new());
        }
    }
    GeneratedMarkdown { text: lines.join("\n"), headings, atomic }
}

pub fn random_chunker_config(rng: &mut ChaCha8Rng) -> ChunkerConfig {
    let soft = rng.random_range(10..300);
    ChunkerConfig {
        soft_limit_words: soft,
        hard_limit_words: soft + rng.random_range(0..200),
        min_words: rng.random_range(1..soft),
    }
}

fn word_count(s: &str) -> usize {
    s.split_whitespace().count()
}

/// Checks coverage, header context, size bound, atomicity and determinism.
pub fn check_chunker(g: &GeneratedMarkdown, cfg: &ChunkerConfig) -> Result<(), String> {
    let md = MarkdownDoc::from_markdown(&g.text);
    let chunks: Vec<Chunk> = chunk_tree(&build_toc_tree(&md), &md, cfg);
    let lines = g.lines();

    // Coverage: content lines of all chunks, in order, are exactly the
    // non-heading, non-blank lines of the source.
    let expected: Vec<(usize, &str)> = lines
        .iter()
        .enumerate()
        .filter(|(i, l)| !l.trim().is_empty() && !g.is_heading(*i))
        .map(|(i, l)| (i, *l))
        .collect();
    let mut got: Vec<(usize, &str)> = Vec::new();
    for c in &chunks {
        for (off, l) in c.content.split('\n').enumerate() {
            let line = c.start_line + off;
            if lines.get(line) != Some(&l) {
                return Err(format!("chunk at {} does not mirror source line {line}", c.start_line));
            }
            if !l.trim().is_empty() && !g.is_heading(line) {
                got.push((line, l));
            }
        }
    }
    if got != expected {
        return Err(format!("coverage: {} content lines expected, {} found", expected.len(), got.len()));
    }

    for c in &chunks {
        // Header context.
        let path = g.heading_path(c.start_line);
        if c.parent_headers != path {
            return Err(format!("chunk at {}: headers {:?} != path {:?}", c.start_line, c.parent_headers, path));
        }
        if !c.text().starts_with(&path.join("\n")) {
            return Err(format!("chunk at {} does not start with its headers", c.start_line));
        }
        // Word count excludes heading lines.
        let wc: usize = c
            .content
            .split('\n')
            .enumerate()
            .filter(|(off, _)| !g.is_heading(c.start_line + off))
            .map(|(_, l)| word_count(l))
            .sum();
        if wc != c.word_count {
            return Err(format!("chunk at {}: word_count {} != {wc}", c.start_line, c.word_count));
        }
        // Size bound unless the chunk is one atomic unit.
        let end = c.start_line + c.content.split('\n').count();
        let single_unit =
            end - c.start_line == 1 || g.atomic.iter().any(|r| r.start == c.start_line && r.end == end);
        if c.word_count > cfg.hard_limit_words && !single_unit {
            return Err(format!("chunk at {} has {} words > {}", c.start_line, c.word_count, cfg.hard_limit_words));
        }
        // Atomicity.
        for r in &g.atomic {
            let overlaps = r.start < end && c.start_line < r.end;
            let contains = c.start_line <= r.start && r.end <= end;
            if overlaps && !contains {
                return Err(format!("chunk {}..{end} cuts unit {r:?}", c.start_line));
            }
        }
    }

    // Determinism.
    let again = chunk_tree(&build_toc_tree(&md), &md, cfg);
    if again != chunks {
        return Err("second run differs".into());
    }
    Ok(())
}

/// Top-k by repeated selection of the best remaining score.
pub fn brute_force_topk(q: &Embedding, chunks: &[Embedding], k: usize) -> Vec<usize> {
    let score = |c: &Embedding| {
        let dot: f64 = q.vector.iter().zip(&c.vector).map(|(a, b)| a * b).sum();
        let na = q.vector.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nb = c.vector.iter().map(|v| v * v).sum::<f64>().sqrt();
        (dot / (na * nb)).clamp(-1.0, 1.0)
    };
    // Scores are compared at a 1e-12 resolution, like the library's tie rule.
    let scores: Vec<i64> = chunks.iter().map(|c| (score(c) / 1e-12).round() as i64).collect();
    let mut taken = vec![false; chunks.len()];
    let mut out = Vec::new();
    for _ in 0..k.min(chunks.len()) {
        let mut best: Option<usize> = None;
        for i in 0..chunks.len() {
            if taken[i] {
                continue;
            }
            if best.is_none_or(|b| scores[i] > scores[b]) {
                best = Some(i);
            }
        }
        let b = best.unwrap();
        taken[b] = true;
        out.push(b);
    }
    out
}

pub fn random_embedding(rng: &mut ChaCha8Rng, dim: usize) -> Embedding {
    // Small integer grid so ties actually occur.
    let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-2..=2) as f64).collect();
    if v.iter().all(|x| *x == 0.0) {
        let mut v = v;
        v[0] = 1.0;
        return Embedding::new(v);
    }
    Embedding::new(v)
}
