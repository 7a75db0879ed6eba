use std::path::Path;

use serde::Serialize;

use super::PipelineConfig;
use crate::error::{Error, Result};
use crate::headings::{resolve_headings_with, Heading};
use crate::layout::{
    assemble_blocks_with, assemble_lines_with, bind_links_with, estimate_body_stats_with, find_main_title,
    remove_headers_footers_with, BodyStats,
};
use crate::markdown::{emit, MarkdownDoc};
use crate::pdf::{extract_raw, load_fixture, RawDocument};
use crate::tables::{detect_grids_with, extract_cells, extract_cells_or_unmerged, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParsedDocument {
    pub doc_id: String,
    pub page_count: usize,
    pub main_title: Option<String>,
    pub headings: Vec<Heading>,
    pub table_count: usize,
    pub markdown: MarkdownDoc,
}

/// File stem used to tie chunks and questions to a document.
pub fn doc_id_for(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn recover_tables(doc: &RawDocument, cfg: &PipelineConfig) -> Vec<Table> {
    detect_grids_with(&doc.segments, &cfg.tables)
        .into_iter()
        .filter_map(|grid| {
            let cells = extract_cells(&grid, &doc.spans).unwrap_or_else(|e| {
                log::warn!("{e}; keeping its unit cells unmerged");
                extract_cells_or_unmerged(&grid, &doc.spans)
            });
            cells.iter().any(|c| !c.text.is_empty()).then_some(Table { grid, cells })
        })
        .collect()
}

/// Header/footer removal, link binding, tables, lines and blocks, title,
/// headings, markdown.
pub fn parse_raw(raw: RawDocument, doc_id: &str, cfg: &PipelineConfig) -> Result<ParsedDocument> {
    let doc = remove_headers_footers_with(&raw, &cfg.layout);
    let mut doc = bind_links_with(&doc, &cfg.layout);
    let tables = recover_tables(&doc, cfg);
    doc.spans.retain(|s| {
        !tables.iter().any(|t| t.page_index() == s.page_index && t.grid.contains(s.bbox.center()))
    });

    let stats = match estimate_body_stats_with(&doc, &cfg.layout) {
        Ok(s) => s,
        Err(Error::EmptyDocument) if !tables.is_empty() => {
            BodyStats { body_font_size: 10.0, body_line_spacing: 0.0, page_count: doc.page_count }
        }
        Err(e) => return Err(e),
    };
    let lines = assemble_lines_with(&doc, &cfg.layout);
    let blocks = assemble_blocks_with(&lines, &stats, &cfg.layout);
    let title = find_main_title(&blocks, &stats);
    let headings = resolve_headings_with(&doc, &blocks, &stats, title, &cfg.headings);
    let markdown = emit(&blocks, &headings, &tables, title);
    Ok(ParsedDocument {
        doc_id: doc_id.to_string(),
        page_count: doc.page_count,
        main_title: markdown.main_title.clone(),
        headings,
        table_count: tables.len(),
        markdown,
    })
}

/// Markdown input passes straight through with no page information.
pub fn parse_markdown(text: &str, doc_id: &str) -> ParsedDocument {
    ParsedDocument {
        doc_id: doc_id.to_string(),
        page_count: 0,
        main_title: None,
        headings: Vec::new(),
        table_count: 0,
        markdown: MarkdownDoc::from_markdown(text),
    }
}

/// Parses a PDF, a span fixture (`.json`) or a markdown file (`.md`).
pub fn parse_path(path: &Path, cfg: &PipelineConfig) -> Result<ParsedDocument> {
    let doc_id = doc_id_for(path);
    let ext = path.extension().map(|e| e.to_string_lossy().to_lowercase()).unwrap_or_default();
    match ext.as_str() {
        "json" => parse_raw(load_fixture(path)?, &doc_id, cfg),
        "md" | "markdown" => {
            let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
                _ => Error::Io(e),
            })?;
            Ok(parse_markdown(&text, &doc_id))
        }
        _ => parse_raw(extract_raw(path)?, &doc_id, cfg),
    }
}
