use super::{Grid, TableCell};
use crate::error::{Error, Result};
use crate::layout::join_spans;
use crate::pdf::Span;

/// Connected groups of unit cells joined across missing interior edges.
fn regions(grid: &Grid) -> Vec<Vec<(usize, usize)>> {
    let (rows, cols) = (grid.rows(), grid.cols());
    let mut seen = vec![vec![false; cols]; rows];
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if seen[r][c] {
                continue;
            }
            let mut region = Vec::new();
            let mut stack = vec![(r, c)];
            seen[r][c] = true;
            while let Some((rr, cc)) = stack.pop() {
                region.push((rr, cc));
                let mut visit = |nr: usize, nc: usize, stack: &mut Vec<(usize, usize)>| {
                    if !seen[nr][nc] {
                        seen[nr][nc] = true;
                        stack.push((nr, nc));
                    }
                };
                if cc + 1 < cols && !grid.v_edges[rr][cc + 1] {
                    visit(rr, cc + 1, &mut stack);
                }
                if cc > 0 && !grid.v_edges[rr][cc] {
                    visit(rr, cc - 1, &mut stack);
                }
                if rr + 1 < rows && !grid.h_edges[rr + 1][cc] {
                    visit(rr + 1, cc, &mut stack);
                }
                if rr > 0 && !grid.h_edges[rr][cc] {
                    visit(rr - 1, cc, &mut stack);
                }
            }
            region.sort_unstable();
            out.push(region);
        }
    }
    out
}

/// `(row, col, row_span, col_span)` when the region is a full rectangle.
fn rectangle(region: &[(usize, usize)]) -> Option<(usize, usize, usize, usize)> {
    let r0 = region.iter().map(|p| p.0).min()?;
    let r1 = region.iter().map(|p| p.0).max()?;
    let c0 = region.iter().map(|p| p.1).min()?;
    let c1 = region.iter().map(|p| p.1).max()?;
    let (h, w) = (r1 - r0 + 1, c1 - c0 + 1);
    (h * w == region.len()).then_some((r0, c0, h, w))
}

fn cell_text(grid: &Grid, rect: (usize, usize, usize, usize), spans: &[Span]) -> String {
    let area = grid.region_rect(rect.0, rect.1, rect.2, rect.3);
    let mut inside: Vec<&Span> = spans
        .iter()
        .filter(|s| s.page_index == grid.page_index && area.contains(s.bbox.center()))
        .collect();
    inside.sort_by(|a, b| a.baseline().total_cmp(&b.baseline()).then(a.bbox.x0.total_cmp(&b.bbox.x0)));
    // Visual lines inside the cell, then joined with spaces.
    let mut lines: Vec<Vec<&Span>> = Vec::new();
    for s in inside {
        match lines.last_mut() {
            Some(line) if (line[0].baseline() - s.baseline()).abs() <= 0.3 * s.font_size.min(line[0].font_size) => {
                line.push(s)
            }
            _ => lines.push(vec![s]),
        }
    }
    lines
        .into_iter()
        .map(|mut l| {
            l.sort_by(|a, b| a.bbox.x0.total_cmp(&b.bbox.x0));
            join_spans(l)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn build(grid: &Grid, spans: &[Span], strict: bool) -> Result<Vec<TableCell>> {
    let mut cells = Vec::new();
    for region in regions(grid) {
        let rects: Vec<(usize, usize, usize, usize)> = match rectangle(&region) {
            Some(r) => vec![r],
            None if strict => {
                return Err(Error::InconsistentLattice(format!(
                    "page {}: merged region starting at row {}, col {} is not rectangular",
                    grid.page_index + 1,
                    region[0].0,
                    region[0].1
                )))
            }
            None => region.iter().map(|&(r, c)| (r, c, 1, 1)).collect(),
        };
        for rect in rects {
            cells.push(TableCell {
                row: rect.0,
                col: rect.1,
                row_span: rect.2,
                col_span: rect.3,
                text: cell_text(grid, rect, spans),
            });
        }
    }
    cells.sort_by_key(|c| (c.row, c.col));
    Ok(cells)
}

/// Builds cells from edge presence, merging across missing interior edges,
/// and fills each with the text of the spans centred inside it.
pub fn extract_cells(grid: &Grid, spans: &[Span]) -> Result<Vec<TableCell>> {
    build(grid, spans, true)
}

/// Like [`extract_cells`], but a non-rectangular merge falls back to its
/// unit cells instead of failing.
pub fn extract_cells_or_unmerged(grid: &Grid, spans: &[Span]) -> Vec<TableCell> {
    build(grid, spans, false).expect("lenient extraction cannot fail")
}
