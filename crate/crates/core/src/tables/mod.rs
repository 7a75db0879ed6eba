//! Tables drawn with ruling lines: lattice detection, cell recovery with
//! merged cells, and pipe-table rendering.

mod cells;
mod grid;
mod render;

use serde::{Deserialize, Serialize};

pub use cells::{extract_cells, extract_cells_or_unmerged};
pub use grid::{detect_grids, detect_grids_with};
pub use render::render_table;

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TableConfig {
    /// Coordinates within this distance snap together, and rule pieces
    /// separated by at most this gap chain into one rule.
    pub snap_tolerance: f64,
}

impl Default for TableConfig {
    fn default() -> Self {
        Self { snap_tolerance: 2.0 }
    }
}

impl TableConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.snap_tolerance > 0.0) || !self.snap_tolerance.is_finite() {
            return Err(Error::Config(format!(
                "tables.snap_tolerance must be positive, got {}",
                self.snap_tolerance
            )));
        }
        Ok(())
    }
}

/// A ruled lattice. `h_edges[r][c]` is the horizontal edge on rule `ys[r]`
/// between `xs[c]` and `xs[c + 1]`; `v_edges[r][c]` is the vertical edge on
/// rule `xs[c]` between `ys[r]` and `ys[r + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub page_index: usize,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub h_edges: Vec<Vec<bool>>,
    pub v_edges: Vec<Vec<bool>>,
}

impl Grid {
    /// Grid with every edge present.
    pub fn full(page_index: usize, xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let (rows, cols) = (ys.len() - 1, xs.len() - 1);
        Self {
            page_index,
            h_edges: vec![vec![true; cols]; rows + 1],
            v_edges: vec![vec![true; cols + 1]; rows],
            xs,
            ys,
        }
    }

    pub fn rows(&self) -> usize {
        self.ys.len() - 1
    }

    pub fn cols(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn bbox(&self) -> Rect {
        Rect::new(self.xs[0], self.ys[0], *self.xs.last().unwrap(), *self.ys.last().unwrap())
    }

    pub fn contains(&self, p: Point) -> bool {
        self.bbox().contains(p)
    }

    /// Rectangle of a cell region in page coordinates.
    pub fn region_rect(&self, row: usize, col: usize, row_span: usize, col_span: usize) -> Rect {
        Rect::new(self.xs[col], self.ys[row], self.xs[col + col_span], self.ys[row + row_span])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub row: usize,
    pub col: usize,
    pub row_span: usize,
    pub col_span: usize,
    pub text: String,
}

/// A recovered table placed in the reading flow.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub grid: Grid,
    pub cells: Vec<TableCell>,
}

impl Table {
    pub fn page_index(&self) -> usize {
        self.grid.page_index
    }

    pub fn bbox(&self) -> Rect {
        self.grid.bbox()
    }

    pub fn markdown(&self) -> String {
        render_table(&self.cells, &self.grid)
    }
}
