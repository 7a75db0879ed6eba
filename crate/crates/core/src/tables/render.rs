use super::{Grid, TableCell};

fn escape(text: &str) -> String {
    text.replace('|', "\\|").replace("\r\n", "<br>").replace('\n', "<br>")
}

/// Pipe table with grid row 0 as header. A merged cell's text sits in its
/// top-left unit cell; the other covered unit cells are empty.
pub fn render_table(cells: &[TableCell], grid: &Grid) -> String {
    let (rows, cols) = (grid.rows(), grid.cols());
    let mut matrix = vec![vec![String::new(); cols]; rows];
    for c in cells {
        if c.row < rows && c.col < cols {
            matrix[c.row][c.col] = escape(c.text.trim());
        }
    }
    let row_line = |row: &[String]| {
        let inner: Vec<String> = row.iter().map(|t| format!(" {t} ")).collect();
        format!("|{}|", inner.join("|"))
    };
    let mut out = Vec::with_capacity(rows + 1);
    out.push(row_line(&matrix[0]));
    out.push(format!("|{}|", vec![" --- "; cols].join("|")));
    out.extend(matrix[1..].iter().map(|r| row_line(r)));
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(row: usize, col: usize, row_span: usize, col_span: usize, text: &str) -> TableCell {
        TableCell { row, col, row_span, col_span, text: text.into() }
    }

    fn grid2x2() -> Grid {
        Grid::full(0, vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0])
    }

    #[test]
    fn canonical_form() {
        let cells = vec![cell(0, 0, 1, 1, "A"), cell(0, 1, 1, 1, "B"), cell(1, 0, 1, 1, "1"), cell(1, 1, 1, 1, "2")];
        assert_eq!(render_table(&cells, &grid2x2()), "| A | B |\n| --- | --- |\n| 1 | 2 |");
    }

    #[test]
    fn merged_header_leaves_blank() {
        let cells = vec![cell(0, 0, 1, 2, "Title"), cell(1, 0, 1, 1, "1"), cell(1, 1, 1, 1, "2")];
        let md = render_table(&cells, &grid2x2());
        assert!(md.starts_with("| Title |  |\n"), "{md}");
    }

    #[test]
    fn pipes_are_escaped() {
        let cells = vec![cell(0, 0, 1, 1, "a|b")];
        let g = Grid::full(0, vec![0.0, 1.0], vec![0.0, 1.0]);
        assert_eq!(render_table(&cells, &g), "| a\\|b |\n| --- |");
    }
}
