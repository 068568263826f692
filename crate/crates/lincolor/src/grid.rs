//! Monochromatic rectangles and corners in finite grid colorings.
//!
//! A rectangle witness is a pair of rows and a pair of columns whose four
//! cells share one color; a corner witness keeps three of those four
//! cells, two sharing a row and two sharing a column. The rectangle finder
//! runs the counting scheme: per column, every same-colored row pair files
//! a `(row pair, color)` signature, and a signature repeating across two
//! columns pins the rectangle. The corner finder counts per-row and
//! per-column color occurrences and looks for a pivot cell with a partner
//! in each direction. Exhaustive subset scans confirm absence on small
//! grids; those oracles live in test code.

use crate::exec;

/// A total coloring of a `rows x cols` grid with colors below `colors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridColoring {
    rows: usize,
    cols: usize,
    colors: u32,
    cells: Vec<u32>,
}

impl GridColoring {
    pub fn new(rows: usize, cols: usize, colors: u32, cells: Vec<u32>) -> Self {
        assert_eq!(cells.len(), rows * cols, "grid must be total");
        assert!(cells.iter().all(|&c| c < colors), "cell color out of range");
        GridColoring { rows, cols, colors, cells }
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged grid");
        let cells: Vec<u32> = rows.into_iter().flatten().collect();
        let colors = cells.iter().copied().max().map_or(1, |m| m + 1);
        GridColoring { rows: r, cols: c, colors, cells }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn cell(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.cols + col]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }
}

/// Two rows and two columns whose four cells share a color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectangleWitness {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub color: u32,
}

impl RectangleWitness {
    pub fn verify(&self, g: &GridColoring) -> bool {
        let (s0, s1) = self.rows;
        let (t0, t1) = self.cols;
        s0 != s1
            && t0 != t1
            && [g.cell(s0, t0), g.cell(s0, t1), g.cell(s1, t0), g.cell(s1, t1)]
                .iter()
                .all(|&c| c == self.color)
    }
}

/// Three cells of one color forming an axis-aligned corner: the pivot
/// shares its row with one cell and its column with the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerWitness {
    pub pivot: (usize, usize),
    pub row_mate: (usize, usize),
    pub col_mate: (usize, usize),
    pub color: u32,
}

impl CornerWitness {
    pub fn verify(&self, g: &GridColoring) -> bool {
        let (s, t) = self.pivot;
        let (sr, tr) = self.row_mate;
        let (sc, tc) = self.col_mate;
        sr == s
            && tr != t
            && tc == t
            && sc != s
            && g.cell(s, t) == self.color
            && g.cell(sr, tr) == self.color
            && g.cell(sc, tc) == self.color
    }
}

/// Finds a monochromatic rectangle by signature counting: columns scanned
/// left to right, row pairs in lexicographic order, first repeat wins.
pub fn find_mono_rectangle(g: &GridColoring) -> Option<RectangleWitness> {
    use std::collections::HashMap;
    let mut seen: HashMap<(usize, usize, u32), usize> = HashMap::new();
    for t in 0..g.cols() {
        for s0 in 0..g.rows() {
            for s1 in (s0 + 1)..g.rows() {
                let color = g.cell(s0, t);
                if g.cell(s1, t) != color {
                    continue;
                }
                match seen.get(&(s0, s1, color)) {
                    Some(&t0) => {
                        return Some(RectangleWitness { rows: (s0, s1), cols: (t0, t), color })
                    }
                    None => {
                        seen.insert((s0, s1, color), t);
                    }
                }
            }
        }
    }
    None
}

/// Finds a monochromatic corner by occurrence counting: a pivot cell whose
/// color repeats in its row and in its column yields a witness; cells are
/// scanned row-major and partners take the least index.
pub fn find_mono_corner(g: &GridColoring) -> Option<CornerWitness> {
    let colors = g.colors() as usize;
    let mut row_count = vec![0u32; g.rows() * colors];
    let mut col_count = vec![0u32; g.cols() * colors];
    for s in 0..g.rows() {
        for t in 0..g.cols() {
            let c = g.cell(s, t) as usize;
            row_count[s * colors + c] += 1;
            col_count[t * colors + c] += 1;
        }
    }
    for s in 0..g.rows() {
        for t in 0..g.cols() {
            let color = g.cell(s, t);
            let c = color as usize;
            if row_count[s * colors + c] < 2 || col_count[t * colors + c] < 2 {
                continue;
            }
            let t_mate = (0..g.cols()).find(|&u| u != t && g.cell(s, u) == color);
            let s_mate = (0..g.rows()).find(|&r| r != s && g.cell(r, t) == color);
            if let (Some(tr), Some(sc)) = (t_mate, s_mate) {
                return Some(CornerWitness {
                    pivot: (s, t),
                    row_mate: (s, tr),
                    col_mate: (sc, t),
                    color,
                });
            }
        }
    }
    None
}

fn coloring_of_code(mut code: u64, cells: usize, colors: u32) -> Vec<u32> {
    let mut out = vec![0u32; cells];
    for slot in (0..cells).rev() {
        out[slot] = (code % colors as u64) as u32;
        code /= colors as u64;
    }
    out
}

/// Exhaustively searches all colorings of the grid for one without a
/// monochromatic rectangle; `None` means every coloring contains one.
/// Deterministic: the least counterexample code wins.
pub fn rectangle_free_coloring(rows: usize, cols: usize, colors: u32) -> Option<GridColoring> {
    let total = (colors as u64)
        .checked_pow((rows * cols) as u32)
        .expect("coloring space must fit a machine word");
    let hit = exec::find_first_index(total, |code| {
        let cells = coloring_of_code(code, rows * cols, colors);
        let g = GridColoring { rows, cols, colors, cells };
        find_mono_rectangle(&g).is_none()
    })?;
    Some(GridColoring {
        rows,
        cols,
        colors,
        cells: coloring_of_code(hit, rows * cols, colors),
    })
}

/// Exhaustive corner analogue of [`rectangle_free_coloring`].
pub fn corner_free_coloring(rows: usize, cols: usize, colors: u32) -> Option<GridColoring> {
    let total = (colors as u64)
        .checked_pow((rows * cols) as u32)
        .expect("coloring space must fit a machine word");
    let hit = exec::find_first_index(total, |code| {
        let cells = coloring_of_code(code, rows * cols, colors);
        let g = GridColoring { rows, cols, colors, cells };
        find_mono_corner(&g).is_none()
    })?;
    Some(GridColoring {
        rows,
        cols,
        colors,
        cells: coloring_of_code(hit, rows * cols, colors),
    })
}
