use super::GazeError;
use crate::imaging::Point;
use serde::{Deserialize, Serialize};

/// `n x n` grid over the screen, cells labelled row-major from the top-left
/// starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub lx: f64,
    pub ly: f64,
}

impl GridSpec {
    pub fn new(n: usize, lx: f64, ly: f64) -> Result<GridSpec, GazeError> {
        if n < 2 {
            return Err(GazeError::InvalidGrid("need at least 2 cells per side"));
        }
        if !(lx > 0.0 && ly > 0.0) {
            return Err(GazeError::InvalidGrid("screen extent must be positive"));
        }
        Ok(GridSpec { n, lx, ly })
    }

    pub fn cell_width(&self) -> f64 {
        self.lx / self.n as f64
    }

    pub fn cell_height(&self) -> f64 {
        self.ly / self.n as f64
    }

    /// Center of cell `label` in screen coordinates.
    pub fn cell_center(&self, label: usize) -> Point {
        let (row, col) = ((label - 1) / self.n, (label - 1) % self.n);
        Point::new(
            (col as f64 + 0.5) * self.cell_width(),
            self.ly - (row as f64 + 0.5) * self.cell_height(),
        )
    }
}

/// Cell containing `p`; points off the screen land in the nearest cell.
pub fn grid_cell(p: Point, grid: &GridSpec) -> usize {
    let last = (grid.n - 1) as f64;
    let col = (p.x / grid.cell_width()).floor().clamp(0.0, last) as usize;
    let row = ((grid.ly - p.y) / grid.cell_height())
        .floor()
        .clamp(0.0, last) as usize;
    row * grid.n + col + 1
}

/// Fraction of `(estimate, truth)` pairs within half a cell in both axes,
/// using strict inequalities.
pub fn score_accuracy(pairs: &[(Point, Point)], grid: &GridSpec) -> Result<f64, GazeError> {
    if pairs.is_empty() {
        return Err(GazeError::EmptyInput);
    }
    let (tx, ty) = (grid.lx / (2 * grid.n) as f64, grid.ly / (2 * grid.n) as f64);
    let correct = pairs
        .iter()
        .filter(|(est, truth)| (est.x - truth.x).abs() < tx && (est.y - truth.y).abs() < ty)
        .count();
    Ok(correct as f64 / pairs.len() as f64)
}

/// Accuracy at every resolution in `ns`.
pub fn accuracy_table(
    pairs: &[(Point, Point)],
    lx: f64,
    ly: f64,
    ns: impl IntoIterator<Item = usize>,
) -> Result<Vec<(usize, f64)>, GazeError> {
    ns.into_iter()
        .map(|n| Ok((n, score_accuracy(pairs, &GridSpec::new(n, lx, ly)?)?)))
        .collect()
}
