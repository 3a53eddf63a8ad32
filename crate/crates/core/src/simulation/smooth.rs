//! Row-major 2-D grids and discretized Gaussian smoothing.

use crate::error::{Error, Result};

/// A dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Clone> Grid2<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Grid2 {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }
}

impl<T> Grid2<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "grid data has {} entries, expected {rows}×{cols}",
                data.len()
            )));
        }
        Ok(Grid2 { rows, cols, data })
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn same_shape<U>(&self, other: &Grid2<U>) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }
}

/// Smooths with a discrete Gaussian kernel of standard deviation
/// `sigma_cells`, truncated to offsets within 3σ. Each output is a weighted
/// mean over the in-grid, non-NaN neighbours, so weights always sum to one
/// and NaN cells (missing values) neither contribute nor get filled.
pub fn gaussian_smooth(grid: &Grid2<f64>, sigma_cells: f64) -> Result<Grid2<f64>> {
    if !(sigma_cells.is_finite() && sigma_cells > 0.0) {
        return Err(Error::domain(format!("σ must be finite and > 0, got {sigma_cells}")));
    }
    let cutoff = 3.0 * sigma_cells;
    let radius = cutoff.floor() as isize;
    let mut kernel = Vec::new();
    for di in -radius..=radius {
        for dj in -radius..=radius {
            let d2 = (di * di + dj * dj) as f64;
            if d2 <= cutoff * cutoff {
                kernel.push((di, dj, (-0.5 * d2 / (sigma_cells * sigma_cells)).exp()));
            }
        }
    }
    let (rows, cols) = (grid.rows as isize, grid.cols as isize);
    let mut out = grid.clone();
    for r in 0..rows {
        for c in 0..cols {
            if grid.get(r as usize, c as usize).is_nan() {
                continue;
            }
            let (mut num, mut den) = (0.0, 0.0);
            for &(di, dj, w) in &kernel {
                let (rr, cc) = (r + di, c + dj);
                if rr < 0 || rr >= rows || cc < 0 || cc >= cols {
                    continue;
                }
                let v = *grid.get(rr as usize, cc as usize);
                if v.is_nan() {
                    continue;
                }
                num += w * v;
                den += w;
            }
            out.set(r as usize, c as usize, num / den);
        }
    }
    Ok(out)
}
