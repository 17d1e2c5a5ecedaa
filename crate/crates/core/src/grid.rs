//! Uniform cell-centered grids on `[0, L]^d` (d = 1, 2) and the fields that
//! live on them.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("dims must be 1 or 2, got {0}")]
    Dims(usize),
    #[error("resolution must be at least {MIN_RESOLUTION}, got {0}")]
    Resolution(usize),
    #[error("extent must be positive and finite, got {0}")]
    Extent(f64),
    #[error("field has {got} values, grid has {expected} cells")]
    Length { expected: usize, got: usize },
}

pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dims: usize,
    extent: f64,
    resolution: usize,
    spacing: f64,
}

impl Grid {
    pub fn new(dims: usize, extent: f64, resolution: usize) -> Result<Self, GridError> {
        if dims != 1 && dims != 2 {
            return Err(GridError::Dims(dims));
        }
        if resolution < MIN_RESOLUTION {
            return Err(GridError::Resolution(resolution));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(GridError::Extent(extent));
        }
        Ok(Self {
            dims,
            extent,
            resolution,
            spacing: extent / resolution as f64,
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.resolution.pow(self.dims as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Length (1D) or area (2D) of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dims as i32)
    }

    /// `|Ω|`.
    pub fn measure(&self) -> f64 {
        self.extent.powi(self.dims as i32)
    }

    /// Index stride along `axis` (x is contiguous).
    pub fn stride(&self, axis: usize) -> usize {
        self.resolution.pow(axis as u32)
    }

    /// Cell-center coordinates; `y` is 0 on 1D grids.
    pub fn center(&self, index: usize) -> (f64, f64) {
        let n = self.resolution;
        let (i, j) = (index % n, index / n);
        let h = self.spacing;
        let x = (i as f64 + 0.5) * h;
        let y = if self.dims == 2 { (j as f64 + 0.5) * h } else { 0.0 };
        (x, y)
    }

    /// Coordinate of `index` along `axis`, as a cell number.
    pub fn coord(&self, index: usize, axis: usize) -> usize {
        (index / self.stride(axis)) % self.resolution
    }

    /// Calls `visit(left, right)` for every interior face normal to `axis`,
    /// in increasing index order.
    pub fn for_each_face(&self, axis: usize, mut visit: impl FnMut(usize, usize)) {
        let n = self.resolution;
        let rows = if self.dims == 2 { n } else { 1 };
        if axis == 0 {
            for row in (0..rows).map(|j| j * n) {
                for i in row..row + n - 1 {
                    visit(i, i + 1);
                }
            }
        } else {
            for i in 0..n * (n - 1) {
                visit(i, i + n);
            }
        }
    }

    /// Number of interior faces touching the cell.
    pub fn interior_faces(&self, index: usize) -> usize {
        (0..self.dims)
            .map(|axis| {
                let c = self.coord(index, axis);
                usize::from(c > 0) + usize::from(c + 1 < self.resolution)
            })
            .sum()
    }
}

/// Cell-centered samples over a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    values: Vec<f64>,
    grid: Grid,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::Length {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { values, grid })
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Self {
            values: vec![value; grid.len()],
            grid,
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let (x, y) = grid.center(i);
                f(x, y)
            })
            .collect();
        Self { values, grid }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            grid: self.grid,
        }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Cell-volume weighted sum, accumulated in index order.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }
}

/// Writes `Σ_faces (w_nb − w_i)/h²` (the Neumann five/three-point Laplacian)
/// into `out`. Each axis is accumulated separately and the partial sums are
/// added last so that reflections and transpositions of the grid commute
/// with the stencil.
pub fn laplacian(grid: &Grid, w: &[f64], out: &mut [f64]) {
    let inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    out.iter_mut().for_each(|o| *o = 0.0);
    let mut axis_part = vec![0.0; w.len()];
    for axis in 0..grid.dims() {
        axis_part.iter_mut().for_each(|o| *o = 0.0);
        grid.for_each_face(axis, |left, right| {
            let flux = (w[right] - w[left]) * inv_h2;
            axis_part[left] += flux;
            axis_part[right] -= flux;
        });
        out.iter_mut().zip(&axis_part).for_each(|(o, a)| *o += a);
    }
}

/// Cell-wise `|∇w|²` by centered differences with mirrored ghost cells.
pub fn gradient_sq(field: &Field) -> Vec<f64> {
    let grid = field.grid();
    let w = field.values();
    let n = grid.resolution();
    let inv_2h = 0.5 / grid.spacing();
    (0..grid.len())
        .map(|i| {
            (0..grid.dims())
                .map(|axis| {
                    let stride = grid.stride(axis);
                    let c = grid.coord(i, axis);
                    let lo = if c > 0 { w[i - stride] } else { w[i] };
                    let hi = if c + 1 < n { w[i + stride] } else { w[i] };
                    let g = (hi - lo) * inv_2h;
                    g * g
                })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_geometry() {
        let g = Grid::new(2, 2.0, 8).unwrap();
        assert_eq!(g.len(), 64);
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.cell_volume(), 0.0625);
        assert_eq!(g.measure(), 4.0);
        assert_eq!(g.center(9), (0.375, 0.375));
        assert_eq!(g.interior_faces(0), 2);
        assert_eq!(g.interior_faces(9), 4);
        let mut faces = 0;
        g.for_each_face(1, |_, _| faces += 1);
        assert_eq!(faces, 56);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert_eq!(Grid::new(3, 1.0, 16), Err(GridError::Dims(3)));
        assert_eq!(Grid::new(1, 1.0, 4), Err(GridError::Resolution(4)));
        assert!(Grid::new(1, -1.0, 16).is_err());
        let g = Grid::new(1, 1.0, 8).unwrap();
        assert!(Field::new(g, vec![0.0; 7]).is_err());
    }

    #[test]
    fn laplacian_conserves_and_kills_constants() {
        let g = Grid::new(2, 1.0, 12).unwrap();
        let f = Field::from_fn(g, |x, y| (3.0 * x).sin() + y * y);
        let mut out = vec![0.0; g.len()];
        laplacian(&g, f.values(), &mut out);
        let total: f64 = out.iter().sum();
        assert!(total.abs() < 1e-9);
        laplacian(&g, Field::constant(g, 2.5).values(), &mut out);
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn neumann_cosine_is_discrete_eigenvector() {
        let g = Grid::new(1, 2.0, 32).unwrap();
        let k = std::f64::consts::PI / g.extent();
        let f = Field::from_fn(g, |x, _| (k * x).cos());
        let mut out = vec![0.0; g.len()];
        laplacian(&g, f.values(), &mut out);
        let h = g.spacing();
        let lambda = 4.0 / (h * h) * (0.5 * k * h).sin().powi(2);
        for (lap, v) in out.iter().zip(f.values()) {
            assert!((lap + lambda * v).abs() < 1e-10);
        }
    }
}
