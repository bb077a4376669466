use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::scalar::Real;

/// Largest admissible cell side. Any two points of one cell are then closer
/// than 1, so the far-field part of the form never sees a diagonal pair.
pub const MAX_CELL_SIDE: f64 = 0.5;

/// Uniform axis-aligned cells of side `h` lying entirely inside a domain.
///
/// Cells are indexed by integer lattice coordinates relative to the lower
/// corner of the domain's bounding box and stored in lexicographic order
/// (first coordinate slowest).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid<T> {
    domain: Domain<T>,
    h: T,
    requested_h: T,
    origin: [T; 2],
    indices: Vec<[i64; 2]>,
    centers: Vec<[T; 2]>,
}

impl<T: Real> Grid<T> {
    /// Builds the inner grid. When `h` does not divide the longest side of the
    /// bounding box it is shrunk to the nearest divisor.
    pub fn build(domain: &Domain<T>, h: T) -> Result<Self> {
        if !(h > T::zero() && h <= T::lit(MAX_CELL_SIDE)) {
            return Err(Error::domain(
                "Grid::build",
                format!("cell side must lie in (0, {MAX_CELL_SIDE}], got {h}"),
            ));
        }
        let dim = domain.dim();
        let (lo, hi) = domain.bounding_box();
        let longest = (0..dim).map(|i| hi[i] - lo[i]).fold(T::zero(), T::max);
        let ratio = longest / h;
        let tol = T::lit(1e-12) * T::one().max(longest);
        let n = ratio.round();
        let h_eff = if (n * h - longest).abs() <= tol {
            h
        } else {
            longest / ratio.ceil()
        };
        let mut counts = [1i64; 2];
        for i in 0..dim {
            counts[i] = ((hi[i] - lo[i]) / h_eff + T::lit(1e-9)).floor().to_i64().unwrap_or(0);
        }
        let mut indices = Vec::new();
        let mut centers = Vec::new();
        let half = T::lit(0.5);
        for ix in 0..counts[0] {
            for iy in 0..counts[1] {
                let idx = [ix, iy];
                let mut corner = [T::zero(); 2];
                let mut center = [T::zero(); 2];
                for k in 0..dim {
                    corner[k] = lo[k] + T::lit(idx[k] as f64) * h_eff;
                    center[k] = corner[k] + half * h_eff;
                }
                if domain.contains_cell(&corner[..dim], h_eff) {
                    indices.push(idx);
                    centers.push(center);
                }
            }
        }
        if indices.is_empty() {
            return Err(Error::EmptyGrid {
                h: h_eff.to_f64_lossy(),
            });
        }
        Ok(Self {
            domain: domain.clone(),
            h: h_eff,
            requested_h: h,
            origin: lo,
            indices,
            centers,
        })
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Cell side actually used.
    pub fn h(&self) -> T {
        self.h
    }

    pub fn requested_h(&self) -> T {
        self.requested_h
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Volume of one cell, `h^N`. This is the mass-matrix scale of the indicator basis.
    pub fn cell_volume(&self) -> T {
        self.h.powi(self.dim() as i32)
    }

    pub fn indices(&self) -> &[[i64; 2]] {
        &self.indices
    }

    pub fn centers(&self) -> &[[T; 2]] {
        &self.centers
    }

    pub fn center(&self, i: usize) -> &[T] {
        &self.centers[i][..self.dim()]
    }

    /// Lower corner of cell `i`.
    pub fn lower_corner(&self, i: usize) -> [T; 2] {
        let mut c = [T::zero(); 2];
        for k in 0..self.dim() {
            c[k] = self.origin[k] + T::lit(self.indices[i][k] as f64) * self.h;
        }
        c
    }

    /// Largest lattice offset between two cells along each axis.
    pub fn offset_extent(&self) -> [usize; 2] {
        let mut ext = [0usize; 2];
        for k in 0..2 {
            let min = self.indices.iter().map(|c| c[k]).min().unwrap_or(0);
            let max = self.indices.iter().map(|c| c[k]).max().unwrap_or(0);
            ext[k] = (max - min) as usize;
        }
        ext
    }

    /// Evaluates `f` at every cell centre.
    pub fn sample(&self, mut f: impl FnMut(&[T]) -> T) -> Vec<T> {
        (0..self.len()).map(|i| f(self.center(i))).collect()
    }
}
