//! Piecewise-constant Galerkin discretization of the logarithmic form.

mod grid;
mod kernel;

use std::io::{self, Write};

pub use grid::{Grid, MAX_CELL_SIDE};
pub use kernel::{diagonal_entry, offset_integral_1d, KernelTable, OffsetIntegrator2d, SQUARE_LOG_EXIT_INTEGRAL};

use crate::constants::DimensionConstants;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::cosint;

/// A symmetric quadratic form on the cell-indicator basis of a grid.
pub trait QuadraticForm<T: Real> {
    fn grid(&self) -> &Grid<T>;

    /// `out = A v`.
    fn apply(&self, v: &[T], out: &mut [T]);

    fn size(&self) -> usize {
        self.grid().len()
    }

    /// Mass of one basis function, `h^N`.
    fn mass_scale(&self) -> T {
        self.grid().cell_volume()
    }

    /// `vᵀ A v`.
    fn energy(&self, v: &[T]) -> T {
        let mut out = vec![T::zero(); v.len()];
        self.apply(v, &mut out);
        v.iter().zip(&out).fold(T::zero(), |acc, (a, b)| acc + *a * *b)
    }
}

/// Dense assembled Galerkin matrix.
#[derive(Debug, Clone)]
pub struct QuadFormMatrix<T> {
    grid: Grid<T>,
    n: usize,
    entries: Vec<T>,
}

impl<T: Real> QuadFormMatrix<T> {
    pub fn assemble(grid: &Grid<T>, constants: &DimensionConstants<T>) -> Result<Self> {
        let table = KernelTable::new(grid, constants)?;
        let n = grid.len();
        let idx = grid.indices();
        let mut entries = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = table.entry(&idx[i], &idx[j]);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Ok(Self {
            grid: grid.clone(),
            n,
            entries,
        })
    }

    /// Wraps an explicit symmetric matrix; `mass_scale` still comes from the grid.
    pub fn from_entries(grid: &Grid<T>, entries: Vec<T>) -> Result<Self> {
        let n = grid.len();
        if entries.len() != n * n {
            return Err(Error::precondition(
                "QuadFormMatrix::from_entries",
                format!("expected {} entries, got {}", n * n, entries.len()),
            ));
        }
        Ok(Self {
            grid: grid.clone(),
            n,
            entries,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// Writes the matrix as CSV with 17 significant digits.
    pub fn write_csv(&self, mut w: impl Write) -> io::Result<()> {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{:.16e}", self.get(i, j))).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

impl<T: Real> QuadraticForm<T> for QuadFormMatrix<T> {
    fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    fn apply(&self, v: &[T], out: &mut [T]) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.entries[i * self.n..(i + 1) * self.n];
            *o = row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + *a * *b);
        }
    }
}

/// Matrix-free form for grids too large to assemble densely.
#[derive(Debug, Clone)]
pub struct FormOperator<T> {
    grid: Grid<T>,
    table: KernelTable<T>,
}

impl<T: Real> FormOperator<T> {
    pub fn new(grid: &Grid<T>, constants: &DimensionConstants<T>) -> Result<Self> {
        Ok(Self {
            grid: grid.clone(),
            table: KernelTable::new(grid, constants)?,
        })
    }

    pub fn table(&self) -> &KernelTable<T> {
        &self.table
    }
}

impl<T: Real> QuadraticForm<T> for FormOperator<T> {
    fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    fn apply(&self, v: &[T], out: &mut [T]) {
        let idx = self.grid.indices();
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (j, vj) in v.iter().enumerate() {
                acc += self.table.entry(&idx[i], &idx[j]) * *vj;
            }
            *o = acc;
        }
    }
}

/// `vᵀ A v / (h^N vᵀ v)`.
pub fn rayleigh_quotient<T: Real>(form: &impl QuadraticForm<T>, v: &[T]) -> Result<T> {
    if v.len() != form.size() {
        return Err(Error::precondition(
            "rayleigh_quotient",
            format!("vector length {} does not match {} cells", v.len(), form.size()),
        ));
    }
    let norm2 = v.iter().fold(T::zero(), |acc, x| acc + *x * *x);
    if norm2 == T::zero() {
        return Err(Error::precondition("rayleigh_quotient", "coefficient vector is zero"));
    }
    Ok(form.energy(v) / (form.mass_scale() * norm2))
}

/// The operator applied to `x ↦ e^{i t x}` in one dimension, divided by the plane wave.
///
/// The near field `|y| < 1` contributes `2c_1(γ + ln t − Ci(t))`, the far field
/// `2c_1 Ci(t)`; the sum plus `ρ_1` equals the symbol `2 ln t`.
pub fn plane_wave_symbol_1d<T: Real>(t: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::domain("plane_wave_symbol_1d", format!("need t > 0, got {t}")));
    }
    let c = crate::constants::dimension_constants::<T>(1)?;
    let ci = cosint(t)?;
    let two = T::lit(2.0);
    let near = c.c_n * two * (c.gamma_euler + t.ln() - ci);
    let far = c.c_n * two * ci;
    Ok(near + far + c.rho_n)
}
