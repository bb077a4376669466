//! Galerkin entries of the logarithmic form for cell indicators.
//!
//! On a uniform grid the entry for a pair of cells depends only on their
//! lattice offset, and scales out of `h` exactly:
//!
//! * off-diagonal, `−c_N ∫∫_{C_i×C_j} |x−y|^{−N} = −c_N h^{2N−N} K_N(offset)`,
//!   with `K_N(m) = ∫_{[−1,1]^N} p(z) |m − z|^{−N} dz` and `p` the
//!   autocorrelation of the unit cell;
//! * diagonal, `c_N ∫_C ∫_{B_1(x)∖C} |x−y|^{−N} dy dx + ρ_N h^N`, which has a
//!   closed form in both supported dimensions.

use std::f64::consts::{LN_2, PI};

use crate::constants::DimensionConstants;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;
use crate::specfun::CATALAN;

use super::grid::Grid;

/// `∫_{[0,1]²} ∫_0^{2π} ln r_b(u, θ) dθ du`, where `r_b` is the distance from
/// `u` to the boundary of the unit square along direction `θ`.
pub const SQUARE_LOG_EXIT_INTEGRAL: f64 = 2.0 * PI * LN_2 - 4.0 * CATALAN - 2.0 * PI - 2.0 * LN_2;

const MAX_DEPTH: usize = 6;

/// `K_1(m)` for an integer offset `m ≥ 1`.
pub fn offset_integral_1d<T: Real>(m: u64) -> T {
    assert!(m >= 1, "offset must be nonzero");
    if m == 1 {
        return T::lit(2.0) * T::LN_2();
    }
    // (m+1) ln(m+1) − 2m ln m + (m−1) ln(m−1), rearranged to avoid cancellation
    let mf = T::lit(m as f64);
    let inv = mf.recip();
    mf * (-(inv * inv)).ln_1p() + T::lit(2.0) * inv.atanh()
}

/// Diagonal entry of the form for a cell of side `h`.
pub fn diagonal_entry<T: Real>(constants: &DimensionConstants<T>, h: T) -> Result<T> {
    match constants.dim {
        1 => Ok(constants.c_n * T::lit(2.0) * h * (T::one() - h.ln()) + constants.rho_n * h),
        2 => {
            let h2 = h * h;
            let near = T::lit(2.0) * T::PI() * (-h.ln()) - T::lit(SQUARE_LOG_EXIT_INTEGRAL);
            Ok(constants.c_n * h2 * near + constants.rho_n * h2)
        }
        dim => Err(Error::Dimension {
            op: "diagonal_entry",
            dim,
            detail: "assembly supports N ∈ {1, 2}".into(),
        }),
    }
}

/// Evaluator for `K_2(a, b)`.
pub struct OffsetIntegrator2d<T> {
    polar: GaussLegendre<T>,
    coarse: GaussLegendre<T>,
    fine: GaussLegendre<T>,
    tol: T,
}

impl<T: Real> Default for OffsetIntegrator2d<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> OffsetIntegrator2d<T> {
    pub fn new() -> Self {
        Self {
            polar: GaussLegendre::new(24),
            coarse: GaussLegendre::new(6),
            fine: GaussLegendre::new(12),
            tol: T::lit(1e-8).max(T::lit(100.0) * T::eps()),
        }
    }

    /// `K_2(a, b)` for a nonzero integer offset.
    pub fn integral(&self, a: i64, b: i64) -> Result<T> {
        assert!(a != 0 || b != 0, "offset must be nonzero");
        let mut total = T::zero();
        for s1 in [-1i64, 1] {
            for s2 in [-1i64, 1] {
                total += self.quadrant(a, b, s1, s2)?;
            }
        }
        Ok(total)
    }

    /// Contribution of `z = (s1 t1, s2 t2)`, `t ∈ [0,1]²`.
    fn quadrant(&self, a: i64, b: i64, s1: i64, s2: i64) -> Result<T> {
        // the shifted point a + s t vanishes at a lattice corner t* iff −a s ∈ {0, 1}
        let c1 = -a * s1;
        let c2 = -b * s2;
        if (0..=1).contains(&c1) && (0..=1).contains(&c2) {
            return Ok(self.corner_polar(c1 == 1, c2 == 1));
        }
        let (af, bf) = (T::lit(a as f64), T::lit(b as f64));
        let (sf1, sf2) = (T::lit(s1 as f64), T::lit(s2 as f64));
        let f = move |t1: T, t2: T| {
            let w1 = af + sf1 * t1;
            let w2 = bf + sf2 * t2;
            (T::one() - t1) * (T::one() - t2) / (w1 * w1 + w2 * w2)
        };
        self.adaptive(&f, T::zero(), T::one(), T::zero(), T::one(), 0)
    }

    fn adaptive(&self, f: &impl Fn(T, T) -> T, x0: T, x1: T, y0: T, y1: T, depth: usize) -> Result<T> {
        let lo = self.coarse.integrate_rect(x0, x1, y0, y1, f);
        let hi = self.fine.integrate_rect(x0, x1, y0, y1, f);
        let err = (hi - lo).abs();
        if err <= self.tol * hi.abs() || err <= T::min_positive_value() {
            return Ok(hi);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Accuracy {
                what: "off-diagonal cell-pair integral".into(),
                estimate: (err / hi.abs()).to_f64_lossy(),
            });
        }
        let xm = T::lit(0.5) * (x0 + x1);
        let ym = T::lit(0.5) * (y0 + y1);
        let mut sum = T::zero();
        for (a, b) in [(x0, xm), (xm, x1)] {
            for (c, d) in [(y0, ym), (ym, y1)] {
                sum += self.adaptive(f, a, b, c, d, depth + 1)?;
            }
        }
        Ok(sum)
    }

    /// Quadrant whose singular point is a corner of the unit square.
    ///
    /// In coordinates `u = |t − t*|` the weight factors are `u` (when the
    /// corner coordinate is 1) or `1 − u` (when it is 0), and polar
    /// coordinates about the corner turn the radial integral into a
    /// polynomial one.
    fn corner_polar(&self, first_at_one: bool, second_at_one: bool) -> T {
        // q_k(u) = α_k + β_k u
        let coeff = |at_one: bool| if at_one { (T::zero(), T::one()) } else { (T::one(), -T::one()) };
        let (a1, b1) = coeff(first_at_one);
        let (a2, b2) = coeff(second_at_one);
        debug_assert!(a1 * a2 == T::zero(), "singular point with unit weight");
        let radial = |theta: T| {
            let (s, c) = theta.sin_cos();
            let rmax = if c >= s { c.recip() } else { s.recip() };
            (a1 * b2 * s + a2 * b1 * c) * rmax + b1 * b2 * c * s * rmax * rmax * T::lit(0.5)
        };
        let quarter = T::FRAC_PI_4();
        self.polar.integrate(T::zero(), quarter, radial)
            + self.polar.integrate(quarter, T::FRAC_PI_2(), radial)
    }
}

/// Entries of the form indexed by absolute lattice offset.
#[derive(Debug, Clone)]
pub struct KernelTable<T> {
    dim: usize,
    extent: [usize; 2],
    values: Vec<T>,
}

impl<T: Real> KernelTable<T> {
    pub fn new(grid: &Grid<T>, constants: &DimensionConstants<T>) -> Result<Self> {
        let dim = grid.dim();
        if constants.dim != dim {
            return Err(Error::Dimension {
                op: "KernelTable::new",
                dim: constants.dim,
                detail: format!("grid has dimension {dim}"),
            });
        }
        let h = grid.h();
        let extent = grid.offset_extent();
        let (ex, ey) = (extent[0], extent[1]);
        let mut values = vec![T::zero(); (ex + 1) * (ey + 1)];
        values[0] = diagonal_entry(constants, h)?;
        match dim {
            1 => {
                let scale = -constants.c_n * h;
                for (m, v) in values.iter_mut().enumerate().skip(1) {
                    *v = scale * offset_integral_1d::<T>(m as u64);
                }
            }
            _ => {
                let scale = -constants.c_n * h * h;
                let integrator = OffsetIntegrator2d::<T>::new();
                let side = ex.max(ey) + 1;
                // K_2 is symmetric under swapping the offset components
                let mut canonical: Vec<Option<T>> = vec![None; side * side];
                for a in 0..=ex {
                    for b in 0..=ey {
                        if a == 0 && b == 0 {
                            continue;
                        }
                        let (p, q) = (a.max(b), a.min(b));
                        let slot = &mut canonical[p * side + q];
                        let k = match slot {
                            Some(k) => *k,
                            None => {
                                let k = integrator.integral(p as i64, q as i64)?;
                                *slot = Some(k);
                                k
                            }
                        };
                        values[a * (ey + 1) + b] = scale * k;
                    }
                }
            }
        }
        Ok(Self { dim, extent, values })
    }

    /// Entry for cells at lattice coordinates `i` and `j`.
    #[inline]
    pub fn entry(&self, i: &[i64; 2], j: &[i64; 2]) -> T {
        let a = (i[0] - j[0]).unsigned_abs() as usize;
        let b = if self.dim == 2 {
            (i[1] - j[1]).unsigned_abs() as usize
        } else {
            0
        };
        debug_assert!(a <= self.extent[0] && b <= self.extent[1]);
        self.values[a * (self.extent[1] + 1) + b]
    }

    pub fn diagonal(&self) -> T {
        self.values[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::dimension_constants;

    #[test]
    fn one_dimensional_examples() {
        let c = dimension_constants::<f64>(1).unwrap();
        let h = 0.25;
        assert!((-c.c_n * h * offset_integral_1d::<f64>(1) + 0.3465736).abs() < 1e-7);
        assert!((diagonal_entry(&c, h).unwrap() - 0.9045394).abs() < 1e-7);
    }

    #[test]
    fn stable_form_matches_second_difference() {
        let phi = |t: f64| if t == 0.0 { 0.0 } else { t * t.ln() };
        for m in 1..200u64 {
            let mf = m as f64;
            let direct = phi(mf + 1.0) - 2.0 * phi(mf) + phi(mf - 1.0);
            let stable = offset_integral_1d::<f64>(m);
            assert!((direct - stable).abs() <= 1e-12 * mf.max(1.0), "m={m}");
        }
        // far-field limit K_1(m) → 1/m
        let m = 1e6;
        assert!((offset_integral_1d::<f64>(m as u64) * m - 1.0).abs() < 1e-9);
    }

    #[test]
    fn square_exit_constant() {
        assert!((SQUARE_LOG_EXIT_INTEGRAL + 6.978169864401149).abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_far_field_limit() {
        let k = OffsetIntegrator2d::<f64>::new();
        // ∫ p = 1, so K_2 ≈ 1/|m|² with second-moment correction 1/(3|m|⁴)·(...)
        for (a, b) in [(30, 0), (20, 20), (0, 50)] {
            let d2 = (a * a + b * b) as f64;
            let v = k.integral(a, b).unwrap();
            assert!((v * d2 - 1.0).abs() < 5e-3, "({a},{b}) {v}");
        }
    }

    #[test]
    fn two_dimensional_symmetric() {
        let k = OffsetIntegrator2d::<f64>::new();
        for (a, b) in [(1, 0), (1, 1), (2, 1), (3, 0)] {
            let v = k.integral(a, b).unwrap();
            for (p, q) in [(b, a), (-a, b), (a, -b), (-b, -a)] {
                assert!((k.integral(p, q).unwrap() - v).abs() < 1e-13);
            }
        }
    }
}
