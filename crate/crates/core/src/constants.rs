//! Dimension-dependent constants of the logarithmic Laplacian.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{digamma, ln_gamma, EULER_GAMMA};

pub const MAX_DIMENSION: usize = 10;

/// All scalars that depend only on the space dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionConstants<T> {
    pub dim: usize,
    /// Surface measure `ω_{N-1}` of the unit sphere `S^{N-1}`.
    pub omega: T,
    /// Kernel normalisation `c_N = π^{-N/2} Γ(N/2)`.
    pub c_n: T,
    /// Zero-order coefficient `ρ_N = 2 ln 2 + ψ(N/2) − γ`.
    pub rho_n: T,
    /// Volume coefficient of the principal-eigenvalue lower bound.
    pub d_n: T,
    /// Coefficient inside the logarithms of the eigenvalue-sum upper bound.
    pub p_n: T,
    pub gamma_euler: T,
}

impl<T: Real> DimensionConstants<T> {
    /// Volume of the unit ball, `ω_{N-1}/N`.
    pub fn unit_ball_volume(&self) -> T {
        self.omega / T::from_count(self.dim)
    }

    pub fn n(&self) -> T {
        T::from_count(self.dim)
    }
}

/// Computes the constants for `1 ≤ dim ≤ 10`.
pub fn dimension_constants<T: Real>(dim: usize) -> Result<DimensionConstants<T>> {
    if !(1..=MAX_DIMENSION).contains(&dim) {
        return Err(Error::Dimension {
            op: "dimension_constants",
            dim,
            detail: format!("supported range is 1..={MAX_DIMENSION}"),
        });
    }
    let n = T::from_count(dim);
    let half_n = n / T::lit(2.0);
    let pi = T::PI();
    let two = T::lit(2.0);
    let gamma = T::lit(EULER_GAMMA);

    let ln_gamma_half_n = ln_gamma(half_n)?;
    let ln_pi_half_n = half_n * pi.ln();
    // ω = 2 π^{N/2} / Γ(N/2),  c_N = π^{-N/2} Γ(N/2)
    let omega = two * (ln_pi_half_n - ln_gamma_half_n).exp();
    let c_n = (ln_gamma_half_n - ln_pi_half_n).exp();
    let rho_n = two * two.ln() + digamma(half_n)? - gamma;
    let two_pi_pow_n = (two * pi).powi(dim as i32);
    let d_n = two * omega / (n * n * two_pi_pow_n);
    let p_n = two * two_pi_pow_n * n / omega;

    Ok(DimensionConstants {
        dim,
        omega,
        c_n,
        rho_n,
        d_n,
        p_n,
        gamma_euler: gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    #[test]
    fn one_dimension() {
        let c = dimension_constants::<f64>(1).unwrap();
        assert_abs_diff_eq!(c.omega, 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c.c_n, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c.rho_n, -2.0 * EULER_GAMMA, epsilon = 1e-13);
        assert_abs_diff_eq!(c.rho_n, -1.154_431_329_8, epsilon = 1e-10);
        assert_abs_diff_eq!(c.d_n, 2.0 / PI, epsilon = 1e-13);
        assert_abs_diff_eq!(c.p_n, 2.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn two_dimensions() {
        let c = dimension_constants::<f64>(2).unwrap();
        assert_abs_diff_eq!(c.omega, 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(c.c_n, 1.0 / PI, epsilon = 1e-13);
        assert_abs_diff_eq!(c.rho_n, 2.0 * 2.0_f64.ln() - 2.0 * EULER_GAMMA, epsilon = 1e-13);
        assert_abs_diff_eq!(c.rho_n, 0.231_863_031_3, epsilon = 1e-10);
        assert_abs_diff_eq!(c.d_n, 1.0 / (4.0 * PI), epsilon = 1e-13);
        assert_abs_diff_eq!(c.p_n, 8.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn identities_for_all_supported_dimensions() {
        let mut prev_rho = f64::NEG_INFINITY;
        for dim in 1..=MAX_DIMENSION {
            let c = dimension_constants::<f64>(dim).unwrap();
            let n = dim as f64;
            assert!((c.c_n * c.omega - 2.0).abs() <= 1e-12, "N={dim}");
            // ω from the Gamma function directly, Γ(N/2) by recurrence from Γ(1) or Γ(1/2)
            let mut gamma_half_n = if dim % 2 == 0 { 1.0 } else { PI.sqrt() };
            let mut x = if dim % 2 == 0 { 1.0 } else { 0.5 };
            while x < n / 2.0 - 1e-9 {
                gamma_half_n *= x;
                x += 1.0;
            }
            assert_relative_eq!(c.omega, 2.0 * PI.powf(n / 2.0) / gamma_half_n, max_relative = 1e-12);
            assert_relative_eq!(c.d_n, 2.0 * c.omega / (n * n * (2.0 * PI).powi(dim as i32)), max_relative = 1e-12);
            assert_relative_eq!(c.p_n, 2.0 * (2.0 * PI).powi(dim as i32) * n / c.omega, max_relative = 1e-12);
            assert!(c.d_n > 0.0 && c.p_n > 0.0);
            assert!(c.rho_n > prev_rho, "rho_N not increasing at N={dim}");
            prev_rho = c.rho_n;
        }
    }

    #[test]
    fn out_of_range_dimensions() {
        assert!(matches!(
            dimension_constants::<f64>(0),
            Err(Error::Dimension { dim: 0, .. })
        ));
        assert!(dimension_constants::<f64>(11).is_err());
    }
}
