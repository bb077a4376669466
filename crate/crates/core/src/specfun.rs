//! Gamma, digamma and cosine integral on the positive real axis.
//!
//! `ln_gamma` and `digamma` shift the argument upward with the recurrence
//! relations until the Stirling/asymptotic series is accurate to machine
//! precision. `cosint` uses its power series for small arguments and the
//! continued fraction of `E1(i t)` otherwise.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Euler–Mascheroni constant, 20 significant digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Catalan's constant, 20 significant digits.
pub const CATALAN: f64 = 0.915_965_594_177_219_015_05;

/// A function value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue<T> {
    pub value: T,
    pub abs_error_estimate: T,
}

/// Arguments below this are shifted upward before the asymptotic series is used.
const SHIFT_THRESHOLD: f64 = 15.0;

/// `B_{2k} / (2k (2k-1))` for k = 1..7 (Stirling series of ln Γ).
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

/// `B_{2k} / (2k)` for k = 1..7 (asymptotic series of ψ).
const DIGAMMA_ASYMPTOTIC: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

fn check_positive<T: Real>(op: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("argument must be finite and > 0, got {x}")))
    }
}

fn ln_gamma_impl<T: Real>(x: T) -> SpecialValue<T> {
    let threshold = T::lit(SHIFT_THRESHOLD);
    let mut z = x;
    let mut prod = T::one();
    let mut shift_log = T::zero();
    while z < threshold {
        prod *= z;
        // keep the running product well inside the exponent range
        if prod > T::lit(1e100) {
            shift_log += prod.ln();
            prod = T::one();
        }
        z += T::one();
    }
    shift_log += prod.ln();

    let inv = z.recip();
    let inv2 = inv * inv;
    let mut series = T::zero();
    let mut pow = inv;
    for c in STIRLING {
        series += T::lit(c) * pow;
        pow *= inv2;
    }
    let half_ln_two_pi = T::lit(0.918_938_533_204_672_741_78);
    let main = (z - T::lit(0.5)) * z.ln() - z + half_ln_two_pi;
    let value = main + series - shift_log;
    let scale = main.abs() + shift_log.abs() + T::one();
    SpecialValue {
        value,
        abs_error_estimate: T::lit(8.0) * T::eps() * scale,
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    ln_gamma_value(x).map(|v| v.value)
}

pub fn ln_gamma_value<T: Real>(x: T) -> Result<SpecialValue<T>> {
    check_positive("ln_gamma", x)?;
    Ok(ln_gamma_impl(x))
}

/// `Γ(x)` for `x > 0`, via `exp(ln Γ)`.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    ln_gamma(x).map(|v| v.exp())
}

fn digamma_impl<T: Real>(x: T) -> SpecialValue<T> {
    let threshold = T::lit(SHIFT_THRESHOLD);
    let mut z = x;
    let mut shift = T::zero();
    while z < threshold {
        shift += z.recip();
        z += T::one();
    }
    let inv = z.recip();
    let inv2 = inv * inv;
    let mut series = T::zero();
    let mut pow = inv2;
    for c in DIGAMMA_ASYMPTOTIC {
        series += T::lit(c) * pow;
        pow *= inv2;
    }
    let value = z.ln() - T::lit(0.5) * inv - series - shift;
    let scale = z.ln().abs() + shift.abs() + T::one();
    SpecialValue {
        value,
        abs_error_estimate: T::lit(8.0) * T::eps() * scale,
    }
}

/// Digamma function `ψ(x) = Γ'(x)/Γ(x)` for `x > 0`.
pub fn digamma<T: Real>(x: T) -> Result<T> {
    digamma_value(x).map(|v| v.value)
}

pub fn digamma_value<T: Real>(x: T) -> Result<SpecialValue<T>> {
    check_positive("digamma", x)?;
    Ok(digamma_impl(x))
}

/// Below this argument the power series is used; above it the continued fraction.
const CI_SERIES_LIMIT: f64 = 2.0;

fn cosint_series<T: Real>(t: T) -> SpecialValue<T> {
    // Ci(t) = γ + ln t + Σ_{k≥1} (-1)^k t^{2k} / (2k (2k)!)
    let t2 = t * t;
    let mut term = T::one(); // (-1)^k t^{2k} / (2k)!
    let mut sum = T::zero();
    let mut largest = T::zero();
    for k in 1..200usize {
        let two_k = T::from_count(2 * k);
        term = -term * t2 / (two_k * (two_k - T::one()));
        let contrib = term / two_k;
        sum += contrib;
        largest = largest.max(contrib.abs());
        if contrib.abs() <= T::eps() * sum.abs().max(T::eps()) {
            break;
        }
    }
    let value = T::lit(EULER_GAMMA) + t.ln() + sum;
    SpecialValue {
        value,
        abs_error_estimate: T::lit(4.0) * T::eps() * (largest + t.ln().abs() + T::one()),
    }
}

fn cosint_continued_fraction<T: Real>(t: T) -> SpecialValue<T> {
    // Modified Lentz evaluation of E1(i t); Ci(t) = -Re E1(i t).
    let tiny = T::min_positive_value() / T::eps();
    let one = Complex::new(T::one(), T::zero());
    let mut b = Complex::new(T::one(), t);
    let mut c = Complex::new(tiny.recip(), T::zero());
    let mut d = one / b;
    let mut h = d;
    let two = T::lit(2.0);
    for i in 2..10_000usize {
        let m = T::from_count(i - 1);
        let a = -(m * m);
        b += Complex::new(two, T::zero());
        d = one / (d * a + b);
        c = b + one * a / c;
        let del = c * d;
        h *= del;
        if (del - one).norm() < T::eps() {
            break;
        }
    }
    let phase = Complex::new(t.cos(), -t.sin());
    let e1 = phase * h;
    SpecialValue {
        value: -e1.re,
        abs_error_estimate: T::lit(16.0) * T::eps() * (e1.norm() + T::eps()),
    }
}

/// Cosine integral `Ci(t) = γ + ln t + ∫₀ᵗ (cos u − 1)/u du` for `t > 0`.
pub fn cosint<T: Real>(t: T) -> Result<T> {
    cosint_value(t).map(|v| v.value)
}

pub fn cosint_value<T: Real>(t: T) -> Result<SpecialValue<T>> {
    check_positive("cosint", t)?;
    Ok(if t <= T::lit(CI_SERIES_LIMIT) {
        cosint_series(t)
    } else {
        cosint_continued_fraction(t)
    })
}
