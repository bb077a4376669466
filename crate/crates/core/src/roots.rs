//! Roots of `r ln r = c` and `r / (ln r − ln ln r) = t` with their closed-form envelopes.
//!
//! Both solvers bracket the root with the envelopes, check that the bracket
//! actually straddles a sign change, and refine with Newton steps that fall
//! back to bisection whenever they would leave the bracket.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_ITERATIONS: usize = 200;

/// Name of the linear lower envelope `1 + (e−1)c/e` for `c ≥ 0`.
///
/// It holds on `[0, e]` only. Above `e` the convexity argument that yields it
/// gives the reverse inequality, so every solve with `c > e` reports it violated.
pub const LINEAR_LOWER_ENVELOPE: &str = "r >= 1 + (e-1) c / e";

/// The inequality that does hold above `e`: `r ≤ 1 + (e−1)c/e` for `c ≥ e`.
pub const LINEAR_UPPER_ENVELOPE: &str = "r <= 1 + (e-1) c / e";

/// One closed-form inequality satisfied by a root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope<T> {
    pub name: &'static str,
    pub side: EnvelopeSide,
    pub value: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnvelopeSide {
    /// `value ≤ root`
    Lower,
    /// `root ≤ value`
    Upper,
    /// `root < value`
    StrictUpper,
}

impl<T: Real> Envelope<T> {
    pub fn holds(&self, root: T) -> bool {
        match self.side {
            EnvelopeSide::Lower => self.value <= root,
            EnvelopeSide::Upper => root <= self.value,
            EnvelopeSide::StrictUpper => root < self.value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootResult<T> {
    /// The right-hand side `c` or `t`.
    pub input: T,
    pub root: T,
    /// `g(root) − input`.
    pub residual: T,
    /// Lower end of the envelope bracket: the `c / ln c` band for `c ≥ e`,
    /// otherwise the tightest linear envelope.
    pub envelope_low: T,
    /// Upper end of the envelope bracket.
    pub envelope_high: T,
    pub envelopes: Vec<Envelope<T>>,
    pub iterations: usize,
}

impl<T: Real> RootResult<T> {
    pub fn envelopes_hold(&self) -> bool {
        self.envelopes.iter().all(|e| e.holds(self.root))
    }

    /// Envelopes the root fails.
    pub fn violated(&self) -> Vec<&Envelope<T>> {
        self.envelopes.iter().filter(|e| !e.holds(self.root)).collect()
    }
}

/// `g(r) = r ln r`.
pub fn r_ln_r<T: Real>(r: T) -> T {
    r * r.ln()
}

/// `g̃(r) = r / (ln r − ln ln r)` for `r > e`.
pub fn log_ratio<T: Real>(r: T) -> T {
    r / (r.ln() - r.ln().ln())
}

fn log_ratio_derivative<T: Real>(r: T) -> T {
    let l = r.ln();
    let d = l - l.ln();
    d.recip() - (T::one() - l.recip()) / (d * d)
}

/// Smallest admissible right-hand side of `r / (ln r − ln ln r) = t`, namely `e^e / (e − 1)`.
pub fn log_ratio_threshold<T: Real>() -> T {
    let e = T::E();
    e.powf(e) / (e - T::one())
}

/// Safeguarded Newton on an increasing function bracketed by `[lo, hi]`.
fn bracketed_newton<T: Real>(
    op: &'static str,
    mut lo: T,
    mut hi: T,
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    residual_tol: T,
) -> Result<(T, usize)> {
    let half = T::lit(0.5);
    let mut x = half * (lo + hi);
    for iter in 1..=MAX_ITERATIONS {
        let fx = f(x);
        if fx.abs() <= residual_tol || (hi - lo) <= T::lit(4.0) * T::eps() * x.abs() {
            return Ok((x, iter));
        }
        if fx < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        let slope = df(x);
        let step = fx / slope;
        let newton = x - step;
        // converged once the correction is below rounding level
        if slope > T::zero() && step.abs() <= T::eps() * x.abs() {
            return Ok((newton.max(lo).min(hi), iter));
        }
        x = if slope > T::zero() && newton > lo && newton < hi {
            newton
        } else {
            half * (lo + hi)
        };
    }
    Err(Error::Convergence {
        op,
        iterations: MAX_ITERATIONS,
        index: 0,
    })
}

/// Solves `r ln r = c` on the branch `r ≥ 1/e`.
pub fn solve_r_ln_r<T: Real>(c: T) -> Result<RootResult<T>> {
    let e = T::E();
    let one = T::one();
    let inv_e = e.recip();
    if c.is_nan() || c < -inv_e - T::lit(4.0) * T::eps() * inv_e {
        return Err(Error::domain("solve_r_ln_r", format!("need c ≥ −1/e, got {c}")));
    }
    let c = c.max(-inv_e);

    let mut envelopes = vec![
        Envelope {
            name: "branch r >= 1/e",
            side: EnvelopeSide::Lower,
            value: inv_e,
        },
        Envelope {
            name: "r <= 1 + c",
            side: EnvelopeSide::Upper,
            value: one + c,
        },
    ];
    if c <= T::zero() {
        envelopes.push(Envelope {
            name: "r >= 1 + (e-1) c",
            side: EnvelopeSide::Lower,
            value: one + (e - one) * c,
        });
    }
    if c >= T::zero() {
        envelopes.push(Envelope {
            name: LINEAR_LOWER_ENVELOPE,
            side: EnvelopeSide::Lower,
            value: one + (e - one) / e * c,
        });
    }
    let (envelope_low, envelope_high) = if c >= e {
        let lc = c.ln();
        (c / lc, c / (lc - lc.ln()))
    } else {
        tightest(&envelopes)
    };
    if c >= e {
        let lc = c.ln();
        envelopes.push(Envelope {
            name: "r >= c / ln c",
            side: EnvelopeSide::Lower,
            value: c / lc,
        });
        envelopes.push(Envelope {
            name: "r <= c / (ln c - ln ln c)",
            side: EnvelopeSide::Upper,
            value: c / (lc - lc.ln()),
        });
        envelopes.push(Envelope {
            name: LINEAR_UPPER_ENVELOPE,
            side: EnvelopeSide::Upper,
            value: one + (e - one) / e * c,
        });
    }

    if c == -inv_e {
        return Ok(RootResult {
            input: c,
            root: inv_e,
            residual: r_ln_r(inv_e) - c,
            envelope_low,
            envelope_high,
            envelopes,
            iterations: 0,
        });
    }

    let f = |r: T| r_ln_r(r) - c;
    let (mut lo, mut hi) = (envelope_low.max(inv_e), envelope_high);
    if !(f(lo) <= T::zero() && f(hi) >= T::zero()) {
        // envelope bracket does not straddle the root; use the always-valid one
        lo = inv_e;
        hi = (one + c.abs()).max(e);
    }
    let tol = T::lit(4.0) * T::eps() * c.abs().max(one);
    let (root, iterations) = bracketed_newton("solve_r_ln_r", lo, hi, f, |r| r.ln() + one, tol)?;
    Ok(RootResult {
        input: c,
        root,
        residual: f(root),
        envelope_low,
        envelope_high,
        envelopes,
        iterations,
    })
}

/// Solves `r / (ln r − ln ln r) = t` on `r > e` for `t > e^e/(e − 1)`.
pub fn solve_log_ratio<T: Real>(t: T) -> Result<RootResult<T>> {
    let threshold = log_ratio_threshold::<T>();
    if t.is_nan() || t <= threshold {
        return Err(Error::domain(
            "solve_log_ratio",
            format!("need t > e^e/(e-1) = {threshold}, got {t}"),
        ));
    }
    let lt = t.ln();
    let envelopes = vec![
        Envelope {
            name: "r >= t (ln t - ln ln t)",
            side: EnvelopeSide::Lower,
            value: t * (lt - lt.ln()),
        },
        Envelope {
            name: "r < t ln t",
            side: EnvelopeSide::StrictUpper,
            value: t * lt,
        },
    ];
    let (envelope_low, envelope_high) = tightest(&envelopes);
    let e = T::E();
    let f = |r: T| log_ratio(r) - t;
    let (mut lo, mut hi) = (envelope_low.max(e), envelope_high);
    if !(f(lo) <= T::zero() && f(hi) >= T::zero()) {
        lo = e * (T::one() + T::eps());
        hi = t * t;
    }
    let tol = T::lit(4.0) * T::eps() * t;
    let (root, iterations) =
        bracketed_newton("solve_log_ratio", lo, hi, f, log_ratio_derivative, tol)?;
    Ok(RootResult {
        input: t,
        root,
        residual: f(root),
        envelope_low,
        envelope_high,
        envelopes,
        iterations,
    })
}

fn tightest<T: Real>(envelopes: &[Envelope<T>]) -> (T, T) {
    let mut low = T::neg_infinity();
    let mut high = T::infinity();
    for env in envelopes {
        match env.side {
            EnvelopeSide::Lower => low = low.max(env.value),
            EnvelopeSide::Upper | EnvelopeSide::StrictUpper => high = high.min(env.value),
        }
    }
    (low, high)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::E;

    /// Plain bisection on a caller-supplied bracket, independent of the envelopes.
    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn r_ln_r_fixed_points() {
        assert_abs_diff_eq!(solve_r_ln_r(E).unwrap().root, E, epsilon = 1e-12);
        assert_abs_diff_eq!(solve_r_ln_r(0.0).unwrap().root, 1.0, epsilon = 1e-12);
        let tip = solve_r_ln_r(-1.0 / E).unwrap();
        assert_eq!(tip.root, 1.0 / E);
        assert_eq!(tip.iterations, 0);
    }

    #[test]
    fn r_ln_r_two_e_against_bisection() {
        let c = 2.0 * E;
        let oracle = bisect(|r| r * r.ln() - c, 1.0 / E, 1.0 + c);
        let res = solve_r_ln_r(c).unwrap();
        assert_abs_diff_eq!(res.root, oracle, epsilon = 1e-11);
        assert_abs_diff_eq!(res.root, 3.954, epsilon = 5e-4);
        assert_abs_diff_eq!(res.envelope_low, 3.211, epsilon = 1e-3);
        assert_abs_diff_eq!(res.envelope_high, 4.661, epsilon = 1e-3);
        assert!(res.envelope_low <= res.root && res.root <= res.envelope_high);
        let failed: Vec<_> = res.violated().iter().map(|e| e.name).collect();
        assert_eq!(failed, vec![LINEAR_LOWER_ENVELOPE]);
    }

    #[test]
    fn log_ratio_examples() {
        let res = solve_log_ratio(10.0).unwrap();
        let oracle = bisect(|r| log_ratio(r) - 10.0, 14.0, 24.0);
        assert_abs_diff_eq!(res.root, oracle, epsilon = 1e-10);
        assert_abs_diff_eq!(res.root, 18.4527, epsilon = 1e-4);
        assert_abs_diff_eq!(res.envelope_low, 14.686, epsilon = 1e-3);
        assert_abs_diff_eq!(res.envelope_high, 23.026, epsilon = 1e-3);
        assert!(res.envelopes_hold());

        let res = solve_log_ratio(100.0f64).unwrap();
        assert_abs_diff_eq!(res.envelope_low, 307.79, epsilon = 1e-2);
        assert_abs_diff_eq!(res.envelope_high, 460.52, epsilon = 1e-2);
        assert!(res.envelopes_hold());
        assert!(res.residual.abs() <= 1e-9 * 100.0);
    }

    #[test]
    fn log_ratio_near_threshold() {
        let t0 = log_ratio_threshold::<f64>();
        assert_abs_diff_eq!(t0, 8.819_43, epsilon = 1e-5);
        let res = solve_log_ratio(t0 * (1.0 + 1e-12)).unwrap();
        assert!(res.root > E);
        // g̃ maps (e, ∞) onto (e, ∞), so the root at the threshold is interior
        let oracle = bisect(|r| log_ratio(r) - t0, E * 1.000_001, 100.0);
        assert_abs_diff_eq!(res.root, oracle, epsilon = 1e-8);
        assert!(res.envelopes_hold());
    }

    #[test]
    fn domain_errors() {
        assert!(solve_r_ln_r(-0.5_f64).is_err());
        assert!(solve_log_ratio(8.8_f64).is_err());
        assert!(solve_log_ratio(log_ratio_threshold::<f64>()).is_err());
    }

    #[test]
    fn log_spaced_round_trip() {
        // 1000 points: an offset log grid covering [-1/e, 1e6]
        for i in 0..1000 {
            let s = i as f64 / 999.0;
            let c = -1.0 / E + (10f64.powf(-12.0 + 18.0 * s) - 1e-12).max(0.0);
            let res = solve_r_ln_r(c).unwrap();
            assert!(res.residual.abs() <= 1e-9 * c.abs().max(1.0), "c={c}: residual {}", res.residual);
            assert!(res.envelope_low <= res.root && res.root <= res.envelope_high, "c={c}: {res:?}");
            check_envelopes(&res);
        }
    }

    /// Every envelope holds, except the linear lower one above `c = e`, which must fail.
    fn check_envelopes(res: &RootResult<f64>) {
        for env in &res.envelopes {
            let expect = !(env.name == LINEAR_LOWER_ENVELOPE && res.input > E);
            assert_eq!(env.holds(res.root), expect, "{} at c={}: root {}", env.name, res.input, res.root);
        }
    }

    #[test]
    fn linear_lower_envelope_reverses_above_e() {
        for c in [E * 1.0001, 3.0, 10.0, 1e3, 1e6] {
            let res = solve_r_ln_r(c).unwrap();
            let lin = 1.0 + (E - 1.0) / E * c;
            assert!(res.root < lin, "c={c}");
        }
        for c in [0.0, 0.5, 1.0, 2.0, E] {
            let res = solve_r_ln_r(c).unwrap();
            assert!(res.root >= 1.0 + (E - 1.0) / E * c - 1e-12, "c={c}");
        }
    }

    #[test]
    fn single_precision_solves() {
        let r = solve_r_ln_r(2.0_f32).unwrap();
        assert!(r.residual.abs() < 1e-5);
        let r = solve_log_ratio(20.0_f32).unwrap();
        assert!(r.residual.abs() < 1e-4);
    }

    proptest! {
        #[test]
        fn r_ln_r_monotone(a in -0.367_879_f64..1e6, b in -0.367_879_f64..1e6) {
            prop_assume!(a < b);
            prop_assert!(solve_r_ln_r(a).unwrap().root < solve_r_ln_r(b).unwrap().root);
        }

        #[test]
        fn log_ratio_monotone(a in 8.83_f64..1e6, b in 8.83_f64..1e6) {
            prop_assume!(a < b);
            prop_assert!(solve_log_ratio(a).unwrap().root < solve_log_ratio(b).unwrap().root);
        }

        #[test]
        fn r_ln_r_envelopes(log_c in -3.0_f64..6.0, neg in any::<bool>()) {
            let c = if neg { -(1.0 / E) * (1.0 - 10f64.powf(log_c - 6.0)) } else { 10f64.powf(log_c) };
            let res = solve_r_ln_r(c).unwrap();
            check_envelopes(&res);
            prop_assert!(res.residual.abs() <= 1e-10 * c.abs().max(1.0));
        }

        #[test]
        fn log_ratio_envelopes(log_t in 0.946_f64..6.0) {
            let t = 10f64.powf(log_t);
            prop_assume!(t > log_ratio_threshold::<f64>());
            let res = solve_log_ratio(t).unwrap();
            prop_assert!(res.envelopes_hold());
            prop_assert!(res.residual.abs() <= 1e-9 * t);
        }
    }
}
