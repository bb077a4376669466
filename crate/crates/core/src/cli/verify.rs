//! Self-checks runnable from the command line.
//!
//! Each suite returns named checks with a pass flag and a one-line detail. The
//! checks compare the library against identities and closed forms; they do not
//! replace the independent oracles of the test suite.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{emit, CliError, CliResult};
use crate::bounds::{self, Lemma22Profile, Variant};
use crate::constants::{dimension_constants, MAX_DIMENSION};
use crate::discretize::{plane_wave_symbol_1d, rayleigh_quotient, FormOperator, Grid, QuadFormMatrix};
use crate::geometry::{minimal_c0, test_function, C0Regime, Domain, TestFunctionSpec};
use crate::roots::{log_ratio_threshold, solve_log_ratio, solve_r_ln_r, RootResult};
use crate::specfun::EULER_GAMMA;
use crate::spectrum::{eig_symmetric, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Constants,
    Roots,
    Symbol,
    Bounds,
    Sandwich,
    Weyl,
    All,
}

impl Suite {
    const PARTS: [Suite; 6] = [
        Suite::Constants,
        Suite::Roots,
        Suite::Symbol,
        Suite::Bounds,
        Suite::Sandwich,
        Suite::Weyl,
    ];
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,

    /// Seed for the randomized profiles.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn command(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let report = run_suite(args.suite, args.seed)?;
    let text = format!("{}\n", serde_json::to_string_pretty(&report).expect("json"));
    emit(args.out.as_deref(), &text, out)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Failed(format!("{} check(s) failed: {}", failed.len(), failed.join(", "))))
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> crate::Result<SuiteReport> {
    let parts: Vec<Suite> = match suite {
        Suite::All => Suite::PARTS.to_vec(),
        s => vec![s],
    };
    let mut checks = Vec::new();
    for s in parts {
        checks.extend(match s {
            Suite::Constants => constants_suite()?,
            Suite::Roots => roots_suite()?,
            Suite::Symbol => symbol_suite()?,
            Suite::Bounds => bounds_suite(seed)?,
            Suite::Sandwich => sandwich_suite()?,
            Suite::Weyl => weyl_suite()?,
            Suite::All => unreachable!(),
        });
    }
    Ok(SuiteReport {
        suite,
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Check {
    let err = (got - want).abs();
    Check::new(name, err <= tol, format!("got {got:.12e}, want {want:.12e}, |diff| {err:.3e} (tol {tol:.0e})"))
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

pub fn constants_suite() -> crate::Result<Vec<Check>> {
    let mut worst = 0.0f64;
    for d in 1..=MAX_DIMENSION {
        let c = dimension_constants::<f64>(d)?;
        worst = worst.max((c.c_n * c.omega - 2.0).abs());
    }
    let c1 = dimension_constants::<f64>(1)?;
    let c2 = dimension_constants::<f64>(2)?;
    Ok(vec![
        Check::new(
            "c_N * omega = 2 for N = 1..10",
            worst <= 1e-12,
            format!("max deviation {worst:.3e}"),
        ),
        within("rho_1 = -2 gamma", c1.rho_n, -2.0 * EULER_GAMMA, 1e-12),
        within("d_2 = 1/(4 pi)", c2.d_n, 1.0 / (4.0 * PI), 1e-12),
        within("c_2 = 1/pi", c2.c_n, 1.0 / PI, 1e-14),
    ])
}

/// Pass/fail tally of every envelope name over a batch of roots.
fn envelope_tally(results: &[RootResult<f64>]) -> Vec<Check> {
    let mut tally: BTreeMap<&str, (usize, usize, Option<f64>)> = BTreeMap::new();
    for r in results {
        for e in &r.envelopes {
            let entry = tally.entry(e.name).or_insert((0, 0, None));
            entry.0 += 1;
            if !e.holds(r.root) {
                entry.1 += 1;
                entry.2.get_or_insert(r.input);
            }
        }
    }
    tally
        .into_iter()
        .map(|(name, (n, bad, first))| {
            let detail = match first {
                None => format!("holds at all {n} applicable samples"),
                Some(x) => format!("fails at {bad} of {n} samples, first at input {x:.6e}"),
            };
            Check::new(format!("envelope {name}"), bad == 0, detail)
        })
        .collect()
}

fn residual_check(name: &str, results: &[RootResult<f64>], tol: f64) -> Check {
    let (worst, at) = results
        .iter()
        .map(|r| (r.residual.abs(), r.input))
        .fold((0.0, f64::NAN), |acc, x| if x.0 > acc.0 { x } else { acc });
    Check::new(name, worst <= tol, format!("max |residual| {worst:.3e} at input {at:.6e}"))
}

/// Right-hand sides `c ∈ [−1/e, 10⁶]`, log-spaced in the distance to `−1/e`.
pub fn r_ln_r_samples(n: usize) -> Vec<f64> {
    let lo = -1.0 / E;
    log_spaced(1e-12, 1e6 - lo, n).map(|d| lo + d).collect()
}

/// Right-hand sides `t ∈ (8.83, 10⁶]`, log-spaced.
pub fn log_ratio_samples(n: usize) -> Vec<f64> {
    log_spaced(8.83, 1e6, n + 1).skip(1).collect()
}

pub fn roots_suite() -> crate::Result<Vec<Check>> {
    let a = r_ln_r_samples(1000)
        .into_iter()
        .map(solve_r_ln_r)
        .collect::<crate::Result<Vec<_>>>()?;
    let b = log_ratio_samples(1000)
        .into_iter()
        .map(solve_log_ratio)
        .collect::<crate::Result<Vec<_>>>()?;
    let mut checks = vec![residual_check("r ln r = c residual", &a, 1e-9)];
    checks.extend(envelope_tally(&a));
    checks.push(residual_check("r / (ln r - ln ln r) = t residual", &b, 1e-9));
    checks.extend(envelope_tally(&b));
    let t0: f64 = log_ratio_threshold();
    checks.push(within("threshold e^e / (e - 1)", t0, E.powf(E) / (E - 1.0), 1e-12));
    Ok(checks)
}

pub fn symbol_suite() -> crate::Result<Vec<Check>> {
    let mut worst = (0.0f64, 0.0);
    for t in log_spaced(0.1, 100.0, 50) {
        let err = (plane_wave_symbol_1d(t)? - 2.0 * t.ln()).abs();
        if err > worst.0 {
            worst = (err, t);
        }
    }
    Ok(vec![Check::new(
        "plane-wave symbol equals 2 ln t",
        worst.0 <= 1e-8,
        format!("sup error {:.3e} at t = {:.4}", worst.0, worst.1),
    )])
}

pub fn bounds_suite(seed: u64) -> crate::Result<Vec<Check>> {
    let c1 = dimension_constants::<f64>(1)?;
    let c2 = dimension_constants::<f64>(2)?;
    let mut checks = Vec::new();

    let r = bounds::lower_bound_lambda1(&c1, 2.0)?;
    checks.push(within("lambda_1 lower (i), |Omega| = 2", r.value("part_i").unwrap_or(f64::NAN), -4.0 / PI, 1e-12));
    let r = bounds::lower_bound_lambda1(&c1, 1.0)?;
    checks.push(Check::new("lambda_1 positive for |Omega| = 1", r.is_admissible("part_ii"), ""));
    let r = bounds::lower_bound_lambda1(&c1, 0.05)?;
    checks.push(within("lambda_1 lower (iii), |Omega| = 0.05", r.value("part_iii").unwrap_or(f64::NAN), 3.992, 1e-3));

    let sum30 = bounds::lower_bound_sum(&c1, 2.0, 30)?;
    let x = PI / (2.0 * E);
    let formula = 60.0 * (30f64.ln() + x.ln() - (30.0 * x).ln().ln());
    let part_iii = sum30.value("part_iii").unwrap_or(f64::NAN);
    checks.push(within("sum lower (iii), k = 30, against formula", part_iii, formula, 1e-10));
    let lk = bounds::lower_bound_lambda_k(&c1, 2.0, 30)?;
    checks.push(within(
        "lambda_k lower times k equals sum lower (iii)",
        lk.value("bound").unwrap_or(f64::NAN) * 30.0,
        part_iii,
        1e-12,
    ));

    let pi2 = 2.0 * PI;
    let st = bounds::upper_bound_lambda1_large(&c2, 4.0, pi2, Variant::Statement)?;
    checks.push(within("upper large, R = 4, statement", st.value("bound").unwrap_or(f64::NAN), 2.9453, 1e-3));
    let pr = bounds::upper_bound_lambda1_large(&c2, 4.0, pi2, Variant::Proof)?;
    let inner = 4.0 * pi2 / 4.0 * (1.0 + 2.0 * pi2 / (2.0 * pi2 * 4.0));
    let proof_formula = pi2 * 0.25f64.ln() + c2.rho_n + pi2 * 2f64.ln() + inner;
    checks.push(within("upper large, R = 4, proof", pr.value("bound").unwrap_or(f64::NAN), proof_formula, 1e-12));
    let small = bounds::upper_bound_lambda1_small(&c2, 0.1, 2.0 * pi2)?;
    checks.push(within("upper small, R = 0.1", small.value("bound").unwrap_or(f64::NAN), 338.99, 1e-2));
    let sum_st = bounds::upper_bound_sum(&c1, 2.0, 30, Variant::Statement)?;
    checks.push(within("upper sum, k = 30", sum_st.value("bound").unwrap_or(f64::NAN), 403.82, 1e-2));

    let mut consistent = true;
    for radius in [2.0, 4.0, 8.0, 16.0, 32.0] {
        let c0 = minimal_c0(&Domain::ball(2, [0.0; 2], radius)?, C0Regime::Large)?;
        let up = bounds::upper_bound_lambda1_large(&c2, radius, c0, Variant::Statement)?;
        let lo = bounds::lower_bound_lambda1(&c2, PI * 4.0 * radius * radius)?;
        if let (Some(u), Some(l)) = (up.value("bound"), lo.value("part_i")) {
            consistent &= l <= u;
        }
    }
    checks.push(Check::new("lower (i) on B_2R below upper large on balls", consistent, "R = 2, 4, 8, 16, 32"));

    let mut ordered = true;
    for k in [30, 50, 100, 1000] {
        let a = bounds::upper_bound_sum(&c1, 2.0, k, Variant::Statement)?.value("bound");
        let b = bounds::upper_bound_sum(&c1, 2.0, k, Variant::Proof)?.value("bound");
        ordered &= matches!((a, b), (Some(a), Some(b)) if a <= b);
    }
    checks.push(Check::new("upper sum statement below proof variant", ordered, "k = 30, 50, 100, 1000"));

    checks.extend(lemma22_checks(seed)?);
    Ok(checks)
}

/// Equality cases and seeded random profiles for the logarithmic moment inequalities.
pub fn lemma22_checks(seed: u64) -> crate::Result<Vec<Check>> {
    let c1 = dimension_constants::<f64>(1)?;
    let mut checks = Vec::new();
    for (a, part) in [(1.0, "i"), (E, "ii"), (E * E, "iii")] {
        let r = bounds::lemma22_check(&Lemma22Profile::BallIndicator { a, m1: 1.0 }, &c1)?;
        let slack = r.value(&format!("slack_{part}")).unwrap_or(f64::NAN);
        checks.push(Check::new(
            format!("equality case a = {a:.6}, part ({part})"),
            slack.abs() <= 1e-10,
            format!("slack {slack:.3e}"),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for i in 0..500 {
        let dim = 1 + i % 2;
        let c = dimension_constants::<f64>(dim)?;
        let profile = if i % 5 == 4 {
            random_grid_profile(&mut rng, dim)
        } else {
            Lemma22Profile::BallIndicator {
                a: rng.gen_range(0.1..=10.0),
                m1: 5.0 - rng.gen_range(0.0..5.0),
            }
        };
        let r = bounds::lemma22_check(&profile, &c)?;
        for key in ["slack_i", "slack_ii", "slack_iii"] {
            if let Some(s) = r.value(key) {
                worst = worst.min(s);
            }
        }
        failures += usize::from(!r.all_verdicts_hold());
    }
    checks.push(Check::new(
        "500 random profiles satisfy every applicable inequality",
        failures == 0 && worst >= -bounds::SLACK_TOLERANCE,
        format!("{failures} failing profiles, minimum slack {worst:.3e}"),
    ));
    Ok(checks)
}

fn random_grid_profile(rng: &mut ChaCha8Rng, dim: usize) -> Lemma22Profile<f64> {
    let h = rng.gen_range(0.05..0.5);
    let m1 = 5.0 - rng.gen_range(0.0..5.0);
    let extent: i64 = rng.gen_range(2..8);
    let mut corners = Vec::new();
    let mut values = Vec::new();
    let second: Vec<i64> = if dim == 2 { (-extent..extent).collect() } else { vec![0] };
    for i in -extent..extent {
        for &j in &second {
            corners.push([i as f64 * h, if dim == 2 { j as f64 * h } else { 0.0 }]);
            values.push(m1 * rng.gen_range(0.0..=1.0));
        }
    }
    Lemma22Profile::GridSamples {
        dim,
        h,
        corners,
        values,
        m1,
    }
}

fn interval_spectrum(length: f64, h: f64, k: usize) -> crate::Result<Spectrum<f64>> {
    let d = Domain::centered_interval(length)?;
    let g = Grid::build(&d, h)?;
    let m = QuadFormMatrix::assemble(&g, &dimension_constants(1)?)?;
    let k = k.min(g.len());
    eig_symmetric(&m, k, false)
}

pub fn sandwich_suite() -> crate::Result<Vec<Check>> {
    let c1 = dimension_constants::<f64>(1)?;
    let mut checks = Vec::new();

    let levels: Vec<f64> = (3..=6)
        .map(|p| interval_spectrum(2.0, 0.5f64.powi(p), 1).map(|s| s.lambda(1)))
        .collect::<crate::Result<_>>()?;
    let monotone = levels.windows(2).all(|w| w[1] < w[0] || (w[1] - w[0]).abs() < 1e-12);
    checks.push(Check::new(
        "lambda_1 nonincreasing under refinement",
        monotone,
        format!("{levels:.10?} at h = 2^-3..2^-6"),
    ));

    for length in [0.5, 1.0, 2.0, 4.0] {
        let l1 = interval_spectrum(length, 1.0 / 128.0, 1)?.lambda(1);
        let lower = -c1.d_n * length;
        checks.push(Check::new(
            format!("lambda_1 >= -d_1 L, L = {length}"),
            l1 >= lower - 1e-10,
            format!("lambda_1 = {l1:.10}, bound {lower:.10}"),
        ));
        if length == 1.0 {
            checks.push(Check::new("lambda_1 > 0 for L = 1", l1 > 0.0, format!("lambda_1 = {l1:.10}")));
        }
    }

    let s = interval_spectrum(2.0, 1.0 / 256.0, 30)?;
    let r = bounds::lower_bound_sum(&c1, 2.0, 30)?;
    let bound30 = r.value("part_iii").unwrap_or(f64::NAN);
    let sum30 = s.partial_sum(30);
    checks.push(Check::new(
        "sum of 30 lowest >= sum lower bound (iii)",
        sum30 >= bound30,
        format!("sum {sum30:.6}, bound {bound30:.6}"),
    ));
    let floor = -c1.d_n * 2.0;
    let worst = (1..=30).map(|k| s.partial_sum(k)).fold(f64::INFINITY, f64::min);
    checks.push(Check::new(
        "every partial sum >= -4/pi",
        worst >= floor,
        format!("smallest partial sum {worst:.6}"),
    ));

    checks.extend(upper_chain_checks()?);
    Ok(checks)
}

/// Rayleigh quotient of the clamp test function on discs against the large-domain bound.
pub fn upper_chain_checks() -> crate::Result<Vec<Check>> {
    let c2 = dimension_constants::<f64>(2)?;
    let mut checks = Vec::new();
    for radius in [4.0, 8.0] {
        let disc = Domain::ball(2, [0.0; 2], radius)?;
        let grid = Grid::build(&disc, radius / 40.0)?;
        let form = FormOperator::new(&grid, &c2)?;
        let spec = TestFunctionSpec::clamp(0.25);
        let v = grid.sample(|x| test_function(&disc, &spec, x));
        let rq = rayleigh_quotient(&form, &v)?;
        let c0 = minimal_c0(&disc, C0Regime::Large)?;
        for variant in [Variant::Statement, Variant::Proof] {
            let r = bounds::upper_bound_lambda1_large(&c2, radius, c0, variant)?;
            let b = r.value("bound").unwrap_or(f64::NAN);
            let margin = 0.01 * b.abs();
            checks.push(Check::new(
                format!("test-function quotient <= upper large, R = {radius}, {}", variant.name()),
                rq <= b + margin,
                format!("quotient {rq:.6}, bound {b:.6}, margin {margin:.4}"),
            ));
        }
    }
    Ok(checks)
}

pub fn weyl_suite() -> crate::Result<Vec<Check>> {
    let c1 = dimension_constants::<f64>(1)?;
    let mut checks = Vec::new();

    let s = interval_spectrum(2.0, 1.0 / 512.0, 100)?;
    let mut ratios: Vec<f64> = (50..=100).map(|k| s.lambda(k) / (k as f64).ln()).collect();
    ratios.sort_by(f64::total_cmp);
    let median = ratios[ratios.len() / 2];
    checks.push(Check::new(
        "median lambda_k / ln k over k = 50..100 within [1.3, 2.7]",
        (0.65 * 2.0..=1.35 * 2.0).contains(&median),
        format!("median {median:.6}"),
    ));
    let averages: Vec<f64> = (50..=100)
        .map(|k| s.partial_sum(k) / (k as f64 * (k as f64).ln()))
        .collect();
    let increasing = averages.windows(2).all(|w| w[1] > w[0]);
    let first = averages[0];
    let last = *averages.last().expect("nonempty");
    let approaching = (2.0 - last).abs() < (2.0 - first).abs();
    checks.push(Check::new(
        "partial-sum average increases toward 2/N",
        increasing && approaching,
        format!("{first:.6} at k = 50, {last:.6} at k = 100"),
    ));

    let synthetic = Spectrum::from_values((1..=2000).map(|k| 2.0 * (k as f64).ln()).collect());
    let env = bounds::counting_envelope(&synthetic, 0.25, &c1)?;
    for key in ["decaying", "growing"] {
        let v = &env.verdicts[key];
        checks.push(Check::new(
            format!("counting envelope {key}, synthetic 2 ln k"),
            v.holds,
            format!("first quartile {:.4e}, last quartile {:.4e}", v.bound, v.observed),
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        for suite in [Suite::Constants, Suite::Symbol, Suite::Bounds] {
            let r = run_suite(suite, 3).unwrap();
            assert!(r.passed, "{:#?}", r.checks);
        }
    }

    #[test]
    fn roots_suite_flags_only_the_linear_envelope() {
        let r = run_suite(Suite::Roots, 0).unwrap();
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        assert_eq!(failed, vec![format!("envelope {}", crate::roots::LINEAR_LOWER_ENVELOPE)]);
    }

    #[test]
    fn samples_cover_ranges() {
        let c = r_ln_r_samples(1000);
        assert_eq!(c.len(), 1000);
        assert!(c[0] > -1.0 / E && c[0] < -1.0 / E + 1e-11);
        assert!((c[999] - 1e6).abs() < 1e-6);
        let t = log_ratio_samples(1000);
        assert_eq!(t.len(), 1000);
        assert!(t[0] > 8.83 && (t[999] - 1e6).abs() < 1e-6);
    }
}
