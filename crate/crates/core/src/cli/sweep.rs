//! Parameter sweeps over radius, index or mesh size.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};

use super::args::{DomainArgs, DomainChoice, GridArgs};
use super::{emit, CliError, CliResult};
use crate::bounds::{self, Variant};
use crate::constants::{dimension_constants, DimensionConstants};
use crate::discretize::{Grid, QuadFormMatrix};
use crate::geometry::{minimal_c0, C0Regime, Domain};
use crate::spectrum::eig_symmetric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Radius,
    K,
    H,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct SweepArgs {
    /// Quantity varied across the rows.
    #[arg(long, value_enum)]
    pub parameter: SweepParameter,

    /// First value, inclusive.
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,

    /// Last value, inclusive.
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,

    /// Number of rows.
    #[arg(long, default_value_t = 10)]
    pub steps: usize,

    /// Space the values geometrically instead of evenly.
    #[arg(long)]
    pub log: bool,

    #[command(flatten)]
    pub domain: DomainArgs,

    /// Adds discrete eigenvalue columns; a radius sweep with `--cells` keeps the cell count fixed.
    #[command(flatten)]
    pub grid: GridArgs,

    /// Foliation constant; the least admissible one for each ball when omitted.
    #[arg(long)]
    pub c0: Option<f64>,

    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parameter values of a sweep, validated.
pub fn sweep_values(from: f64, to: f64, steps: usize, log: bool) -> CliResult<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::Usage("sweep bounds must be finite".into()));
    }
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if steps == 1 {
        return if from == to {
            Ok(vec![from])
        } else {
            Err(CliError::Usage("a single step needs --from equal to --to".into()))
        };
    }
    if !(from < to) {
        return Err(CliError::Usage(format!("empty range: --from {from} is not below --to {to}")));
    }
    if log && !(from > 0.0) {
        return Err(CliError::Usage("--log needs a positive --from".into()));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            let s = i as f64 / last;
            if log {
                (from.ln() + s * (to.ln() - from.ln())).exp()
            } else {
                from + s * (to - from)
            }
        })
        .collect())
}

/// Least-squares coefficients of `y` on the given columns.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let (m, n) = (y.len(), columns.len());
    if m < n {
        return None;
    }
    let a = DMatrix::from_fn(m, n, |i, j| columns[j][i]);
    let b = DVector::from_column_slice(y);
    let x = a.svd(true, true).solve(&b, 1e-14).ok()?;
    Some(x.iter().copied().collect())
}

fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.16e}"),
        _ => "nan".to_string(),
    }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    fn column(&self, name: &str) -> Vec<Option<f64>> {
        let j = self.header.iter().position(|h| *h == name).expect("known column");
        self.rows.iter().map(|r| r[j]).collect()
    }

    fn to_csv(&self) -> String {
        let mut s = format!("#schema=1\n{}\n", self.header.join(","));
        for r in &self.rows {
            s.push_str(&r.iter().map(|v| cell(*v)).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }
}

fn discrete_lambdas(domain: &Domain<f64>, h: f64, k: usize, constants: &DimensionConstants<f64>) -> CliResult<(usize, Vec<f64>)> {
    let grid = Grid::build(domain, h)?;
    let m = QuadFormMatrix::assemble(&grid, constants)?;
    let k = k.min(grid.len());
    Ok((grid.len(), eig_symmetric(&m, k, false)?.eigenvalues))
}

fn radius_table(args: &SweepArgs, values: &[f64], constants: &DimensionConstants<f64>) -> CliResult<Table> {
    let mut header = vec![
        "radius",
        "volume",
        "c0_large",
        "lower_lambda1",
        "upper_large_statement",
        "upper_large_proof",
        "c0_small",
        "upper_small",
    ];
    if args.grid.is_set() {
        header.push("cells");
        header.push("lambda1");
    }
    let mut rows = Vec::new();
    for &radius in values {
        let domain = args.domain.with_radius(radius).build()?;
        let inradius = domain.inradius();
        let volume = domain.volume();
        let c0 = |regime| args.c0.map(Ok).unwrap_or_else(|| minimal_c0(&domain, regime)).ok();
        let lower = bounds::lower_bound_lambda1(constants, volume)?.value("part_i");
        let (c0_large, st, pr) = match c0(C0Regime::Large) {
            Some(c) if c >= 1.0 => (
                Some(c),
                bounds::upper_bound_lambda1_large(constants, inradius, c, Variant::Statement)?.value("bound"),
                bounds::upper_bound_lambda1_large(constants, inradius, c, Variant::Proof)?.value("bound"),
            ),
            _ => (None, None, None),
        };
        let (c0_small, small) = match c0(C0Regime::Small) {
            Some(c) if c >= 1.0 && inradius < 0.25 => {
                (Some(c), bounds::upper_bound_lambda1_small(constants, inradius, c)?.value("bound"))
            }
            _ => (None, None),
        };
        let mut row = vec![Some(radius), Some(volume), c0_large, lower, st, pr, c0_small, small];
        if let Some(h) = args.grid.resolve(&domain)? {
            let (cells, l) = discrete_lambdas(&domain, h, 1, constants)?;
            row.push(Some(cells as f64));
            row.push(l.first().copied());
        }
        rows.push(row);
    }
    Ok(Table { header, rows })
}

fn k_table(args: &SweepArgs, values: &[f64], constants: &DimensionConstants<f64>) -> CliResult<Table> {
    let mut ks: Vec<usize> = values.iter().map(|v| v.round() as usize).collect();
    ks.dedup();
    if ks.first() == Some(&0) {
        return Err(CliError::Usage("k sweeps start at k = 1".into()));
    }
    let domain = args.domain.build()?;
    let volume = domain.volume();
    let mut header = vec![
        "k",
        "lower_sum_i",
        "lower_sum_iii",
        "lower_lambda_k",
        "upper_sum_statement",
        "upper_sum_proof",
    ];
    let discrete = match args.grid.resolve(&domain)? {
        Some(h) => {
            header.extend(["discrete_sum", "discrete_lambda_k"]);
            Some(discrete_lambdas(&domain, h, *ks.last().expect("nonempty"), constants)?.1)
        }
        None => None,
    };
    let mut rows = Vec::new();
    for &k in &ks {
        let lo = bounds::lower_bound_sum(constants, volume, k)?;
        let mut row = vec![
            Some(k as f64),
            lo.value("part_i"),
            lo.value("part_iii"),
            bounds::lower_bound_lambda_k(constants, volume, k)?.value("bound"),
            bounds::upper_bound_sum(constants, volume, k, Variant::Statement)?.value("bound"),
            bounds::upper_bound_sum(constants, volume, k, Variant::Proof)?.value("bound"),
        ];
        if let Some(l) = &discrete {
            let avail = k <= l.len();
            row.push(avail.then(|| l[..k].iter().sum()));
            row.push(avail.then(|| l[k - 1]));
        }
        rows.push(row);
    }
    Ok(Table { header, rows })
}

fn h_table(args: &SweepArgs, values: &[f64], constants: &DimensionConstants<f64>) -> CliResult<Table> {
    let domain = args.domain.build()?;
    let lower = bounds::lower_bound_lambda1(constants, domain.volume())?.value("part_i");
    let mut rows = Vec::new();
    for &h in values {
        let grid = Grid::build(&domain, h)?;
        let (cells, l) = discrete_lambdas(&domain, h, 1, constants)?;
        rows.push(vec![Some(h), Some(grid.h()), Some(cells as f64), l.first().copied(), lower]);
    }
    Ok(Table {
        header: vec!["requested_h", "h", "cells", "lambda1", "lower_lambda1"],
        rows,
    })
}

/// Slope of `y` in `ln R`, with extra basis columns to absorb lower-order terms.
fn log_slope(table: &Table, column: &str, extra: &[fn(f64) -> f64]) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = table
        .column("radius")
        .into_iter()
        .zip(table.column(column))
        .filter_map(|(r, y)| Some((r?, y?)))
        .collect();
    let radii: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut cols = vec![radii.iter().map(|r| r.ln()).collect::<Vec<_>>(), vec![1.0; radii.len()]];
    for f in extra {
        cols.push(radii.iter().map(|r| f(*r)).collect());
    }
    let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    least_squares(&cols, &y).map(|c| c[0])
}

fn radius_fit(table: &Table, constants: &DimensionConstants<f64>) -> Value {
    let omega = constants.omega;
    let fit = |column, extra: &[fn(f64) -> f64], expected: f64| {
        let slope = log_slope(table, column, extra);
        json!({
            "column": column,
            "slope_in_ln_r": slope,
            "expected": expected,
            "relative_error": slope.map(|s| ((s - expected) / expected).abs()),
        })
    };
    const DECAY: [fn(f64) -> f64; 2] = [|r| 1.0 / r, |r| 1.0 / (r * r)];
    json!({
        "upper_large": fit("upper_large_statement", &DECAY, -omega),
        "upper_large_linear": fit("upper_large_statement", &[], -omega),
        "upper_small": fit("upper_small", &[], -4.0),
    })
}

pub fn command(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let values = sweep_values(args.from, args.to, args.steps, args.log)?;
    let domain = args.domain.build()?;
    let constants = dimension_constants::<f64>(domain.dim())?;
    let table = match args.parameter {
        SweepParameter::Radius => {
            if args.domain.domain != DomainChoice::Ball {
                return Err(CliError::Usage("radius sweeps need --domain ball".into()));
            }
            radius_table(args, &values, &constants)?
        }
        SweepParameter::K => k_table(args, &values, &constants)?,
        SweepParameter::H => {
            if values.iter().any(|h| !(*h > 0.0)) {
                return Err(CliError::Usage("mesh sizes must be positive".into()));
            }
            h_table(args, &values, &constants)?
        }
    };
    emit(args.out.as_deref(), &table.to_csv(), out)?;
    if args.parameter == SweepParameter::Radius {
        let summary = radius_fit(&table, &constants);
        writeln!(err, "{}", serde_json::to_string(&summary).expect("json"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn disc_area(r: f64) -> f64 {
        PI * r * r
    }

    fn ball_sweep(from: f64, to: f64) -> SweepArgs {
        SweepArgs {
            parameter: SweepParameter::Radius,
            from,
            to,
            steps: 12,
            log: true,
            domain: DomainArgs {
                dim: 2,
                domain: DomainChoice::Ball,
                length: 2.0,
                radius: 1.0,
                side: None,
            },
            grid: GridArgs::default(),
            c0: None,
            out: None,
        }
    }

    #[test]
    fn values_and_range_errors() {
        assert_eq!(sweep_values(1.0, 3.0, 3, false).unwrap(), vec![1.0, 2.0, 3.0]);
        let v = sweep_values(1.0, 100.0, 3, true).unwrap();
        assert!((v[1] - 10.0).abs() < 1e-12);
        assert!(sweep_values(2.0, 1.0, 3, false).is_err());
        assert!(sweep_values(1.0, 1.0, 3, false).is_err());
        assert!(sweep_values(1.0, 2.0, 0, false).is_err());
        assert!(sweep_values(0.0, 2.0, 3, true).is_err());
        assert_eq!(sweep_values(5.0, 5.0, 1, false).unwrap(), vec![5.0]);
    }

    #[test]
    fn large_radius_slope() {
        let c = dimension_constants(2).unwrap();
        let args = ball_sweep(2.0, 32.0);
        let values = sweep_values(2.0, 32.0, 12, true).unwrap();
        let t = radius_table(&args, &values, &c).unwrap();
        let disc = t.column("volume");
        assert!((disc[0].unwrap() - disc_area(2.0)).abs() < 1e-12);
        let s = log_slope(&t, "upper_large_statement", &[|r| 1.0 / r, |r| 1.0 / (r * r)]).unwrap();
        assert!(((s + c.omega) / c.omega).abs() < 0.05, "slope {s}");
    }

    #[test]
    fn small_radius_slope() {
        let c = dimension_constants(2).unwrap();
        let args = ball_sweep(0.01, 0.2);
        let values = sweep_values(0.01, 0.2, 12, true).unwrap();
        let t = radius_table(&args, &values, &c).unwrap();
        let s = log_slope(&t, "upper_small", &[]).unwrap();
        assert!(((s + 4.0) / 4.0).abs() < 0.01, "slope {s}");
    }

    #[test]
    fn k_sweep_with_spectrum() {
        let args = SweepArgs {
            parameter: SweepParameter::K,
            domain: DomainArgs {
                dim: 1,
                domain: DomainChoice::Interval,
                length: 2.0,
                radius: 1.0,
                side: None,
            },
            grid: GridArgs { h: Some(1.0 / 32.0), cells: None },
            steps: 5,
            log: false,
            from: 1.0,
            to: 30.0,
            ..ball_sweep(1.0, 2.0)
        };
        let mut out = Vec::new();
        command(&args, &mut out, &mut Vec::new()).unwrap();
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<&str> = text.lines().skip(2).collect();
        assert_eq!(rows.len(), 5);
        assert!(rows[0].starts_with("1.0000000000000000e0,"));
    }

    #[test]
    fn least_squares_recovers_line() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let c = least_squares(&[x, vec![1.0; 4]], &y).unwrap();
        assert!((c[0] - 3.0).abs() < 1e-12 && (c[1] + 1.0).abs() < 1e-12);
    }
}
