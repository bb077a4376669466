use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args};
use serde::Serialize;
use serde_json::{json, Value};

use super::args::{DomainArgs, GridArgs, VariantChoice};
use super::{emit, CliError, CliResult};
use crate::bounds::{self, BoundReport, Variant};
use crate::constants::{dimension_constants, DimensionConstants, MAX_DIMENSION};
use crate::discretize::{rayleigh_quotient, Grid, QuadFormMatrix};
use crate::geometry::{minimal_c0, test_function, test_function_moments, C0Regime, Domain, TestFunctionSpec};
use crate::roots::{solve_log_ratio, solve_r_ln_r, RootResult};
use crate::spectrum::{eig_symmetric, write_spectrum_csv, Spectrum};

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct ConstantsArgs {
    /// Single dimension; all of 1..=10 when omitted.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_DIMENSION as u64))]
    pub dim: Option<u64>,

    /// Write the CSV here instead of after the table.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const CONSTANTS_HEADER: [&str; 6] = ["N", "omega", "c_N", "rho_N", "d_N", "p_N"];

pub fn constants(args: &ConstantsArgs, out: &mut dyn Write) -> CliResult<()> {
    let dims: Vec<usize> = match args.dim {
        Some(d) => vec![d as usize],
        None => (1..=MAX_DIMENSION).collect(),
    };
    let rows = dims
        .iter()
        .map(|&d| dimension_constants::<f64>(d))
        .collect::<crate::Result<Vec<_>>>()?;

    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|c| {
            [
                c.dim.to_string(),
                format!("{:.10}", c.omega),
                format!("{:.10}", c.c_n),
                format!("{:.10}", c.rho_n),
                format!("{:.10}", c.d_n),
                format!("{:.10}", c.p_n),
            ]
        })
        .collect();
    let mut widths = CONSTANTS_HEADER.map(str::len);
    for row in &cells {
        for (w, s) in widths.iter_mut().zip(row) {
            *w = (*w).max(s.len());
        }
    }
    let line = |fields: &[&str]| {
        fields
            .iter()
            .zip(widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(&CONSTANTS_HEADER))?;
    for row in &cells {
        let refs: Vec<&str> = row.iter().map(String::as_str).collect();
        writeln!(out, "{}", line(&refs))?;
    }

    let mut csv = format!("#schema=1\n{}\n", CONSTANTS_HEADER.join(","));
    for c in &rows {
        csv.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            c.dim, c.omega, c.c_n, c.rho_n, c.d_n, c.p_n
        ));
    }
    match &args.out {
        Some(p) => fs::write(p, csv)?,
        None => {
            writeln!(out)?;
            out.write_all(csv.as_bytes())?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, group(ArgGroup::new("input").required(true).args(["c", "t"])))]
pub struct RootsArgs {
    /// Right-hand side of `r ln r = c`, with `c ≥ −1/e`.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,

    /// Right-hand side of `r / (ln r − ln ln r) = t`, with `t > e^e/(e − 1)`.
    #[arg(long)]
    pub t: Option<f64>,
}

fn root_json(equation: &str, res: &RootResult<f64>) -> Value {
    json!({
        "equation": equation,
        "result": res,
        "envelopes_hold": res.envelopes_hold(),
        "violated": res.violated().iter().map(|e| e.name).collect::<Vec<_>>(),
    })
}

pub fn roots(args: &RootsArgs, out: &mut dyn Write) -> CliResult<()> {
    let v = match (args.c, args.t) {
        (Some(c), _) => root_json("r ln r = c", &solve_r_ln_r(c)?),
        (None, Some(t)) => root_json("r / (ln r - ln ln r) = t", &solve_log_ratio(t)?),
        (None, None) => unreachable!("clap enforces the input group"),
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub domain: DomainArgs,

    /// When set, the bounds are judged against the discrete spectrum on this grid.
    #[command(flatten)]
    pub grid: GridArgs,

    /// Index `k` for the sum and `λ_k` bounds.
    #[arg(long, default_value_t = 30)]
    pub num_eigs: usize,

    /// Foliation constant; the least admissible one for the domain when omitted.
    #[arg(long)]
    pub c0: Option<f64>,

    /// Which form of the upper-bound constants to report.
    #[arg(long, value_enum, default_value_t = VariantChoice::Statement)]
    pub variant: VariantChoice,

    /// Envelope exponent offset for the counting-function trend.
    #[arg(long)]
    pub delta: Option<f64>,

    /// Collar width of a clamp test function whose Rayleigh quotient is reported.
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Skipped {
    bound: &'static str,
    reason: String,
}

fn resolve_c0(args: &BoundsArgs, domain: &Domain<f64>, regime: C0Regime) -> crate::Result<f64> {
    match args.c0 {
        Some(c) => Ok(c),
        None => minimal_c0(domain, regime),
    }
}

/// Every bound applicable to the domain, plus the ones skipped with reasons.
fn domain_reports(
    args: &BoundsArgs,
    domain: &Domain<f64>,
    constants: &DimensionConstants<f64>,
) -> CliResult<(Vec<BoundReport>, Vec<Skipped>)> {
    let volume = domain.volume();
    let k = args.num_eigs;
    let variant: Variant = args.variant.into();
    let mut reports = vec![
        bounds::lower_bound_lambda1(constants, volume)?,
        bounds::lower_bound_sum(constants, volume, k)?,
        bounds::lower_bound_lambda_k(constants, volume, k)?,
        bounds::upper_bound_sum_for_domain(constants, domain, k, variant)?,
    ];
    let mut skipped = Vec::new();
    let radius = domain.inradius();

    match resolve_c0(args, domain, C0Regime::Large) {
        Ok(c0) => reports.push(bounds::upper_bound_lambda1_large(constants, radius, c0, variant)?),
        Err(e) => skipped.push(Skipped {
            bound: "upper_bound_lambda1_large",
            reason: e.to_string(),
        }),
    }
    if radius < 0.25 {
        match resolve_c0(args, domain, C0Regime::Small) {
            Ok(c0) => reports.push(bounds::upper_bound_lambda1_small(constants, radius, c0)?),
            Err(e) => skipped.push(Skipped {
                bound: "upper_bound_lambda1_small",
                reason: e.to_string(),
            }),
        }
    } else {
        skipped.push(Skipped {
            bound: "upper_bound_lambda1_small",
            reason: format!("needs inradius < 1/4, got {radius}"),
        });
    }
    Ok((reports, skipped))
}

pub fn bounds(args: &BoundsArgs, out: &mut dyn Write, _err: &mut dyn Write) -> CliResult<()> {
    let domain = args.domain.build()?;
    let constants = dimension_constants::<f64>(domain.dim())?;
    let (mut reports, skipped) = domain_reports(args, &domain, &constants)?;

    let mut extra = serde_json::Map::new();
    let mut matrix = None;
    if let Some(h) = args.grid.resolve(&domain)? {
        let grid = Grid::build(&domain, h)?;
        let m = QuadFormMatrix::assemble(&grid, &constants)?;
        let k = args.num_eigs.min(grid.len());
        let spectrum = eig_symmetric(&m, k, false)?;
        for r in &mut reports {
            r.judge(&spectrum);
        }
        if let Some(delta) = args.delta {
            if spectrum.len() >= 10 {
                reports.push(bounds::counting_envelope(&spectrum, delta, &constants)?);
            }
        }
        extra.insert("spectrum".into(), spectrum_summary(&spectrum, &grid));
        matrix = Some((grid, m));
    }
    if let Some(sigma) = args.sigma {
        let spec = TestFunctionSpec::clamp(sigma);
        let (first, second) = test_function_moments(&domain, &spec);
        let mut tf = json!({
            "sigma": sigma,
            "profile": "clamp",
            "integral": first,
            "integral_of_square": second,
        });
        if let Some((grid, m)) = &matrix {
            let v = grid.sample(|x| test_function(&domain, &spec, x));
            tf["rayleigh_quotient"] = json!(rayleigh_quotient(m, &v)?);
        }
        extra.insert("test_function".into(), tf);
    }

    let mut doc = json!({
        "domain": domain.describe(),
        "dim": domain.dim(),
        "volume": domain.volume(),
        "inradius": domain.inradius(),
        "reports": reports,
        "skipped": skipped
            .iter()
            .map(|s| json!({"bound": s.bound, "reason": s.reason}))
            .collect::<Vec<_>>(),
    });
    for (key, v) in extra {
        doc[key] = v;
    }
    let text = format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"));
    emit(args.out.as_deref(), &text, out)
}

fn spectrum_summary(spectrum: &Spectrum<f64>, grid: &Grid<f64>) -> Value {
    json!({
        "h": grid.h(),
        "cells": grid.len(),
        "k": spectrum.len(),
        "eigenvalues": spectrum.eigenvalues,
    })
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct SolveArgs {
    #[command(flatten)]
    pub domain: DomainArgs,

    #[command(flatten)]
    pub grid: GridArgs,

    /// Number of lowest eigenvalues to keep.
    #[arg(long, default_value_t = 10)]
    pub num_eigs: usize,

    /// Output directory for `spectrum.csv` and `manifest.json`; CSV goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write the assembled matrix as `matrix.csv`.
    #[arg(long, requires = "out")]
    pub export_matrix: bool,

    /// Recorded in the manifest; the solver itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let start = Instant::now();
    let domain = args.domain.build()?;
    let h = args.grid.require(&domain)?;
    let constants = dimension_constants::<f64>(domain.dim())?;
    let grid = Grid::build(&domain, h)?;
    if args.num_eigs == 0 || args.num_eigs > grid.len() {
        return Err(CliError::Usage(format!(
            "--num-eigs must lie in 1..={} for this grid, got {}",
            grid.len(),
            args.num_eigs
        )));
    }

    let t0 = Instant::now();
    let matrix = QuadFormMatrix::assemble(&grid, &constants)?;
    let assemble_s = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let spectrum = eig_symmetric(&matrix, args.num_eigs, false)?;
    let eigen_s = t1.elapsed().as_secs_f64();

    let mut csv = Vec::new();
    write_spectrum_csv(&spectrum, &mut csv)?;
    let Some(dir) = &args.out else {
        out.write_all(&csv)?;
        return Ok(());
    };

    fs::create_dir_all(dir)?;
    fs::write(dir.join("spectrum.csv"), &csv)?;
    let mut files = vec!["spectrum.csv"];
    if args.export_matrix {
        write_matrix(&matrix, &dir.join("matrix.csv"))?;
        files.push("matrix.csv");
    }
    let manifest = json!({
        "schema": 1,
        "command": "solve",
        "version": env!("CARGO_PKG_VERSION"),
        "config": args,
        "domain": domain,
        "grid": {
            "requested_h": grid.requested_h(),
            "h": grid.h(),
            "cells": grid.len(),
            "cell_volume": grid.cell_volume(),
        },
        "lambda_1": spectrum.lambda(1),
        "files": files,
        "timings_s": {
            "assemble": assemble_s,
            "eigensolve": eigen_s,
            "total": start.elapsed().as_secs_f64(),
        },
    });
    fs::write(
        dir.join("manifest.json"),
        format!("{}\n", serde_json::to_string_pretty(&manifest).expect("json")),
    )?;
    writeln!(err, "wrote {} eigenvalues to {}", spectrum.len(), dir.display())?;
    Ok(())
}

fn write_matrix(matrix: &QuadFormMatrix<f64>, path: &Path) -> CliResult<()> {
    let mut w = std::io::BufWriter::new(fs::File::create(path)?);
    matrix.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}
