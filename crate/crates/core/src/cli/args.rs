//! Argument groups shared by several subcommands.

use clap::{Args, ValueEnum};
use serde::Serialize;

use super::{CliError, CliResult};
use crate::bounds::Variant;
use crate::geometry::Domain;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainChoice {
    Interval,
    Box,
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantChoice {
    #[default]
    Statement,
    Proof,
}

impl From<VariantChoice> for Variant {
    fn from(v: VariantChoice) -> Self {
        match v {
            VariantChoice::Statement => Variant::Statement,
            VariantChoice::Proof => Variant::Proof,
        }
    }
}

/// A domain centred at the origin.
#[derive(Debug, Clone, Args, Serialize)]
pub struct DomainArgs {
    /// Space dimension.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,

    /// Domain family.
    #[arg(long, value_enum, default_value_t = DomainChoice::Interval)]
    pub domain: DomainChoice,

    /// Interval length.
    #[arg(long, default_value_t = 2.0)]
    pub length: f64,

    /// Ball radius.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,

    /// Box side lengths, `a` or `a,b`. Defaults to `--length` on every axis.
    #[arg(long, value_name = "A[,B]")]
    pub side: Option<String>,
}

impl DomainArgs {
    pub fn build(&self) -> CliResult<Domain<f64>> {
        match self.domain {
            DomainChoice::Interval => {
                if self.dim != 1 {
                    return Err(CliError::Usage(format!(
                        "an interval is one-dimensional, got --dim {}",
                        self.dim
                    )));
                }
                Ok(Domain::centered_interval(self.length)?)
            }
            DomainChoice::Ball => Ok(Domain::ball(self.dim, [0.0; 2], self.radius)?),
            DomainChoice::Box => {
                let sides = match &self.side {
                    None => [self.length; 2],
                    Some(s) => parse_sides(s)?,
                };
                Ok(Domain::centered_box(self.dim, sides)?)
            }
        }
    }

    /// Same arguments with another radius; used by radius sweeps.
    pub fn with_radius(&self, radius: f64) -> Self {
        Self {
            radius,
            ..self.clone()
        }
    }
}

fn parse_sides(s: &str) -> CliResult<[f64; 2]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--side: cannot parse {p:?} as a number")))
    };
    match parts.as_slice() {
        [a] => {
            let a = num(a)?;
            Ok([a, a])
        }
        [a, b] => Ok([num(a)?, num(b)?]),
        _ => Err(CliError::Usage(format!("--side takes one or two values, got {s:?}"))),
    }
}

/// Grid resolution as a cell side or as a cell count along the longest side.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct GridArgs {
    /// Requested cell side.
    #[arg(long, conflicts_with = "cells")]
    pub h: Option<f64>,

    /// Cells along the longest side of the bounding box.
    #[arg(long)]
    pub cells: Option<usize>,
}

impl GridArgs {
    pub fn is_set(&self) -> bool {
        self.h.is_some() || self.cells.is_some()
    }

    /// The requested cell side, if any.
    pub fn resolve(&self, domain: &Domain<f64>) -> CliResult<Option<f64>> {
        match (self.h, self.cells) {
            (Some(h), _) => Ok(Some(h)),
            (None, Some(0)) => Err(CliError::Usage("--cells must be positive".into())),
            (None, Some(n)) => {
                let (lo, hi) = domain.bounding_box();
                let longest = (0..domain.dim()).map(|d| hi[d] - lo[d]).fold(0.0, f64::max);
                Ok(Some(longest / n as f64))
            }
            (None, None) => Ok(None),
        }
    }

    pub fn require(&self, domain: &Domain<f64>) -> CliResult<f64> {
        self.resolve(domain)?
            .ok_or_else(|| CliError::Usage("a grid is required: pass --h or --cells".into()))
    }
}
