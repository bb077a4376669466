//! Discrete spectra, the counting function, and Weyl-type diagnostics.

mod eigen;

use std::io::{self, Write};

use serde::Serialize;

pub use eigen::{symmetric_eigen, SymmetricEigen, MAX_QL_ITERATIONS};

use crate::discretize::{QuadFormMatrix, QuadraticForm};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Where a spectrum came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSource {
    pub domain: String,
    pub dim: usize,
    pub h: f64,
    pub cells: usize,
}

/// The `k` lowest eigenvalues, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    /// Unit eigenvectors of `A` (Euclidean norm in coefficient space), one per eigenvalue.
    pub eigenvectors: Option<Vec<Vec<T>>>,
    pub k: usize,
    /// Size of the discrete problem the values were taken from.
    pub total: usize,
    pub source: Option<SpectrumSource>,
}

impl<T: Real> Spectrum<T> {
    /// A complete spectrum from explicit values (sorted on entry).
    pub fn from_values(mut values: Vec<T>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let k = values.len();
        Self {
            eigenvalues: values,
            eigenvectors: None,
            k,
            total: k,
            source: None,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// True when every eigenvalue of the underlying problem is present.
    pub fn is_complete(&self) -> bool {
        self.k == self.total
    }

    /// `λ_j` with 1-based index.
    pub fn lambda(&self, j: usize) -> T {
        self.eigenvalues[j - 1]
    }

    pub fn largest(&self) -> Option<T> {
        self.eigenvalues.last().copied()
    }

    /// `Σ_{i≤k} λ_i`.
    pub fn partial_sum(&self, k: usize) -> T {
        self.eigenvalues[..k].iter().fold(T::zero(), |a, b| a + *b)
    }
}

/// The `k` smallest eigenvalues of `A / h^N`.
pub fn eig_symmetric<T: Real>(matrix: &QuadFormMatrix<T>, k: usize, retain_vectors: bool) -> Result<Spectrum<T>> {
    let n = matrix.n();
    eig_dense(matrix.entries(), n, matrix.mass_scale(), k, retain_vectors).map(|mut s| {
        let g = matrix.grid();
        s.source = Some(SpectrumSource {
            domain: g.domain().describe(),
            dim: g.dim(),
            h: g.h().to_f64_lossy(),
            cells: n,
        });
        s
    })
}

/// Same as [`eig_symmetric`] for a raw row-major matrix.
pub fn eig_dense<T: Real>(entries: &[T], n: usize, mass_scale: T, k: usize, retain_vectors: bool) -> Result<Spectrum<T>> {
    if k == 0 || k > n {
        return Err(Error::precondition(
            "eig_symmetric",
            format!("requested {k} eigenvalues of a {n} × {n} problem"),
        ));
    }
    if !(mass_scale > T::zero()) {
        return Err(Error::precondition("eig_symmetric", "mass scale must be positive"));
    }
    let dec = symmetric_eigen(entries, n, retain_vectors)?;
    let eigenvalues = dec.values[..k].iter().map(|v| *v / mass_scale).collect();
    let eigenvectors = dec.vectors.map(|mut v| {
        v.truncate(k);
        v
    });
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        k,
        total: n,
        source: None,
    })
}

/// `‖A v − λ h^N v‖` for every retained pair.
pub fn residual_norms<T: Real>(form: &impl QuadraticForm<T>, spectrum: &Spectrum<T>) -> Result<Vec<T>> {
    let vecs = spectrum
        .eigenvectors
        .as_ref()
        .ok_or_else(|| Error::precondition("residual_norms", "spectrum has no eigenvectors"))?;
    let m = form.mass_scale();
    let mut out = vec![T::zero(); form.size()];
    Ok(spectrum
        .eigenvalues
        .iter()
        .zip(vecs)
        .map(|(lam, v)| {
            form.apply(v, &mut out);
            out.iter()
                .zip(v)
                .fold(T::zero(), |acc, (av, x)| {
                    let r = *av - *lam * m * *x;
                    acc + r * r
                })
                .sqrt()
        })
        .collect())
}

/// `𝒩(t) = #{j : λ_j < t}`.
///
/// A truncated spectrum cannot count past its largest value, which is then a
/// saturation error.
pub fn counting_function<T: Real>(spectrum: &Spectrum<T>, t: T) -> Result<usize> {
    if let Some(top) = spectrum.largest() {
        if t > top && !spectrum.is_complete() {
            return Err(Error::Saturation {
                t: t.to_f64_lossy(),
                largest: top.to_f64_lossy(),
            });
        }
    }
    Ok(spectrum.eigenvalues.partition_point(|l| *l < t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylRow {
    pub k: usize,
    pub lambda: f64,
    /// `λ_k / ln k`; undefined for `k = 1`.
    pub lambda_over_ln_k: Option<f64>,
    pub partial_sum: f64,
    /// `Σ_{i≤k} λ_i / (k ln k)`; undefined for `k = 1`.
    pub partial_sum_over_k_ln_k: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeSample {
    pub t: f64,
    pub count: usize,
    /// `𝒩(t) e^{−(N/2+δ)t}`
    pub decaying: f64,
    /// `𝒩(t) e^{−(N/2−δ)t}`
    pub growing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylDiagnostics {
    pub dim: usize,
    pub delta: Option<f64>,
    pub rows: Vec<WeylRow>,
    pub envelope: Vec<EnvelopeSample>,
}

/// Number of `t` samples used for the counting envelopes.
pub const ENVELOPE_SAMPLES: usize = 400;

/// Ratio columns for every `k`, plus envelope samples when `delta` is given.
pub fn weyl_diagnostics<T: Real>(spectrum: &Spectrum<T>, dim: usize, delta: Option<T>) -> Result<WeylDiagnostics> {
    if spectrum.len() < 3 {
        return Err(Error::precondition(
            "weyl_diagnostics",
            format!("need at least 3 eigenvalues, got {}", spectrum.len()),
        ));
    }
    let mut rows = Vec::with_capacity(spectrum.len());
    let mut sum = 0.0;
    for (i, l) in spectrum.eigenvalues.iter().enumerate() {
        let k = i + 1;
        let lambda = l.to_f64_lossy();
        sum += lambda;
        let ln_k = (k as f64).ln();
        rows.push(WeylRow {
            k,
            lambda,
            lambda_over_ln_k: (k >= 2).then(|| lambda / ln_k),
            partial_sum: sum,
            partial_sum_over_k_ln_k: (k >= 2).then(|| sum / (k as f64 * ln_k)),
        });
    }
    let envelope = match delta {
        Some(d) => envelope_samples(spectrum, dim, d, ENVELOPE_SAMPLES)?,
        None => Vec::new(),
    };
    Ok(WeylDiagnostics {
        dim,
        delta: delta.map(|d| d.to_f64_lossy()),
        rows,
        envelope,
    })
}

/// `𝒩(t) e^{−(N/2±δ)t}` on an even grid of `t ∈ [λ_2, λ_k]`.
pub fn envelope_samples<T: Real>(spectrum: &Spectrum<T>, dim: usize, delta: T, samples: usize) -> Result<Vec<EnvelopeSample>> {
    if spectrum.len() < 2 || samples < 2 {
        return Err(Error::precondition("envelope_samples", "need λ_2 and at least two samples"));
    }
    let lo = spectrum.lambda(2).to_f64_lossy();
    let hi = spectrum.largest().expect("nonempty").to_f64_lossy();
    let half_n = dim as f64 / 2.0;
    let d = delta.to_f64_lossy();
    (0..samples)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            let count = counting_function(spectrum, T::lit(t).min(spectrum.largest().expect("nonempty")))?;
            Ok(EnvelopeSample {
                t,
                count,
                decaying: count as f64 * (-(half_n + d) * t).exp(),
                growing: count as f64 * (-(half_n - d) * t).exp(),
            })
        })
        .collect()
}

pub const SPECTRUM_CSV_HEADER: &str = "k,lambda_k,lambda_k_over_ln_k,partial_sum,partial_sum_over_k_ln_k";

/// Writes the spectrum table. Undefined ratios for `k = 1` are written as `nan`.
pub fn write_spectrum_csv<T: Real>(spectrum: &Spectrum<T>, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "#schema=1")?;
    writeln!(w, "{SPECTRUM_CSV_HEADER}")?;
    let mut sum = T::zero();
    for (i, l) in spectrum.eigenvalues.iter().enumerate() {
        let k = i + 1;
        sum += *l;
        let fmt = |x: Option<T>| match x {
            Some(v) => format!("{v:.16e}"),
            None => "nan".to_string(),
        };
        let ln_k = T::from_count(k).ln();
        let ratio = (k >= 2).then(|| *l / ln_k);
        let sum_ratio = (k >= 2).then(|| sum / (T::from_count(k) * ln_k));
        writeln!(w, "{k},{:.16e},{},{:.16e},{}", l, fmt(ratio), sum, fmt(sum_ratio))?;
    }
    Ok(())
}
