//! Closed-form eigenvalue bounds, their admissibility conditions, and the
//! functional inequality behind the lower bounds.
//!
//! Every bound evaluates into a [`BoundReport`]. A value is stored only when
//! all of its preconditions hold; the report always lists the flags, so an
//! absent value can be traced to the failing condition. Comparisons against a
//! computed spectrum are attached with [`BoundReport::judge`].

use std::collections::BTreeMap;
use serde::Serialize;
use serde_json::Value;

use crate::constants::DimensionConstants;
use crate::error::{Error, Result};
use crate::geometry::{sigma_one, Domain, RampProfile};
use crate::scalar::Real;
use crate::spectrum::{envelope_samples, Spectrum, ENVELOPE_SAMPLES};

/// Allowed relative rounding when a threshold is met with equality in exact arithmetic.
pub const THRESHOLD_ROUNDING: f64 = 1e-12;

/// Slack below which a functional inequality counts as violated.
pub const SLACK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lambda1Lower,
    SumLower,
    LambdaKLower,
    Lambda1UpperLarge,
    Lambda1UpperSmall,
    SumUpper,
    Lemma22,
    CountingEnvelope,
}

/// Which of two printed forms of a bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Constants in their stated closed form.
    #[default]
    Statement,
    /// The form reached at the end of the proof.
    Proof,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Statement => "statement",
            Variant::Proof => "proof",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    /// Relation the observed value is tested to satisfy against the bound.
    pub relation: &'static str,
    pub bound: f64,
    pub observed: f64,
    pub holds: bool,
    /// True when the relation is forced by min-max for a Galerkin spectrum,
    /// whose eigenvalues dominate the exact ones.
    pub implied_by_min_max: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    #[serde(skip)]
    pub kind: BoundKind,
    pub context: BTreeMap<String, Value>,
    pub values: BTreeMap<String, f64>,
    pub admissible: BTreeMap<String, bool>,
    pub verdicts: BTreeMap<String, Verdict>,
}

impl BoundReport {
    fn new(kind: BoundKind, name: &str) -> Self {
        let mut context = BTreeMap::new();
        context.insert("bound".to_string(), Value::from(name));
        Self {
            kind,
            context,
            values: BTreeMap::new(),
            admissible: BTreeMap::new(),
            verdicts: BTreeMap::new(),
        }
    }

    fn ctx(&mut self, key: &str, v: impl Into<Value>) {
        self.context.insert(key.to_string(), v.into());
    }

    fn val<T: Real>(&mut self, key: &str, v: T) {
        self.values.insert(key.to_string(), v.to_f64_lossy());
    }

    fn flag(&mut self, key: &str, v: bool) {
        self.admissible.insert(key.to_string(), v);
    }

    fn verdict(&mut self, key: &str, relation: &'static str, bound: f64, observed: f64, implied: bool) {
        let holds = match relation {
            "≥" => observed >= bound,
            ">" => observed > bound,
            "≤" => observed <= bound,
            "<" => observed < bound,
            _ => unreachable!("unknown relation"),
        };
        self.verdicts.insert(
            key.to_string(),
            Verdict {
                relation,
                bound,
                observed,
                holds,
                implied_by_min_max: implied,
            },
        );
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    pub fn is_admissible(&self, key: &str) -> bool {
        self.admissible.get(key).copied().unwrap_or(false)
    }

    /// True when every attached verdict holds.
    pub fn all_verdicts_hold(&self) -> bool {
        self.verdicts.values().all(|v| v.holds)
    }

    /// Compares the admissible bounds with a computed spectrum.
    pub fn judge<T: Real>(&mut self, spectrum: &Spectrum<T>) {
        let lambda1 = match spectrum.eigenvalues.first() {
            Some(l) => l.to_f64_lossy(),
            None => return,
        };
        let k = self.context.get("k").and_then(Value::as_u64).map(|k| k as usize);
        let available = |k: usize| k >= 1 && k <= spectrum.len();
        match self.kind {
            BoundKind::Lambda1Lower => {
                if let Some(b) = self.value("part_i") {
                    self.verdict("part_i", "≥", b, lambda1, true);
                }
                if self.is_admissible("part_ii") {
                    self.verdict("part_ii", ">", 0.0, lambda1, true);
                }
                if let Some(b) = self.value("part_iii") {
                    self.verdict("part_iii", "≥", b, lambda1, true);
                }
            }
            BoundKind::SumLower => {
                let Some(k) = k.filter(|k| available(*k)) else { return };
                let sum = spectrum.partial_sum(k).to_f64_lossy();
                if let Some(b) = self.value("part_i") {
                    self.verdict("part_i", "≥", b, sum, true);
                }
                if self.is_admissible("part_ii") {
                    self.verdict("part_ii", ">", 0.0, sum, true);
                }
                if let Some(b) = self.value("part_iii") {
                    self.verdict("part_iii", "≥", b, sum, true);
                }
            }
            BoundKind::LambdaKLower => {
                let Some(k) = k.filter(|k| available(*k)) else { return };
                let lk = spectrum.lambda(k).to_f64_lossy();
                if self.is_admissible("positive") {
                    self.verdict("positive", ">", 0.0, lk, true);
                }
                if let Some(b) = self.value("bound") {
                    self.verdict("bound", "≥", b, lk, true);
                }
            }
            BoundKind::Lambda1UpperLarge | BoundKind::Lambda1UpperSmall => {
                if let Some(b) = self.value("bound") {
                    self.verdict("bound", "≤", b, lambda1, false);
                }
            }
            BoundKind::SumUpper => {
                let Some(k) = k.filter(|k| available(*k)) else { return };
                if let Some(b) = self.value("bound") {
                    let sum = spectrum.partial_sum(k).to_f64_lossy();
                    self.verdict("bound", "≤", b, sum, false);
                }
            }
            BoundKind::Lemma22 | BoundKind::CountingEnvelope => {}
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn check_volume<T: Real>(op: &'static str, volume: T) -> Result<()> {
    if volume > T::zero() && volume.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("volume must be finite and > 0, got {volume}")))
    }
}

fn check_k(op: &'static str, k: usize) -> Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(Error::domain(op, "k must be at least 1"))
    }
}

fn check_c0<T: Real>(op: &'static str, c0: T) -> Result<()> {
    if c0 >= T::one() && c0.is_finite() {
        Ok(())
    } else {
        Err(Error::precondition(op, format!("need c0 ≥ 1, got {c0}")))
    }
}

fn base_context<T: Real>(r: &mut BoundReport, constants: &DimensionConstants<T>) {
    r.ctx("dim", constants.dim);
}

/// `e N d_N |Ω| / 2`, the positivity threshold on `k`.
pub fn positivity_index_threshold<T: Real>(constants: &DimensionConstants<T>, volume: T) -> T {
    T::E() * constants.n() * constants.d_n * volume / T::lit(2.0)
}

/// Lower bounds on the principal eigenvalue in terms of the volume alone.
pub fn lower_bound_lambda1<T: Real>(constants: &DimensionConstants<T>, volume: T) -> Result<BoundReport> {
    check_volume("lower_bound_lambda1", volume)?;
    let mut r = BoundReport::new(BoundKind::Lambda1Lower, "lower_bound_lambda1");
    base_context(&mut r, constants);
    r.ctx("volume", volume.to_f64_lossy());
    let (n, d) = (constants.n(), constants.d_n);
    let e = T::E();
    let two = T::lit(2.0);
    let positive_below = two / (e * n * d);
    let small_below = two / (e.powf(e + T::one()) * n * d);
    r.val("part_i", -d * volume);
    r.val("part_ii_threshold", positive_below);
    r.val("part_iii_threshold", small_below);
    r.flag("part_i", true);
    r.flag("part_ii", volume < positive_below);
    let small = volume <= small_below;
    r.flag("part_iii", small);
    if small {
        let x = two / (e * n * d * volume);
        r.val("part_iii", two / n * (x.ln() - x.ln().ln()));
    }
    Ok(r)
}

/// `(2/N)(ln k + ln(2/(eNd_N|Ω|)) − ln ln(2k/(eNd_N|Ω|)))`.
fn lambda_k_formula<T: Real>(constants: &DimensionConstants<T>, volume: T, k: usize) -> T {
    let two = T::lit(2.0);
    let s = T::E() * constants.n() * constants.d_n * volume;
    let kf = T::from_count(k);
    two / constants.n() * (kf.ln() + (two / s).ln() - (two * kf / s).ln().ln())
}

/// Lower bounds on `Σ_{i≤k} λ_i`.
pub fn lower_bound_sum<T: Real>(constants: &DimensionConstants<T>, volume: T, k: usize) -> Result<BoundReport> {
    check_volume("lower_bound_sum", volume)?;
    check_k("lower_bound_sum", k)?;
    let mut r = BoundReport::new(BoundKind::SumLower, "lower_bound_sum");
    base_context(&mut r, constants);
    r.ctx("volume", volume.to_f64_lossy());
    r.ctx("k", k);
    let kf = T::from_count(k);
    let positive_above = positivity_index_threshold(constants, volume);
    let large_from = positive_above * T::E().powf(T::E());
    r.val("part_i", -constants.d_n * volume);
    r.val("part_ii_threshold", positive_above);
    r.val("part_iii_threshold", large_from);
    r.flag("part_i", true);
    r.flag("part_ii", kf > positive_above);
    let large = kf >= large_from;
    r.flag("part_iii", large);
    if large {
        r.val("part_iii", kf * lambda_k_formula(constants, volume, k));
    }
    Ok(r)
}

/// Lower bounds on `λ_k`, the sum bound averaged over `k`.
pub fn lower_bound_lambda_k<T: Real>(constants: &DimensionConstants<T>, volume: T, k: usize) -> Result<BoundReport> {
    check_volume("lower_bound_lambda_k", volume)?;
    check_k("lower_bound_lambda_k", k)?;
    let mut r = BoundReport::new(BoundKind::LambdaKLower, "lower_bound_lambda_k");
    base_context(&mut r, constants);
    r.ctx("volume", volume.to_f64_lossy());
    r.ctx("k", k);
    let kf = T::from_count(k);
    let positive_from = positivity_index_threshold(constants, volume);
    let large_from = positive_from * T::E().powf(T::E());
    r.val("positive_threshold", positive_from);
    r.val("bound_threshold", large_from);
    r.flag("positive", kf >= positive_from);
    let large = kf >= large_from;
    r.flag("bound", large);
    if large {
        r.val("bound", lambda_k_formula(constants, volume, k));
    }
    Ok(r)
}

/// `z_1(R)` in the chosen variant.
pub fn z1<T: Real>(constants: &DimensionConstants<T>, radius: T, c0: T, variant: Variant) -> T {
    let w = constants.omega;
    let inner = match variant {
        Variant::Statement => c0,
        Variant::Proof => constants.n() * c0,
    } / (T::lit(2.0) * w * radius);
    constants.rho_n + w * T::LN_2() + T::lit(4.0) * c0 / radius * (T::one() + inner)
}

/// `ω_{N−1} ln(1/R) + z_1(R)`, the large-domain upper bound on `λ_1`.
pub fn upper_bound_lambda1_large<T: Real>(
    constants: &DimensionConstants<T>,
    radius: T,
    c0: T,
    variant: Variant,
) -> Result<BoundReport> {
    check_c0("upper_bound_lambda1_large", c0)?;
    if !(radius > T::zero()) {
        return Err(Error::domain("upper_bound_lambda1_large", format!("need R > 0, got {radius}")));
    }
    let mut r = BoundReport::new(BoundKind::Lambda1UpperLarge, "upper_bound_lambda1_large");
    base_context(&mut r, constants);
    r.ctx("radius", radius.to_f64_lossy());
    r.ctx("c0", c0.to_f64_lossy());
    r.ctx("variant", variant.name());
    let min_radius = T::lit(2.0).max(constants.n() * c0 / (T::lit(2.0) * constants.omega));
    r.val("radius_threshold", min_radius);
    let ok = radius >= min_radius;
    r.flag("radius", ok);
    if ok {
        let z = z1(constants, radius, c0, variant);
        r.val("z1", z);
        r.val("bound", constants.omega * radius.recip().ln() + z);
    }
    Ok(r)
}

/// `c_2 = 81 N c_0 / (2ω_{N−1}) + 4 ln 2`.
pub fn c2<T: Real>(constants: &DimensionConstants<T>, c0: T) -> T {
    T::lit(81.0) * constants.n() * c0 / (T::lit(2.0) * constants.omega) + T::lit(4.0) * T::LN_2()
}

/// `4 ln(1/R) + 2c_2 + ρ_N`, the small-domain upper bound on `λ_1`.
pub fn upper_bound_lambda1_small<T: Real>(constants: &DimensionConstants<T>, radius: T, c0: T) -> Result<BoundReport> {
    if !(radius > T::zero() && radius < T::lit(0.25)) {
        return Err(Error::domain(
            "upper_bound_lambda1_small",
            format!("need 0 < R < 1/4, got {radius}"),
        ));
    }
    check_c0("upper_bound_lambda1_small", c0)?;
    let mut r = BoundReport::new(BoundKind::Lambda1UpperSmall, "upper_bound_lambda1_small");
    base_context(&mut r, constants);
    r.ctx("radius", radius.to_f64_lossy());
    r.ctx("c0", c0.to_f64_lossy());
    let (n, w) = (constants.n(), constants.omega);
    let c2 = c2(constants, c0);
    let c1 = T::lit(2.0) * c2 + constants.rho_n;
    r.flag("radius", true);
    r.val("c2", c2);
    r.val("c1", c1);
    r.val("bound", T::lit(4.0) * radius.recip().ln() + c1);
    let quarter = T::lit(0.25);
    r.val("sigma", (quarter * radius).min(T::lit(2.0) * radius * w / (n * c0)));
    r.val("sigma_proof", radius * quarter.min(w / (T::lit(2.0) * n * c0)));
    Ok(r)
}

/// Upper bound on `Σ_{i≤k} λ_i`.
pub fn upper_bound_sum<T: Real>(
    constants: &DimensionConstants<T>,
    volume: T,
    k: usize,
    variant: Variant,
) -> Result<BoundReport> {
    check_volume("upper_bound_sum", volume)?;
    check_k("upper_bound_sum", k)?;
    let mut r = BoundReport::new(BoundKind::SumUpper, "upper_bound_sum");
    base_context(&mut r, constants);
    r.ctx("volume", volume.to_f64_lossy());
    r.ctx("k", k);
    r.ctx("variant", variant.name());
    let threshold = positivity_index_threshold(constants, volume);
    let kf = T::from_count(k);
    r.val("k_threshold", threshold);
    r.val("k0", threshold.ceil().max(T::one()));
    let factor = match variant {
        Variant::Statement => T::one(),
        Variant::Proof => T::lit(2.0),
    };
    let p = factor * constants.p_n / volume;
    let w = factor * constants.omega / volume.sqrt();
    let k1 = kf + T::one();
    let value = T::lit(2.0) * kf / constants.n() * (k1.ln() + p.ln() + w * (p * k1).ln().ln());
    let ok = kf > threshold;
    r.flag("k", ok);
    r.flag("log_argument", value.is_finite());
    if ok && value.is_finite() {
        r.val("bound", value);
    }
    Ok(r)
}

/// [`upper_bound_sum`] with the test-function scale `σ_1` of the domain recorded.
pub fn upper_bound_sum_for_domain<T: Real>(
    constants: &DimensionConstants<T>,
    domain: &Domain<T>,
    k: usize,
    variant: Variant,
) -> Result<BoundReport> {
    let mut r = upper_bound_sum(constants, domain.volume(), k, variant)?;
    r.ctx("domain", domain.describe());
    r.val("sigma_one", sigma_one(domain, RampProfile::SmoothRamp)?);
    r.ctx("sigma_one_rule", "halving from the inner-subdomain inradius until ∫w² > |Ω|/2");
    Ok(r)
}

/// Profiles `f` with `0 ≤ f ≤ M_1` for the functional inequality.
#[derive(Debug, Clone, PartialEq)]
pub enum Lemma22Profile<T> {
    /// `f = M_1 1_{B_a}`, integrated in closed form.
    BallIndicator { a: T, m1: T },
    /// Piecewise constant on cubes of side `h` with the given lower corners.
    GridSamples {
        dim: usize,
        h: T,
        corners: Vec<[T; 2]>,
        values: Vec<T>,
        m1: T,
    },
}

/// `∫ ln|z|` over `[x0, x1] × [y0, y1]`, or over `[x0, x1]` when `dim = 1`.
pub fn cell_log_integral<T: Real>(dim: usize, lo: [T; 2], h: T) -> T {
    let zero = T::zero();
    if dim == 1 {
        let f = |z: T| if z == zero { zero } else { z * z.abs().ln() - z };
        return f(lo[0] + h) - f(lo[0]);
    }
    // ∂²H/∂x∂y = ln(x² + y²)
    let big_h = |x: T, y: T| {
        let mut v = zero;
        let r2 = x * x + y * y;
        if x != zero && y != zero {
            v += x * y * r2.ln() - T::lit(3.0) * x * y;
        }
        if x != zero {
            v += x * x * (y / x).atan();
        }
        if y != zero {
            v += y * y * (x / y).atan();
        }
        v
    };
    let (x0, y0) = (lo[0], lo[1]);
    let (x1, y1) = (x0 + h, y0 + h);
    T::lit(0.5) * (big_h(x1, y1) - big_h(x0, y1) - big_h(x1, y0) + big_h(x0, y0))
}

/// Evaluates `M_2 = 2∫ ln|z| f` and the three inequalities with their slacks.
pub fn lemma22_check<T: Real>(profile: &Lemma22Profile<T>, constants: &DimensionConstants<T>) -> Result<BoundReport> {
    let n = constants.n();
    let w = constants.omega;
    let two = T::lit(2.0);
    let (integral, m1, m2) = match profile {
        Lemma22Profile::BallIndicator { a, m1 } => {
            if !(*a > T::zero() && *m1 > T::zero()) {
                return Err(Error::precondition("lemma22_check", "ball profile needs a > 0 and M1 > 0"));
            }
            let vol = w * a.powi(constants.dim as i32) / n;
            (*m1 * vol, *m1, two * *m1 * vol * (a.ln() - n.recip()))
        }
        Lemma22Profile::GridSamples {
            dim,
            h,
            corners,
            values,
            m1,
        } => {
            if *dim != constants.dim || corners.len() != values.len() || !(*h > T::zero()) {
                return Err(Error::precondition("lemma22_check", "inconsistent grid profile"));
            }
            if values.iter().any(|v| !(*v >= T::zero() && *v <= *m1)) || !(*m1 > T::zero()) {
                return Err(Error::precondition("lemma22_check", "profile must satisfy 0 ≤ f ≤ M1"));
            }
            let cell = h.powi(*dim as i32);
            let mut integral = T::zero();
            let mut m2 = T::zero();
            for (c, v) in corners.iter().zip(values) {
                integral += *v * cell;
                m2 += two * *v * cell_log_integral(*dim, *c, *h);
            }
            (integral, *m1, m2)
        }
    };
    let mut r = BoundReport::new(BoundKind::Lemma22, "lemma22_check");
    base_context(&mut r, constants);
    r.ctx(
        "profile",
        match profile {
            Lemma22Profile::BallIndicator { .. } => "ball_indicator",
            Lemma22Profile::GridSamples { .. } => "grid_samples",
        },
    );
    r.val("integral", integral);
    r.val("m1", m1);
    r.val("m2", m2);
    let tol = SLACK_TOLERANCE;

    let bound_i = -(two * w / (n * n)) * m1;
    r.val("slack_i", m2 - bound_i);
    r.verdict("part_i", "≥", bound_i.to_f64_lossy() - tol, m2.to_f64_lossy(), false);

    let bound_ii = T::E() * w / n * m1 + n / two * m2;
    r.val("slack_ii", bound_ii - integral);
    r.verdict("part_ii", "≤", bound_ii.to_f64_lossy() + tol, integral.to_f64_lossy(), false);

    let ratio_needed = two * T::E() * T::E() * w / (n * n);
    let applicable = m2 / m1 >= ratio_needed * (T::one() - T::lit(THRESHOLD_ROUNDING));
    r.flag("part_iii", applicable);
    if applicable {
        let x = (n * n * m2 / (two * T::E() * m1 * w)).max(T::E());
        let bound_iii = n * m2 / two / (x.ln() - x.ln().ln());
        r.val("slack_iii", bound_iii - integral);
        r.verdict("part_iii", "≤", bound_iii.to_f64_lossy() + tol, integral.to_f64_lossy(), false);
    }
    Ok(r)
}

/// Trend of `𝒩(t) e^{−(N/2±δ)t}` between the first and last quartile of `t ∈ [λ_2, λ_k]`.
pub fn counting_envelope<T: Real>(spectrum: &Spectrum<T>, delta: T, constants: &DimensionConstants<T>) -> Result<BoundReport> {
    if spectrum.len() < 10 {
        return Err(Error::precondition(
            "counting_envelope",
            format!("need at least 10 eigenvalues, got {}", spectrum.len()),
        ));
    }
    if !(delta >= T::zero()) {
        return Err(Error::domain("counting_envelope", format!("need delta ≥ 0, got {delta}")));
    }
    let samples = envelope_samples(spectrum, constants.dim, delta, ENVELOPE_SAMPLES)?;
    let q = samples.len() / 4;
    let mean = |s: &[crate::spectrum::EnvelopeSample], f: fn(&crate::spectrum::EnvelopeSample) -> f64| {
        s.iter().map(f).sum::<f64>() / s.len() as f64
    };
    let (head, tail) = (&samples[..q], &samples[samples.len() - q..]);
    let dec_first = mean(head, |s| s.decaying);
    let dec_last = mean(tail, |s| s.decaying);
    let grow_first = mean(head, |s| s.growing);
    let grow_last = mean(tail, |s| s.growing);
    let mut r = BoundReport::new(BoundKind::CountingEnvelope, "counting_envelope");
    base_context(&mut r, constants);
    r.ctx("delta", delta.to_f64_lossy());
    r.ctx("k", spectrum.len());
    r.ctx("samples", samples.len());
    r.values.insert("t_min".into(), samples[0].t);
    r.values.insert("t_max".into(), samples[samples.len() - 1].t);
    r.values.insert("decaying_first_quartile".into(), dec_first);
    r.values.insert("decaying_last_quartile".into(), dec_last);
    r.values.insert("growing_first_quartile".into(), grow_first);
    r.values.insert("growing_last_quartile".into(), grow_last);
    r.flag("length", true);
    r.verdict("decaying", "<", dec_first, dec_last, false);
    r.verdict("growing", ">", grow_first, grow_last, false);
    Ok(r)
}
