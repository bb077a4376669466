//! Bounded domains (interval, box, ball) in one or two dimensions.
//!
//! Every quantity here has a closed form: signed distance, level-set
//! (foliation) measures, collar volumes, and the minimal constant `c_0` of the
//! two-sided foliation hypotheses used by the large- and small-domain upper
//! bounds on the principal eigenvalue.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;

/// Volume fraction of the inner subdomain used by the plane-wave test functions.
pub const INNER_FRACTION: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Interval,
    Box,
    Ball,
}

/// A bounded open region of `ℝ^N`, `N ∈ {1, 2}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain<T> {
    Interval { lo: T, hi: T },
    Box { dim: usize, corner: [T; 2], sides: [T; 2] },
    Ball { dim: usize, center: [T; 2], radius: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FoliationSide {
    /// `T_ν^+ = {ρ = ν}`
    Inner,
    /// `T_ν^- = {ρ = −ν}`
    Outer,
    /// `T_ν^+ ∪ T_ν^-`
    Both,
}

/// Which foliation hypothesis `minimal_c0` calibrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum C0Regime {
    /// Inner sheets `T_ν^+` for `ν ∈ [0, 1/2)`.
    Large,
    /// Both sheets `T_ν` for `|ν| ≤ R/4`.
    Small,
}

fn check_dim(op: &'static str, dim: usize) -> Result<()> {
    if dim == 1 || dim == 2 {
        Ok(())
    } else {
        Err(Error::Dimension {
            op,
            dim,
            detail: "geometry supports N ∈ {1, 2}".into(),
        })
    }
}

fn check_positive<T: Real>(op: &'static str, what: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{what} must be finite and > 0, got {v}")))
    }
}

impl<T: Real> Domain<T> {
    pub fn interval(lo: T, hi: T) -> Result<Self> {
        check_positive("Domain::interval", "length", hi - lo)?;
        Ok(Domain::Interval { lo, hi })
    }

    /// Interval of length `length` centred at the origin.
    pub fn centered_interval(length: T) -> Result<Self> {
        let half = T::lit(0.5) * length;
        Self::interval(-half, half)
    }

    pub fn ball(dim: usize, center: [T; 2], radius: T) -> Result<Self> {
        check_dim("Domain::ball", dim)?;
        check_positive("Domain::ball", "radius", radius)?;
        let mut center = center;
        if dim == 1 {
            center[1] = T::zero();
        }
        Ok(Domain::Ball { dim, center, radius })
    }

    pub fn boxed(dim: usize, corner: [T; 2], sides: [T; 2]) -> Result<Self> {
        check_dim("Domain::boxed", dim)?;
        let (mut corner, mut sides) = (corner, sides);
        if dim == 1 {
            corner[1] = T::zero();
            sides[1] = T::one();
        }
        for s in &sides[..dim] {
            check_positive("Domain::boxed", "side length", *s)?;
        }
        Ok(Domain::Box { dim, corner, sides })
    }

    /// Box centred at the origin with the given side lengths.
    pub fn centered_box(dim: usize, sides: [T; 2]) -> Result<Self> {
        let half = T::lit(0.5);
        Self::boxed(dim, [-half * sides[0], -half * sides[1]], sides)
    }

    pub fn kind(&self) -> DomainKind {
        match self {
            Domain::Interval { .. } => DomainKind::Interval,
            Domain::Box { .. } => DomainKind::Box,
            Domain::Ball { .. } => DomainKind::Ball,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Box { dim, .. } | Domain::Ball { dim, .. } => *dim,
        }
    }

    pub fn center(&self) -> [T; 2] {
        let half = T::lit(0.5);
        match self {
            Domain::Interval { lo, hi } => [half * (*lo + *hi), T::zero()],
            Domain::Box { corner, sides, .. } => {
                [corner[0] + half * sides[0], corner[1] + half * sides[1]]
            }
            Domain::Ball { center, .. } => *center,
        }
    }

    /// Lengths of the sides of a box-shaped representation: `(length, 0)` in 1D,
    /// sorted ascending in 2D. Balls do not have one and return `None`.
    fn rect_sides(&self) -> Option<(T, T)> {
        match self {
            Domain::Interval { lo, hi } => Some((*hi - *lo, T::zero())),
            Domain::Box { dim: 1, sides, .. } => Some((sides[0], T::zero())),
            Domain::Box { sides, .. } => Some((sides[0].min(sides[1]), sides[0].max(sides[1]))),
            Domain::Ball { dim: 1, radius, .. } => Some((T::lit(2.0) * *radius, T::zero())),
            Domain::Ball { .. } => None,
        }
    }

    pub fn volume(&self) -> T {
        match self {
            Domain::Ball { dim: 2, radius, .. } => T::PI() * *radius * *radius,
            _ => {
                let (a, b) = self.rect_sides().expect("rectangular domain");
                if self.dim() == 1 {
                    a
                } else {
                    a * b
                }
            }
        }
    }

    /// Largest value of the signed distance, attained at the centre.
    pub fn inradius(&self) -> T {
        match self {
            Domain::Ball { radius, .. } => *radius,
            _ => T::lit(0.5) * self.rect_sides().expect("rectangular domain").0,
        }
    }

    /// Radius of the smallest ball about `center()` containing the domain.
    pub fn circumradius(&self) -> T {
        let half = T::lit(0.5);
        match self {
            Domain::Ball { radius, .. } => *radius,
            Domain::Box { dim: 2, sides, .. } => half * sides[0].hypot(sides[1]),
            _ => self.inradius(),
        }
    }

    /// Axis-aligned bounding box as `(lower, upper)` corners.
    pub fn bounding_box(&self) -> ([T; 2], [T; 2]) {
        match self {
            Domain::Interval { lo, hi } => ([*lo, T::zero()], [*hi, T::zero()]),
            Domain::Box { corner, sides, .. } => {
                (*corner, [corner[0] + sides[0], corner[1] + sides[1]])
            }
            Domain::Ball { dim, center, radius } => {
                let y = if *dim == 2 { *radius } else { T::zero() };
                (
                    [center[0] - *radius, center[1] - y],
                    [center[0] + *radius, center[1] + y],
                )
            }
        }
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    pub fn signed_distance(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.dim());
        match self {
            Domain::Interval { lo, hi } => (x[0] - *lo).min(*hi - x[0]),
            Domain::Ball { dim, center, radius } => {
                let mut r2 = T::zero();
                for i in 0..*dim {
                    let d = x[i] - center[i];
                    r2 += d * d;
                }
                *radius - r2.sqrt()
            }
            Domain::Box { dim, corner, sides } => {
                let mut inside = T::infinity();
                let mut outside2 = T::zero();
                for i in 0..*dim {
                    let below = corner[i] - x[i];
                    let above = x[i] - (corner[i] + sides[i]);
                    inside = inside.min((-below).min(-above));
                    let out = below.max(above).max(T::zero());
                    outside2 += out * out;
                }
                if outside2 > T::zero() {
                    -outside2.sqrt()
                } else {
                    inside
                }
            }
        }
    }

    /// `H^{N−1}` measure of the level sets at distance `nu ≥ 0` from the boundary
    /// (counting measure in 1D).
    pub fn foliation_measure(&self, nu: T, side: FoliationSide) -> Result<T> {
        if nu.is_nan() || nu < T::zero() {
            return Err(Error::domain("foliation_measure", format!("need nu ≥ 0, got {nu}")));
        }
        Ok(match side {
            FoliationSide::Inner => self.inner_sheet(nu),
            FoliationSide::Outer => self.outer_sheet(nu),
            // at ν = 0 both sheets are the boundary itself
            FoliationSide::Both if nu == T::zero() => self.inner_sheet(nu),
            FoliationSide::Both => self.inner_sheet(nu) + self.outer_sheet(nu),
        })
    }

    fn inner_sheet(&self, nu: T) -> T {
        let two = T::lit(2.0);
        match self {
            Domain::Ball { dim: 2, radius, .. } => {
                if nu <= *radius {
                    two * T::PI() * (*radius - nu)
                } else {
                    T::zero()
                }
            }
            _ => {
                let (a, b) = self.rect_sides().expect("rectangular domain");
                let half = T::lit(0.5) * a;
                if self.dim() == 1 {
                    if nu < half {
                        two
                    } else if nu == half {
                        T::one()
                    } else {
                        T::zero()
                    }
                } else if nu < half {
                    two * (a + b) - T::lit(8.0) * nu
                } else if nu == half {
                    b - a
                } else {
                    T::zero()
                }
            }
        }
    }

    fn outer_sheet(&self, nu: T) -> T {
        let two = T::lit(2.0);
        match self {
            Domain::Ball { dim: 2, radius, .. } => two * T::PI() * (*radius + nu),
            _ => {
                let (a, b) = self.rect_sides().expect("rectangular domain");
                if self.dim() == 1 {
                    two
                } else {
                    two * (a + b) + two * T::PI() * nu
                }
            }
        }
    }

    /// Measure of the inner collar `{0 < ρ < σ}`.
    pub fn collar_volume(&self, sigma: T) -> Result<T> {
        check_positive("collar_volume", "sigma", sigma)?;
        let zero = T::zero();
        Ok(match self {
            Domain::Ball { dim: 2, radius, .. } => {
                let core = (*radius - sigma).max(zero);
                T::PI() * (*radius * *radius - core * core)
            }
            _ => {
                let (a, b) = self.rect_sides().expect("rectangular domain");
                let two = T::lit(2.0);
                if self.dim() == 1 {
                    a - (a - two * sigma).max(zero)
                } else {
                    a * b - (a - two * sigma).max(zero) * (b - two * sigma).max(zero)
                }
            }
        })
    }

    /// Concentric shrunken copy of the same kind with volume `fraction · |Ω|`.
    pub fn inner_subdomain(&self, fraction: T) -> Result<Self> {
        if !(fraction > T::zero() && fraction < T::one()) {
            return Err(Error::domain(
                "inner_subdomain",
                format!("fraction must lie in (0, 1), got {fraction}"),
            ));
        }
        let scale = fraction.powf(T::from_count(self.dim()).recip());
        let c = self.center();
        Ok(match self {
            Domain::Interval { lo, hi } => {
                let half = T::lit(0.5) * (*hi - *lo) * scale;
                Domain::Interval {
                    lo: c[0] - half,
                    hi: c[0] + half,
                }
            }
            Domain::Ball { dim, radius, .. } => Domain::Ball {
                dim: *dim,
                center: c,
                radius: *radius * scale,
            },
            Domain::Box { dim, sides, .. } => {
                let mut new_sides = *sides;
                let mut corner = c;
                for i in 0..*dim {
                    new_sides[i] = sides[i] * scale;
                    corner[i] = c[i] - T::lit(0.5) * new_sides[i];
                }
                if *dim == 1 {
                    corner[1] = T::zero();
                }
                Domain::Box {
                    dim: *dim,
                    corner,
                    sides: new_sides,
                }
            }
        })
    }

    /// True when the closed axis-aligned cell `[lo, lo + h]^N` lies in the closed domain.
    pub fn contains_cell(&self, lo: &[T], h: T) -> bool {
        let tol = T::lit(1e-12) * (T::one() + self.circumradius());
        match self {
            Domain::Ball { dim, center, radius } => {
                // farthest corner from the centre
                let mut r2 = T::zero();
                for i in 0..*dim {
                    let d0 = (lo[i] - center[i]).abs();
                    let d1 = (lo[i] + h - center[i]).abs();
                    let d = d0.max(d1);
                    r2 += d * d;
                }
                r2.sqrt() <= *radius + tol
            }
            _ => {
                let (bl, bu) = self.bounding_box();
                (0..self.dim()).all(|i| lo[i] >= bl[i] - tol && lo[i] + h <= bu[i] + tol)
            }
        }
    }

    /// `∫ φ(ρ(x)) dx` over the domain by the co-area formula (`|∇ρ| = 1`),
    /// for `φ` equal to one on `[sigma, ∞)`.
    fn coarea_integral(&self, sigma: T, phi: impl Fn(T) -> T) -> T {
        let inr = self.inradius();
        let top = sigma.min(inr);
        let rule = GaussLegendre::<T>::new(32);
        let layer = rule.integrate(T::zero(), top, |t| phi(t) * self.inner_sheet(t));
        let core = if sigma < inr {
            self.volume() - self.collar_volume(sigma).expect("sigma > 0")
        } else {
            T::zero()
        };
        layer + core
    }

    pub fn describe(&self) -> String {
        match self {
            Domain::Interval { lo, hi } => format!("interval({lo}, {hi})"),
            Domain::Box { dim, corner, sides } => {
                if *dim == 1 {
                    format!("box1d(corner={}, side={})", corner[0], sides[0])
                } else {
                    format!(
                        "box2d(corner=({}, {}), sides=({}, {}))",
                        corner[0], corner[1], sides[0], sides[1]
                    )
                }
            }
            Domain::Ball { dim, center, radius } => {
                if *dim == 1 {
                    format!("ball1d(center={}, radius={radius})", center[0])
                } else {
                    format!("ball2d(center=({}, {}), radius={radius})", center[0], center[1])
                }
            }
        }
    }
}

/// Least `c_0 ≥ 1` for which the two-sided foliation hypothesis holds.
///
/// The domain must be sandwiched as `B_R ⊂ Ω ⊂ B_{2R}` about its centre, with
/// `R` the inradius. The foliation measures are monotone on the admissible
/// range except for the jump of `ν ↦ H^{N−1}(T_ν)` at `ν = 0`, so the extremes
/// are taken over a dense grid together with the one-sided limits.
pub fn minimal_c0<T: Real>(domain: &Domain<T>, regime: C0Regime) -> Result<T> {
    let dim = domain.dim();
    if dim < 2 {
        return Err(Error::Dimension {
            op: "minimal_c0",
            dim,
            detail: "foliation hypotheses are stated for N ≥ 2".into(),
        });
    }
    let r = domain.inradius();
    if domain.circumradius() > T::lit(2.0) * r * (T::one() + T::lit(1e-12)) {
        return Err(Error::precondition(
            "minimal_c0",
            format!("domain is not contained in B_2R with R = {r}"),
        ));
    }
    let scale = r.powi(dim as i32 - 1);
    let samples = 2000usize;
    let mut measures = Vec::with_capacity(samples + 3);
    match regime {
        C0Regime::Large => {
            let half = T::lit(0.5);
            if r <= half {
                return Err(Error::precondition(
                    "minimal_c0",
                    format!("inner sheets for ν up to 1/2 need inradius > 1/2, got {r}"),
                ));
            }
            for i in 0..samples {
                let nu = half * T::from_count(i) / T::from_count(samples);
                measures.push(domain.foliation_measure(nu, FoliationSide::Inner)?);
            }
            // left limit at the open end ν → 1/2
            measures.push(domain.inner_sheet(half));
        }
        C0Regime::Small => {
            let top = T::lit(0.25) * r;
            measures.push(domain.foliation_measure(T::zero(), FoliationSide::Both)?);
            // right limit at ν → 0⁺: both sheets at the boundary
            measures.push(domain.inner_sheet(T::zero()) + domain.outer_sheet(T::zero()));
            for i in 1..=samples {
                let nu = top * T::from_count(i) / T::from_count(samples);
                measures.push(domain.foliation_measure(nu, FoliationSide::Both)?);
            }
        }
    }
    let mut c0 = T::one();
    for m in measures {
        if m <= T::zero() {
            return Err(Error::precondition("minimal_c0", "foliation sheet with zero measure"));
        }
        c0 = c0.max(m / scale).max(scale / m);
    }
    Ok(c0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RampProfile {
    /// `η(t) = min{max{t, 0}, 1}`
    Clamp,
    /// `3t² − 2t³` on `[0, 1]`, clamped outside.
    SmoothRamp,
}

impl RampProfile {
    pub fn eval<T: Real>(self, t: T) -> T {
        let t = t.max(T::zero()).min(T::one());
        match self {
            RampProfile::Clamp => t,
            RampProfile::SmoothRamp => t * t * (T::lit(3.0) - T::lit(2.0) * t),
        }
    }

    /// Supremum of `|η'|`.
    pub fn lipschitz<T: Real>(self) -> T {
        match self {
            RampProfile::Clamp => T::one(),
            RampProfile::SmoothRamp => T::lit(1.5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceBoundary {
    DomainBoundary,
    /// Boundary of the concentric subdomain holding `INNER_FRACTION` of the volume.
    InnerSubdomainBoundary,
}

/// Boundary-layer test function `w_σ(x) = η(ρ(x)/σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFunctionSpec<T> {
    pub sigma: T,
    pub profile: RampProfile,
    pub reference: ReferenceBoundary,
}

impl<T: Real> TestFunctionSpec<T> {
    pub fn clamp(sigma: T) -> Self {
        Self {
            sigma,
            profile: RampProfile::Clamp,
            reference: ReferenceBoundary::DomainBoundary,
        }
    }

    fn reference_domain(&self, domain: &Domain<T>) -> Domain<T> {
        match self.reference {
            ReferenceBoundary::DomainBoundary => domain.clone(),
            ReferenceBoundary::InnerSubdomainBoundary => domain
                .inner_subdomain(T::lit(INNER_FRACTION))
                .expect("fixed fraction in (0, 1)"),
        }
    }
}

/// Evaluates `w_σ` at `x`.
pub fn test_function<T: Real>(domain: &Domain<T>, spec: &TestFunctionSpec<T>, x: &[T]) -> T {
    let reference = spec.reference_domain(domain);
    spec.profile.eval(reference.signed_distance(x) / spec.sigma)
}

/// Returns `(∫ w_σ, ∫ w_σ²)` over the domain, exact up to Gauss quadrature of polynomials.
pub fn test_function_moments<T: Real>(domain: &Domain<T>, spec: &TestFunctionSpec<T>) -> (T, T) {
    let reference = spec.reference_domain(domain);
    let s = spec.sigma;
    let first = reference.coarea_integral(s, |t| spec.profile.eval(t / s));
    let second = reference.coarea_integral(s, |t| {
        let w = spec.profile.eval(t / s);
        w * w
    });
    (first, second)
}

/// Largest `σ = σ_start / 2^j` with `∫ w_σ² > |Ω|/2`, for test functions built on
/// the inner subdomain, starting from its inradius.
pub fn sigma_one<T: Real>(domain: &Domain<T>, profile: RampProfile) -> Result<T> {
    let inner = domain.inner_subdomain(T::lit(INNER_FRACTION))?;
    let target = T::lit(0.5) * domain.volume();
    let mut sigma = inner.inradius();
    for _ in 0..200 {
        let spec = TestFunctionSpec {
            sigma,
            profile,
            reference: ReferenceBoundary::InnerSubdomainBoundary,
        };
        let (_, second) = test_function_moments(domain, &spec);
        if second > target {
            return Ok(sigma);
        }
        sigma *= T::lit(0.5);
    }
    Err(Error::Convergence {
        op: "sigma_one",
        iterations: 200,
        index: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn unit_interval() -> Domain<f64> {
        Domain::interval(-1.0, 1.0).unwrap()
    }

    fn disc(r: f64) -> Domain<f64> {
        Domain::ball(2, [0.0, 0.0], r).unwrap()
    }

    #[test]
    fn signed_distance_examples() {
        let b = Domain::ball(2, [0.0, 0.0], 2.0).unwrap();
        assert_abs_diff_eq!(b.signed_distance(&[1.5, 0.0]), 0.5);
        assert_abs_diff_eq!(b.signed_distance(&[0.0, 3.0]), -1.0);
        assert_abs_diff_eq!(unit_interval().signed_distance(&[0.0]), 1.0);
        assert_abs_diff_eq!(unit_interval().signed_distance(&[1.0]), 0.0);
        let sq = Domain::centered_box(2, [2.0, 4.0]).unwrap();
        assert_abs_diff_eq!(sq.signed_distance(&[0.0, 0.0]), 1.0);
        assert_abs_diff_eq!(sq.signed_distance(&[2.0, 3.0]), -(2.0_f64).sqrt());
        assert_abs_diff_eq!(sq.signed_distance(&[0.0, 2.5]), -0.5);
    }

    #[test]
    fn signed_distance_is_one_lipschitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let domains = [
            unit_interval(),
            disc(1.5),
            Domain::centered_box(2, [1.0, 3.0]).unwrap(),
            Domain::ball(1, [0.5, 0.0], 0.7).unwrap(),
        ];
        for d in &domains {
            let n = d.dim();
            for _ in 0..10_000 {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
                let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
                let dist = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                let diff = (d.signed_distance(&x) - d.signed_distance(&y)).abs();
                assert!(diff <= dist + 1e-12, "{}: {diff} > {dist}", d.describe());
            }
        }
    }

    #[test]
    fn foliation_examples() {
        let b = disc(4.0);
        assert_abs_diff_eq!(b.foliation_measure(0.5, FoliationSide::Inner).unwrap(), 2.0 * PI * 3.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.foliation_measure(0.5, FoliationSide::Inner).unwrap(), 21.991, epsilon = 1e-3);
        assert_eq!(unit_interval().foliation_measure(0.3, FoliationSide::Inner).unwrap(), 2.0);
        assert_eq!(unit_interval().foliation_measure(1.0, FoliationSide::Inner).unwrap(), 1.0);
        assert_eq!(unit_interval().foliation_measure(1.5, FoliationSide::Inner).unwrap(), 0.0);
        assert_abs_diff_eq!(disc(1.0).foliation_measure(0.25, FoliationSide::Both).unwrap(), 4.0 * PI, epsilon = 1e-12);
        // the two sheets coincide at ν = 0
        assert_abs_diff_eq!(disc(1.0).foliation_measure(0.0, FoliationSide::Both).unwrap(), 2.0 * PI, epsilon = 1e-12);
        assert!(disc(1.0).foliation_measure(-0.1, FoliationSide::Inner).is_err());
        let rect = Domain::centered_box(2, [1.0, 2.0]).unwrap();
        assert_abs_diff_eq!(rect.foliation_measure(0.5, FoliationSide::Inner).unwrap(), 1.0);
        assert_abs_diff_eq!(rect.foliation_measure(0.25, FoliationSide::Inner).unwrap(), 4.0);
        assert_abs_diff_eq!(rect.foliation_measure(1.0, FoliationSide::Outer).unwrap(), 6.0 + 2.0 * PI);
    }

    #[test]
    fn collar_examples() {
        assert_abs_diff_eq!(unit_interval().collar_volume(0.25).unwrap(), 0.5);
        assert_abs_diff_eq!(disc(1.0).collar_volume(0.5).unwrap(), 0.75 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(disc(1.0).collar_volume(3.0).unwrap(), PI, epsilon = 1e-14);
        assert_abs_diff_eq!(unit_interval().collar_volume(5.0).unwrap(), 2.0);
        let sq = Domain::centered_box(2, [1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(sq.collar_volume(0.6).unwrap(), 1.0);
        assert!(sq.collar_volume(0.0).is_err());
    }

    #[test]
    fn coarea_matches_collar_volume() {
        let rule = GaussLegendre::<f64>::new(40);
        let domains = [disc(1.0), disc(3.0), unit_interval(), Domain::centered_box(2, [1.0, 2.5]).unwrap()];
        for d in &domains {
            for sigma in [0.05, 0.2, 0.45] {
                let layer = rule.integrate(0.0, sigma, |t| d.foliation_measure(t, FoliationSide::Inner).unwrap());
                let lhs = d.volume() - d.collar_volume(sigma).unwrap();
                assert!((lhs - (d.volume() - layer)).abs() <= 1e-8, "{}", d.describe());
            }
        }
    }

    #[test]
    fn minimal_c0_examples() {
        assert_abs_diff_eq!(minimal_c0(&disc(4.0), C0Regime::Large).unwrap(), 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(minimal_c0(&disc(0.1), C0Regime::Small).unwrap(), 4.0 * PI, epsilon = 1e-12);
        for r in [2.0, 3.0, 8.0, 32.0] {
            assert_abs_diff_eq!(minimal_c0(&disc(r), C0Regime::Large).unwrap(), 2.0 * PI, epsilon = 1e-12);
        }
        assert!(matches!(minimal_c0(&unit_interval(), C0Regime::Large), Err(Error::Dimension { .. })));
        // a long thin box is not sandwiched between B_R and B_2R
        let thin = Domain::centered_box(2, [1.0, 10.0]).unwrap();
        assert!(minimal_c0(&thin, C0Regime::Small).is_err());
        assert!(minimal_c0(&disc(0.4), C0Regime::Large).is_err());
    }

    #[test]
    fn minimal_c0_satisfies_hypotheses_pointwise() {
        let cases = [
            (disc(4.0), C0Regime::Large),
            (disc(0.1), C0Regime::Small),
            (Domain::centered_box(2, [5.0, 6.0]).unwrap(), C0Regime::Large),
            (Domain::centered_box(2, [0.2, 0.3]).unwrap(), C0Regime::Small),
        ];
        for (d, regime) in cases {
            let c0 = minimal_c0(&d, regime).unwrap();
            assert!(c0 >= 1.0);
            let r = d.inradius();
            for i in 0..100 {
                let (nu, side) = match regime {
                    C0Regime::Large => (0.5 * i as f64 / 100.0, FoliationSide::Inner),
                    C0Regime::Small => (0.25 * r * i as f64 / 99.0, FoliationSide::Both),
                };
                let m = d.foliation_measure(nu, side).unwrap();
                assert!(r / c0 <= m * (1.0 + 1e-12) && m <= c0 * r * (1.0 + 1e-12), "{} ν={nu}", d.describe());
            }
        }
    }

    #[test]
    fn test_function_examples() {
        let spec = TestFunctionSpec::clamp(0.25);
        assert_abs_diff_eq!(test_function(&unit_interval(), &spec, &[0.9]), 0.4, epsilon = 1e-14);
        assert_eq!(test_function(&unit_interval(), &spec, &[0.1]), 1.0);
        assert_eq!(test_function(&unit_interval(), &spec, &[1.5]), 0.0);
        let smooth = TestFunctionSpec {
            sigma: 0.4,
            profile: RampProfile::SmoothRamp,
            reference: ReferenceBoundary::DomainBoundary,
        };
        assert_abs_diff_eq!(test_function(&unit_interval(), &smooth, &[0.8]), 0.5, epsilon = 1e-14);
        let inner = TestFunctionSpec {
            reference: ReferenceBoundary::InnerSubdomainBoundary,
            ..spec
        };
        // the inner subdomain is (-3/4, 3/4)
        assert_eq!(test_function(&unit_interval(), &inner, &[0.8]), 0.0);
        assert_abs_diff_eq!(test_function(&unit_interval(), &inner, &[0.7]), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn test_function_lipschitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = disc(1.0);
        for profile in [RampProfile::Clamp, RampProfile::SmoothRamp] {
            let spec = TestFunctionSpec {
                sigma: 0.3,
                profile,
                reference: ReferenceBoundary::DomainBoundary,
            };
            let lip = profile.lipschitz::<f64>() / spec.sigma;
            assert!(lip <= 2.0 / spec.sigma);
            for _ in 0..10_000 {
                let x: [f64; 2] = [rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2)];
                let y = [rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2)];
                let dist = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
                let diff = (test_function(&d, &spec, &x) - test_function(&d, &spec, &y)).abs();
                assert!(diff <= lip * dist + 1e-12);
                let v = test_function(&d, &spec, &x);
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn inner_subdomain_examples() {
        let b = disc(1.0).inner_subdomain(0.75).unwrap();
        assert_abs_diff_eq!(b.inradius(), 3f64.sqrt() / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b.volume(), 0.75 * PI, epsilon = 1e-14);
        assert_eq!(unit_interval().inner_subdomain(0.75).unwrap(), Domain::Interval { lo: -0.75, hi: 0.75 });
        let sq = Domain::centered_box(2, [1.0, 1.0]).unwrap().inner_subdomain(0.75).unwrap();
        match sq {
            Domain::Box { sides, .. } => {
                assert_abs_diff_eq!(sides[0], 0.75f64.sqrt(), epsilon = 1e-14);
                assert_abs_diff_eq!(sides[1], 0.75f64.sqrt(), epsilon = 1e-14);
            }
            _ => panic!("kind changed"),
        }
        assert!(unit_interval().inner_subdomain(1.0).is_err());
    }

    #[test]
    fn moments_match_brute_force() {
        let d = disc(1.0);
        let spec = TestFunctionSpec::clamp(0.3);
        let (m1, m2) = test_function_moments(&d, &spec);
        // midpoint rule over the bounding square
        let n = 1000;
        let h = 2.0 / n as f64;
        let (mut b1, mut b2) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let x = [-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h];
                let w = test_function(&d, &spec, &x);
                b1 += w * h * h;
                b2 += w * w * h * h;
            }
        }
        assert!((m1 - b1).abs() < 2e-4, "{m1} vs {b1}");
        assert!((m2 - b2).abs() < 2e-4, "{m2} vs {b2}");
        // σ → 2R: w_σ = ρ/σ on the whole ball, ∫ρ² = π R⁴/6
        let spec = TestFunctionSpec::clamp(2.0);
        let (_, m2) = test_function_moments(&d, &spec);
        assert_abs_diff_eq!(m2, PI / 6.0 / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn sigma_one_condition() {
        for d in [disc(1.0), unit_interval(), Domain::centered_box(2, [1.0, 1.5]).unwrap()] {
            let s = sigma_one(&d, RampProfile::SmoothRamp).unwrap();
            let spec = TestFunctionSpec {
                sigma: s,
                profile: RampProfile::SmoothRamp,
                reference: ReferenceBoundary::InnerSubdomainBoundary,
            };
            let (m1, m2) = test_function_moments(&d, &spec);
            assert!(d.volume() > m1 && m1 >= m2 && m2 > 0.5 * d.volume());
        }
    }
}
