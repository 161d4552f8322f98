//! Representations of the Klein-bottle group `⟨a, b | a b a⁻¹ = b⁻¹⟩` that
//! send `a` to an orientation-reversing and `b` to an orientation-preserving
//! isometry, their normal forms, and the geometry of the completed end.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{ComplexValue, ExtendedIsometry};

/// Images `A = ρ(a)` and `B = ρ(b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleinRepresentation {
    a: ExtendedIsometry,
    b: ExtendedIsometry,
}

/// Tolerances used by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    /// `|I| ≤ band` counts as zero.
    pub band: f64,
    pub relation_tol: f64,
    /// Largest accepted imaginary part of a trace invariant, relative to
    /// `1 + |I|`.
    pub real_tol: f64,
    /// `B` closer than this to the identity is rejected.
    pub identity_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            band: 1e-8,
            relation_tol: 1e-8,
            real_tol: 1e-9,
            identity_tol: 1e-10,
        }
    }
}

/// Conjugacy class of a representation preserving the orientation type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KleinType {
    /// `A(z) = conj z + 1`, `B(z) = z + τi`.
    ParabolicNonDegenerate { tau: f64 },
    /// `A(z) = conj z`, `B(z) = z + τi`. Rescaling changes `τ`, which is
    /// reported as 1.
    ParabolicDegenerate { tau: f64 },
    /// `A(z) = e^l conj z`, `B(z) = e^{αi} z`, `l ≥ 0`, `α ∈ (0, π]`.
    TypeI { l: f64, alpha: f64 },
    /// `A(z) = e^{αi} / conj z`, `B(z) = e^l z`, `α ∈ [0, π]`, `l > 0`.
    TypeII { alpha: f64, l: f64 },
}

/// The classification without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KleinTag {
    Parabolic,
    TypeI,
    TypeII,
}

impl KleinTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            KleinTag::Parabolic => "parabolic",
            KleinTag::TypeI => "typeI",
            KleinTag::TypeII => "typeII",
        }
    }
}

impl fmt::Display for KleinTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl KleinType {
    pub fn tag(&self) -> KleinTag {
        match self {
            KleinType::ParabolicNonDegenerate { .. } | KleinType::ParabolicDegenerate { .. } => KleinTag::Parabolic,
            KleinType::TypeI { .. } => KleinTag::TypeI,
            KleinType::TypeII { .. } => KleinTag::TypeII,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        match *self {
            KleinType::ParabolicNonDegenerate { .. } => false,
            KleinType::ParabolicDegenerate { .. } => true,
            KleinType::TypeI { l, .. } => l == 0.0,
            KleinType::TypeII { alpha, .. } => alpha == 0.0,
        }
    }
}

/// Geometry of the metric completion of an end with the given peripheral
/// holonomy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompletionGeometry {
    Cusp,
    /// Quotient of the cone-angle model by `(r, θ, h) ↦ (r, −θ, h + L)`.
    SolidKleinBottle { cone_angle: f64, soul_length: f64 },
    /// Quotient of the cone-angle model by `(r, θ, h) ↦ (r, θ + π, −h)` and
    /// `(r, θ, h) ↦ (r, θ + π, 2L − h)`.
    DiscOrbiBundle { cone_angle: f64, interval_length: f64 },
}

impl CompletionGeometry {
    pub fn name(&self) -> &'static str {
        match self {
            CompletionGeometry::Cusp => "cusp",
            CompletionGeometry::SolidKleinBottle { .. } => "solid Klein bottle",
            CompletionGeometry::DiscOrbiBundle { .. } => "disc orbi-bundle",
        }
    }

    pub fn cone_angle(&self) -> f64 {
        match *self {
            CompletionGeometry::Cusp => 0.0,
            CompletionGeometry::SolidKleinBottle { cone_angle, .. }
            | CompletionGeometry::DiscOrbiBundle { cone_angle, .. } => cone_angle,
        }
    }

    /// Length of the singular locus: the soul, or the interval.
    pub fn singular_length(&self) -> f64 {
        match *self {
            CompletionGeometry::Cusp => 0.0,
            CompletionGeometry::SolidKleinBottle { soul_length, .. } => soul_length,
            CompletionGeometry::DiscOrbiBundle { interval_length, .. } => interval_length,
        }
    }
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn diagonal(lambda: ComplexValue, conjugates: bool) -> ExtendedIsometry {
    ExtendedIsometry::new(lambda, c(0.0, 0.0), c(0.0, 0.0), lambda.inv(), conjugates).expect("invertible")
}

impl KleinRepresentation {
    pub fn new(a: ExtendedIsometry, b: ExtendedIsometry) -> Result<Self> {
        if a.preserves_orientation() {
            return Err(Error::InvalidParameter("A must reverse orientation".into()));
        }
        if !b.preserves_orientation() {
            return Err(Error::InvalidParameter("B must preserve orientation".into()));
        }
        Ok(KleinRepresentation { a, b })
    }

    /// The normal form of a type.
    pub fn normal_form(t: KleinType) -> Self {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let (a, b) = match t {
            KleinType::ParabolicNonDegenerate { tau } => (
                ExtendedIsometry::new(one, one, zero, one, true).unwrap(),
                ExtendedIsometry::new(one, c(0.0, tau), zero, one, false).unwrap(),
            ),
            KleinType::ParabolicDegenerate { tau } => (
                ExtendedIsometry::conjugation(),
                ExtendedIsometry::new(one, c(0.0, tau), zero, one, false).unwrap(),
            ),
            KleinType::TypeI { l, alpha } => (
                diagonal(c((l / 2.0).exp(), 0.0), true),
                diagonal(ComplexValue::from_polar(1.0, alpha / 2.0), false),
            ),
            KleinType::TypeII { alpha, l } => (
                ExtendedIsometry::new(
                    zero,
                    ComplexValue::from_polar(1.0, alpha / 2.0),
                    ComplexValue::from_polar(1.0, -alpha / 2.0),
                    zero,
                    true,
                )
                .unwrap(),
                diagonal(c((l / 2.0).exp(), 0.0), false),
            ),
        };
        KleinRepresentation { a, b }
    }

    pub fn a(&self) -> &ExtendedIsometry {
        &self.a
    }

    pub fn b(&self) -> &ExtendedIsometry {
        &self.b
    }

    /// `(h A h⁻¹, h B h⁻¹)`.
    pub fn conjugate_by(&self, h: &ExtendedIsometry) -> Self {
        KleinRepresentation {
            a: self.a.conjugate_by(h),
            b: self.b.conjugate_by(h),
        }
    }

    /// `I_{a²}` and `I_b`, which are real for these representations.
    pub fn trace_invariants(&self) -> (ComplexValue, ComplexValue) {
        let a2 = self.a.compose(&self.a);
        (
            a2.trace_invariant().expect("A² preserves orientation"),
            self.b.trace_invariant().expect("B preserves orientation"),
        )
    }
}

/// Distance of `A B A⁻¹ B` from `±Id`.
pub fn verify_relation(rep: &KleinRepresentation) -> f64 {
    rep.a
        .compose(&rep.b)
        .compose(&rep.a.inverse())
        .compose(&rep.b)
        .distance_to_identity()
}

fn real_part(name: &'static str, v: ComplexValue, opts: &ClassifyOptions) -> Result<f64> {
    if v.im.abs() > opts.real_tol * (1.0 + v.norm()) {
        return Err(Error::NonRealTrace {
            name,
            imaginary: v.im,
        });
    }
    Ok(v.re)
}

/// Sign pattern of the trace invariants.
pub fn classify_from_traces(i_a2: f64, i_b: f64) -> Result<KleinTag> {
    classify_from_traces_with(i_a2, i_b, ClassifyOptions::default().band)
}

pub fn classify_from_traces_with(i_a2: f64, i_b: f64, band: f64) -> Result<KleinTag> {
    let zero = |x: f64| x.abs() <= band;
    if zero(i_a2) && zero(i_b) {
        Ok(KleinTag::Parabolic)
    } else if i_b < -band && i_a2 >= -band {
        Ok(KleinTag::TypeI)
    } else if i_b > band && i_a2 <= band {
        Ok(KleinTag::TypeII)
    } else {
        Err(Error::InconsistentPattern { i_a2, i_b })
    }
}

/// Normal-form parameters read off the trace invariants alone.
///
/// Parabolic classes carry no trace information and give `None`. For
/// type II the traces fix `α` only up to `α ↔ π − α`; the value in
/// `[0, π/2]` is returned.
pub fn type_from_traces(i_a2: f64, i_b: f64) -> Result<Option<KleinType>> {
    let band = ClassifyOptions::default().band;
    Ok(match classify_from_traces_with(i_a2, i_b, band)? {
        KleinTag::Parabolic => None,
        KleinTag::TypeI => {
            let l = if i_a2.abs() <= band { 0.0 } else { (i_a2.sqrt() / 2.0).asinh() };
            let alpha = 2.0 * ((-i_b).sqrt() / 2.0).min(1.0).asin();
            Some(KleinType::TypeI { l, alpha })
        }
        KleinTag::TypeII => {
            let l = 2.0 * (i_b.sqrt() / 2.0).asinh();
            let alpha = if i_a2.abs() <= band {
                0.0
            } else {
                ((-i_a2).sqrt() / 2.0).min(1.0).asin()
            };
            Some(KleinType::TypeII { alpha, l })
        }
    })
}

/// Translation length of a parabolic map after moving its fixed point to ∞.
fn parabolic_translation(g: &ExtendedIsometry, fixed: ComplexValue) -> ComplexValue {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let h = ExtendedIsometry::new(zero, one, one, -fixed, false).expect("invertible");
    let m = g.conjugate_by(&h).matrix();
    m[(0, 1)] / m[(1, 1)]
}

fn parabolic_fixed_point(g: &ExtendedIsometry) -> Option<ComplexValue> {
    let [a, _, cc, d] = g.entries();
    let scale = g.entries().iter().map(|x| x.norm()).fold(0.0, f64::max);
    if cc.norm() <= 1e-14 * scale {
        None
    } else {
        Some((a - d) / (cc * 2.0))
    }
}

/// Classifies a representation and recovers its normal-form parameters.
pub fn classify(rep: &KleinRepresentation) -> Result<KleinType> {
    classify_with(rep, &ClassifyOptions::default())
}

pub fn classify_with(rep: &KleinRepresentation, opts: &ClassifyOptions) -> Result<KleinType> {
    if rep.b.distance_to_identity() <= opts.identity_tol {
        return Err(Error::TrivialMeridian);
    }
    let residual = verify_relation(rep);
    if residual > opts.relation_tol {
        return Err(Error::RelationViolated(residual));
    }
    let (ia2, ib) = rep.trace_invariants();
    let i_a2 = real_part("I_a2", ia2, opts)?;
    let i_b = real_part("I_b", ib, opts)?;
    let a2 = rep.a.compose(&rep.a);
    match classify_from_traces_with(i_a2, i_b, opts.band)? {
        KleinTag::Parabolic => {
            let fixed = parabolic_fixed_point(&rep.b);
            let shift = |g: &ExtendedIsometry| match fixed {
                Some(p) => parabolic_translation(g, p),
                None => {
                    let m = g.matrix();
                    m[(0, 1)] / m[(1, 1)]
                }
            };
            if a2.distance_to_identity() <= 1e-6 {
                Ok(KleinType::ParabolicDegenerate { tau: 1.0 })
            } else {
                let beta = shift(&rep.b);
                let gamma = shift(&a2);
                Ok(KleinType::ParabolicNonDegenerate {
                    tau: 2.0 * beta.norm() / gamma.norm(),
                })
            }
        }
        KleinTag::TypeI => {
            let l = if i_a2.abs() <= opts.band {
                0.0
            } else {
                0.5 * a2.multiplier()?.norm().ln().abs()
            };
            let alpha = rep.b.multiplier()?.arg().abs();
            Ok(KleinType::TypeI { l, alpha })
        }
        KleinTag::TypeII => {
            let l = rep.b.multiplier()?.norm().ln().abs();
            // A² rotates by 2α, which fixes α only up to α ↔ π − α; the
            // Lorentz trace 2 cos α of A itself picks the right one.
            let half = if i_a2.abs() <= opts.band {
                0.0
            } else {
                a2.multiplier()?.arg().abs() / 2.0
            };
            let alpha = if rep.a.lorentz_trace() < 0.0 {
                std::f64::consts::PI - half
            } else {
                half
            };
            Ok(KleinType::TypeII { alpha, l })
        }
    }
}

/// The end geometry of a non-degenerate type.
pub fn completion_geometry(t: KleinType) -> Result<CompletionGeometry> {
    match t {
        KleinType::ParabolicNonDegenerate { .. } => Ok(CompletionGeometry::Cusp),
        KleinType::ParabolicDegenerate { .. } => Err(Error::DegenerateType),
        KleinType::TypeI { l, alpha } => {
            if l == 0.0 {
                return Err(Error::DegenerateType);
            }
            Ok(CompletionGeometry::SolidKleinBottle {
                cone_angle: alpha,
                soul_length: l,
            })
        }
        KleinType::TypeII { alpha, l } => {
            if alpha == 0.0 {
                return Err(Error::DegenerateType);
            }
            Ok(CompletionGeometry::DiscOrbiBundle {
                cone_angle: 2.0 * alpha,
                interval_length: l / 2.0,
            })
        }
    }
}
