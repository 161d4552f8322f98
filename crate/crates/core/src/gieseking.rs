//! The Gieseking manifold: one ideal tetrahedron, one Klein-bottle cusp.
//!
//! Vertices 0..3 of the tetrahedron sit at `−w, 1, ∞, 0`, so its shape is
//! `z = −1/w`. The faces are paired by two orientation-reversing maps `U`
//! and `V` satisfying `VU = U²V²`, and the structure deforms along the
//! curve `|w(1 + w)| = 1`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::geometry::{ComplexValue, EdgeClass, ExtendedIsometry};
use crate::klein::{ClassifyOptions, KleinRepresentation, KleinTag};
use crate::triangulation::{
    orientation_double_cover, CuspCurves, DoubleCover, Gluing, HolonomyWord, Perm4, Triangulation, WordFactor,
    LONGITUDE, MERIDIAN,
};

fn perm(p: [usize; 4]) -> Perm4 {
    Perm4::new(p).expect("constant permutation")
}

fn word(factors: &[(usize, i32, bool)]) -> HolonomyWord {
    HolonomyWord::new(
        factors
            .iter()
            .map(|&(class, exp, conj)| WordFactor::new(0, EdgeClass::from_index(class).unwrap(), exp, conj))
            .collect(),
    )
    .expect("constant word")
}

/// The distinguished longitude `l = a²`, with `hol′(l) = 1/|z|²`.
pub fn longitude_word() -> HolonomyWord {
    word(&[(0, -1, true), (0, -1, false)])
}

/// The distinguished meridian `m = b`, read off the link of the cover and
/// written without cancelling factors.
pub fn meridian_word() -> HolonomyWord {
    word(&[
        (1, 1, false),
        (2, 1, false),
        (1, -1, true),
        (2, -1, true),
        (1, 1, true),
        (0, -1, false),
        (1, -1, false),
        (0, 1, true),
    ])
}

/// The one-tetrahedron triangulation with its peripheral curves.
///
/// `U` glues face 1 to face 2 and `V` glues face 0 to face 3; both vertex
/// maps are even, so both gluings reverse orientation.
pub fn gieseking_triangulation() -> Triangulation {
    let u = perm([0, 2, 3, 1]);
    let v = perm([3, 0, 2, 1]);
    let gluings = vec![[
        Gluing::new(0, v),
        Gluing::new(0, u),
        Gluing::new(0, u.inverse()),
        Gluing::new(0, v.inverse()),
    ]];
    let cusp = CuspCurves::new("c0")
        .with_curve(LONGITUDE, longitude_word())
        .with_curve(MERIDIAN, meridian_word());
    Triangulation::new("gieseking", gluings, vec![cusp]).expect("the Gieseking triangulation is valid")
}

/// The orientation double cover: Thurston's two-tetrahedron triangulation
/// of the figure-eight knot complement.
pub fn figure_eight_cover() -> DoubleCover {
    orientation_double_cover(&gieseking_triangulation()).expect("the Gieseking manifold is non-orientable")
}

/// Shape of the tetrahedron for the parameter `w`.
pub fn shape_from_w(w: ComplexValue) -> ComplexValue {
    -w.inv()
}

pub fn w_from_shape(z: ComplexValue) -> ComplexValue {
    -z.inv()
}

/// The complete structure `w₀ = (−1 + i√3)/2`.
pub fn complete_w() -> ComplexValue {
    ComplexValue::new(-0.5, 3f64.sqrt() / 2.0)
}

fn check_w(w: ComplexValue) -> Result<()> {
    if !w.is_finite() || w.norm() == 0.0 || (w + 1.0).norm() == 0.0 {
        return Err(Error::InvalidParameter(format!("w = {w} must be finite and avoid 0 and -1")));
    }
    Ok(())
}

/// The face pairings `U(z) = 1/(((1 + w)/|w|²)·conj z + 1)` and
/// `V(z) = −(1 + w)·conj z + 1`.
pub fn isometries(w: ComplexValue) -> Result<(ExtendedIsometry, ExtendedIsometry)> {
    check_w(w)?;
    let one = ComplexValue::new(1.0, 0.0);
    let zero = ComplexValue::new(0.0, 0.0);
    let u = ExtendedIsometry::new(zero, one, (one + w) / w.norm_sqr(), one, true)?;
    let v = ExtendedIsometry::new(-(one + w), one, zero, one, true)?;
    Ok((u, v))
}

/// Distance of `U⁻¹V⁻¹U²V²` from `±Id`.
pub fn edge_relation_residual(w: ComplexValue) -> Result<f64> {
    let (u, v) = isometries(w)?;
    Ok(u.inverse()
        .compose(&v.inverse())
        .compose(&u.pow(2))
        .compose(&v.pow(2))
        .distance_to_identity())
}

/// A point of the deformation curve `|w(1 + w)| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GiesekingPoint {
    /// Curve parameter in `(0, 2π)`, `π` at the complete structure.
    pub s: f64,
    /// `(s − π)/π ∈ (−1, 1)`.
    pub t: f64,
    pub w: ComplexValue,
    pub x: ComplexValue,
    pub tau: f64,
}

/// `w(s) = −1/2 + √(1/4 + e^{is})` with the square root in the closed
/// upper half-plane, so that `w(s)(1 + w(s)) = e^{is}`.
pub fn deformation_curve(s: f64) -> Result<GiesekingPoint> {
    if !(s > 0.0 && s < 2.0 * PI) {
        return Err(Error::ParameterOutOfRange(s));
    }
    let zeta = ComplexValue::new(0.25, 0.0) + ComplexValue::from_polar(1.0, s);
    let mut root = zeta.sqrt();
    if root.im < 0.0 || (root.im == 0.0 && s > PI) {
        root = -root;
    }
    let w = ComplexValue::new(-0.5, 0.0) + root;
    let (x, _) = character(w);
    Ok(GiesekingPoint {
        s,
        t: (s - PI) / PI,
        w,
        x,
        tau: commutator_trace_from_w(w),
    })
}

/// The curve point at the symmetric parameter `t ∈ (−1, 1)`.
pub fn curve_point(t: f64) -> Result<GiesekingPoint> {
    if !(t > -1.0 && t < 1.0) {
        return Err(Error::ParameterOutOfRange(PI * (1.0 + t)));
    }
    deformation_curve(PI * (1.0 + t))
}

/// The fibre generators `r = UV`, `s = VU`, `t = U⁻¹` of the punctured-torus
/// bundle structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberGenerators {
    pub r: ExtendedIsometry,
    pub s: ExtendedIsometry,
    pub t: ExtendedIsometry,
    /// `[[0, |w|²], [−1/|w|², 1 + w + |w|²]]`, a representative of `r` up to
    /// conjugation.
    pub rho_r: Matrix2<ComplexValue>,
}

pub fn fiber_generators(w: ComplexValue) -> Result<FiberGenerators> {
    let (u, v) = isometries(w)?;
    let n = w.norm_sqr();
    let zero = ComplexValue::new(0.0, 0.0);
    let rho_r = Matrix2::new(
        zero,
        ComplexValue::new(n, 0.0),
        ComplexValue::new(-1.0 / n, 0.0),
        ComplexValue::new(1.0 + n, 0.0) + w,
    );
    Ok(FiberGenerators {
        r: u.compose(&v),
        s: v.compose(&u),
        t: u.inverse(),
        rho_r,
    })
}

impl FiberGenerators {
    /// The peripheral Klein-bottle group `⟨t, [r, s]⟩`.
    pub fn peripheral(&self) -> KleinRepresentation {
        let commutator = self
            .r
            .compose(&self.s)
            .compose(&self.r.inverse())
            .compose(&self.s.inverse());
        KleinRepresentation::new(self.t, commutator).expect("t reverses and [r, s] preserves orientation")
    }
}

/// `x = 1 + w + |w|²` and the distance `|x − 1| − 1` from the character
/// circle.
pub fn character(w: ComplexValue) -> (ComplexValue, f64) {
    let x = ComplexValue::new(1.0 + w.norm_sqr(), 0.0) + w;
    (x, (x - 1.0).norm() - 1.0)
}

/// `τ = 2 Re(w + w²)`, the trace of `[r, s]`.
pub fn commutator_trace_from_w(w: ComplexValue) -> f64 {
    2.0 * (w + w * w).re
}

/// Default distance from the circle `|x − 1| = 1` accepted for inputs.
pub const CIRCLE_TOL: f64 = 1e-6;

fn check_circle(x: ComplexValue, tol: f64) -> Result<()> {
    let off = (x - 1.0).norm() - 1.0;
    if off.abs() > tol || !off.is_finite() {
        return Err(Error::OffCircle(off));
    }
    Ok(())
}

/// `τ = S(S − 3) − 2` with `S = x + conj x`, for `x` on the circle.
pub fn commutator_trace_from_x(x: ComplexValue, tol: f64) -> Result<f64> {
    check_circle(x, tol)?;
    let s = 2.0 * x.re;
    Ok(s * (s - 3.0) - 2.0)
}

/// Type of the peripheral representation with character `x`, from the sign
/// of `I_b = τ² − 4`.
pub fn classify_character(x: ComplexValue, tol: f64) -> Result<KleinTag> {
    let tau = commutator_trace_from_x(x, tol)?;
    if (x - 2.0).norm() <= tol {
        return Err(Error::ReducibleCharacter);
    }
    let i_b = tau * tau - 4.0;
    let band = ClassifyOptions::default().band;
    Ok(if i_b.abs() <= band {
        KleinTag::Parabolic
    } else if i_b < 0.0 {
        KleinTag::TypeI
    } else {
        KleinTag::TypeII
    })
}

/// A representation of the fibre group with `trace r = trace rs = x` and
/// `trace s = conj x`, extended by an orientation-reversing `t` realising
/// the monodromy `r ↦ s`, `s ↦ rs`. Returns the peripheral group
/// `⟨t, [r, s]⟩`.
pub fn representation_from_x(x: ComplexValue, tol: f64) -> Result<KleinRepresentation> {
    check_circle(x, tol)?;
    if (x - 2.0).norm() <= tol {
        return Err(Error::ReducibleCharacter);
    }
    let one = ComplexValue::new(1.0, 0.0);
    let zero = ComplexValue::new(0.0, 0.0);
    let m = (-x + (x * x - 4.0).sqrt()) / 2.0;
    let r = Matrix2::new(x, one, -one, zero);
    let s = Matrix2::new(zero, m, -m.inv(), x.conj());
    let rs = r * s;

    // t∘c conjugates r to ±s and s to ±rs: A·conj(R) = ±S·A and
    // A·conj(S) = ±RS·A, linear in the entries of A.
    let mut best: Option<(f64, Matrix2<ComplexValue>)> = None;
    for (e1, e2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let mut sys = DMatrix::<ComplexValue>::zeros(8, 4);
        for (block, (p, q)) in [(r.map(|v| v.conj()), s * ComplexValue::from(e1)), (s.map(|v| v.conj()), rs * ComplexValue::from(e2))]
            .into_iter()
            .enumerate()
        {
            // (A p − q A)_{ij} = Σ_k A_ik p_kj − Σ_k q_ik A_kj, with A = [a0 a1; a2 a3].
            for i in 0..2 {
                for j in 0..2 {
                    let row = 4 * block + 2 * i + j;
                    for k in 0..2 {
                        sys[(row, 2 * i + k)] += p[(k, j)];
                        sys[(row, 2 * k + j)] -= q[(i, k)];
                    }
                }
            }
        }
        let svd = sys.svd(false, true);
        let v_t = svd.v_t.expect("requested");
        let (idx, sigma) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        let row = v_t.row(idx);
        let a = Matrix2::new(row[0].conj(), row[1].conj(), row[2].conj(), row[3].conj());
        if best.as_ref().is_none_or(|(b, _)| sigma < *b) {
            best = Some((sigma, a));
        }
    }
    let (_, a) = best.expect("four candidates");
    let t = ExtendedIsometry::from_matrix(a, true)?;
    let r = ExtendedIsometry::from_matrix(r, false)?;
    let s = ExtendedIsometry::from_matrix(s, false)?;
    let commutator = r.compose(&s).compose(&r.inverse()).compose(&s.inverse());
    KleinRepresentation::new(t, commutator)
}
