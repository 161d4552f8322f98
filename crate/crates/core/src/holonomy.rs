//! Holonomy derivatives of peripheral curves, log branches and generalized
//! Dehn-filling coefficients.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::ComplexValue;
use crate::solver::ShapeAssignment;
use crate::triangulation::{HolonomyWord, Triangulation, LONGITUDE, MERIDIAN};

const TWO_PI: f64 = 2.0 * PI;

/// Below this size `u` and `v` count as zero and the coefficient is ∞.
pub const DEHN_ZERO_TOL: f64 = 1e-12;

/// Largest change of argument accepted by [`track_logs`] in one step.
pub const MAX_BRANCH_INCREMENT: f64 = PI / 2.0;

fn factor_value(word_factor: &crate::triangulation::WordFactor, shapes: &ShapeAssignment) -> Result<ComplexValue> {
    let f = shapes.edge_invariant(word_factor.tet, word_factor.class);
    let f = if word_factor.conj { f.conj() } else { f };
    if !f.is_finite() || f.norm() == 0.0 {
        return Err(Error::DegenerateFactor(word_factor.tet));
    }
    Ok(f)
}

/// `hol′` of a peripheral curve: the product of its factors.
pub fn evaluate_word(word: &HolonomyWord, shapes: &ShapeAssignment) -> Result<ComplexValue> {
    let mut out = ComplexValue::new(1.0, 0.0);
    for f in word.factors() {
        let v = factor_value(f, shapes)?;
        out *= if f.exp > 0 { v } else { v.inv() };
    }
    Ok(out)
}

/// Sum of the principal logs of the factors, moved by a multiple of 2πi to
/// lie nearest `reference` in imaginary part.
pub fn word_log_near(word: &HolonomyWord, shapes: &ShapeAssignment, reference: ComplexValue) -> Result<ComplexValue> {
    let mut sum = ComplexValue::new(0.0, 0.0);
    for f in word.factors() {
        sum += factor_value(f, shapes)?.ln() * f.exp as f64;
    }
    let k = ((reference.im - sum.im) / TWO_PI).round();
    Ok(sum + ComplexValue::new(0.0, TWO_PI * k))
}

/// Partial derivatives of the log of a word with respect to the real and
/// imaginary part of each shape, as `(tet, d/dx, d/dy)` triples.
pub fn word_log_gradient(word: &HolonomyWord, shapes: &ShapeAssignment) -> Vec<(usize, ComplexValue, ComplexValue)> {
    word.factors()
        .iter()
        .map(|f| {
            let (dx, dy) = log_partials(f.class.dlog(shapes[f.tet]), f.conj);
            (f.tet, dx * f.exp as f64, dy * f.exp as f64)
        })
        .collect()
}

/// `(∂/∂x, ∂/∂y)` of `log f(z)` given `g = f′/f`, or of its conjugate.
pub(crate) fn log_partials(g: ComplexValue, conj: bool) -> (ComplexValue, ComplexValue) {
    let i = ComplexValue::new(0.0, 1.0);
    if conj {
        (g.conj(), -i * g.conj())
    } else {
        (g, i * g)
    }
}

/// Generalized Dehn-filling coefficients of one cusp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DehnCoefficients {
    /// The cusp is complete.
    Infinite,
    Finite { p: f64, q: f64 },
}

impl DehnCoefficients {
    pub fn is_infinite(&self) -> bool {
        matches!(self, DehnCoefficients::Infinite)
    }

    pub fn finite(&self) -> Option<(f64, f64)> {
        match *self {
            DehnCoefficients::Finite { p, q } => Some((p, q)),
            DehnCoefficients::Infinite => None,
        }
    }

    /// Action of the deck involution: `(p, q) ↦ (−p, q)`.
    pub fn involution(&self) -> DehnCoefficients {
        match *self {
            DehnCoefficients::Finite { p, q } => DehnCoefficients::Finite { p: -p, q },
            DehnCoefficients::Infinite => DehnCoefficients::Infinite,
        }
    }
}

/// Solves `p·u + q·v = 2πi` for real `p, q`.
pub fn dehn_coefficients(u: ComplexValue, v: ComplexValue) -> Result<DehnCoefficients> {
    if u.norm().max(v.norm()) < DEHN_ZERO_TOL {
        return Ok(DehnCoefficients::Infinite);
    }
    let det = u.re * v.im - v.re * u.im;
    if det.abs() <= DEHN_ZERO_TOL * u.norm() * v.norm() || det == 0.0 {
        return Err(Error::NonUniqueDehn);
    }
    // [Re u, Re v; Im u, Im v] (p, q) = (0, 2π)
    let p = -v.re * TWO_PI / det;
    let q = u.re * TWO_PI / det;
    Ok(DehnCoefficients::Finite { p, q })
}

/// Peripheral data of one cusp along a continuation path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspHolonomy {
    /// `hol′` of the longitude.
    pub l: ComplexValue,
    /// `hol′` of the meridian.
    pub m: ComplexValue,
    pub u: ComplexValue,
    pub v: ComplexValue,
    pub coefficients: DehnCoefficients,
}

impl CuspHolonomy {
    /// The complete structure: `L = M = 1`, `u = v = 0`.
    pub fn complete() -> Self {
        let one = ComplexValue::new(1.0, 0.0);
        let zero = ComplexValue::new(0.0, 0.0);
        CuspHolonomy {
            l: one,
            m: one,
            u: zero,
            v: zero,
            coefficients: DehnCoefficients::Infinite,
        }
    }

    /// Deck involution on a Klein-cusp lift:
    /// `(L, M) ↦ (conj L, 1/conj M)`, `(u, v) ↦ (conj u, −conj v)`,
    /// `(p, q) ↦ (−p, q)`.
    pub fn involution(&self) -> Self {
        CuspHolonomy {
            l: self.l.conj(),
            m: self.m.conj().inv(),
            u: self.u.conj(),
            v: -self.v.conj(),
            coefficients: self.coefficients.involution(),
        }
    }
}

/// Continues `u = log L` and `v = log M` from the previous point.
pub fn track_logs(previous: &CuspHolonomy, l: ComplexValue, m: ComplexValue) -> Result<CuspHolonomy> {
    let step = |prev_val: ComplexValue, prev_log: ComplexValue, new: ComplexValue| -> Result<ComplexValue> {
        let ratio = new / prev_val;
        if !ratio.is_finite() || ratio.norm() == 0.0 {
            return Err(Error::DegenerateFactor(0));
        }
        let inc = ratio.ln();
        if inc.im.abs() > MAX_BRANCH_INCREMENT {
            return Err(Error::BranchJump { increment: inc.im });
        }
        Ok(prev_log + inc)
    };
    let u = step(previous.l, previous.u, l)?;
    let v = step(previous.m, previous.v, m)?;
    Ok(CuspHolonomy {
        l,
        m,
        u,
        v,
        coefficients: dehn_coefficients(u, v)?,
    })
}

/// Peripheral data of every cusp.
#[derive(Debug, Clone, PartialEq)]
pub struct PeripheralState {
    pub cusps: Vec<CuspHolonomy>,
}

fn curve<'a>(tri: &'a Triangulation, cusp: usize, label: &str) -> Result<&'a HolonomyWord> {
    tri.cusps()[cusp].curve(label).ok_or_else(|| Error::MissingCurve {
        cusp,
        curve: label.to_string(),
    })
}

impl PeripheralState {
    pub fn complete(cusps: usize) -> Self {
        PeripheralState {
            cusps: vec![CuspHolonomy::complete(); cusps],
        }
    }

    /// Evaluates all cusps with logs taken nearest the given references,
    /// one `(u, v)` pair per cusp (zero at the complete structure).
    pub fn evaluate(
        tri: &Triangulation,
        shapes: &ShapeAssignment,
        references: &[(ComplexValue, ComplexValue)],
    ) -> Result<Self> {
        let mut cusps = Vec::with_capacity(tri.cusps().len());
        for k in 0..tri.cusps().len() {
            let (ru, rv) = references.get(k).copied().unwrap_or_default();
            let lw = curve(tri, k, LONGITUDE)?;
            let mw = curve(tri, k, MERIDIAN)?;
            let u = word_log_near(lw, shapes, ru)?;
            let v = word_log_near(mw, shapes, rv)?;
            cusps.push(CuspHolonomy {
                l: evaluate_word(lw, shapes)?,
                m: evaluate_word(mw, shapes)?,
                u,
                v,
                coefficients: dehn_coefficients(u, v)?,
            });
        }
        Ok(PeripheralState { cusps })
    }

    /// Moves every cusp to the holonomy of `shapes`, continuing the logs.
    pub fn track(&self, tri: &Triangulation, shapes: &ShapeAssignment) -> Result<Self> {
        let mut cusps = Vec::with_capacity(self.cusps.len());
        for (k, prev) in self.cusps.iter().enumerate() {
            let l = evaluate_word(curve(tri, k, LONGITUDE)?, shapes)?;
            let m = evaluate_word(curve(tri, k, MERIDIAN)?, shapes)?;
            cusps.push(track_logs(prev, l, m)?);
        }
        Ok(PeripheralState { cusps })
    }

    pub fn references(&self) -> Vec<(ComplexValue, ComplexValue)> {
        self.cusps.iter().map(|c| (c.u, c.v)).collect()
    }
}

/// `I_γ = trace² − 4` of the peripheral elements of one cusp.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspCoordinates {
    pub name: String,
    pub klein: bool,
    pub i_longitude: ComplexValue,
    pub i_meridian: ComplexValue,
}

/// For a peripheral element with derivative `h = hol′(γ) = λ²` the trace
/// of `±diag(λ, 1/λ)` gives `I_γ = h + 1/h − 2`.
pub fn trace_invariant_from_derivative(h: ComplexValue) -> ComplexValue {
    h + h.inv() - 2.0
}

/// `I_γ` of the distinguished curves of every cusp.
pub fn coordinate_report(tri: &Triangulation, shapes: &ShapeAssignment) -> Result<Vec<CuspCoordinates>> {
    let mut out = Vec::with_capacity(tri.cusps().len());
    for (k, (cusp, link)) in tri.cusps().iter().zip(tri.cusp_links()).enumerate() {
        let l = evaluate_word(curve(tri, k, LONGITUDE)?, shapes)?;
        let m = evaluate_word(curve(tri, k, MERIDIAN)?, shapes)?;
        out.push(CuspCoordinates {
            name: cusp.name.clone(),
            klein: !link.orientable,
            i_longitude: trace_invariant_from_derivative(l),
            i_meridian: trace_invariant_from_derivative(m),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{regular_shape, EdgeClass};
    use crate::gieseking::{gieseking_triangulation, longitude_word, meridian_word};
    use crate::triangulation::WordFactor;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn single_factor_word() {
        let w = HolonomyWord::new(vec![WordFactor::new(0, EdgeClass::First, 1, false)]).unwrap();
        let s = ShapeAssignment::new(vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(evaluate_word(&w, &s).unwrap(), c(0.0, 1.0));
    }

    #[test]
    fn gieseking_words_at_complete_structure() {
        let s = ShapeAssignment::new(vec![regular_shape()]).unwrap();
        assert!((evaluate_word(&longitude_word(), &s).unwrap() - 1.0).norm() < 1e-14);
        assert!((evaluate_word(&meridian_word(), &s).unwrap() - 1.0).norm() < 1e-14);
        let state = PeripheralState::evaluate(&gieseking_triangulation(), &s, &[]).unwrap();
        assert!(state.cusps[0].coefficients.is_infinite());
    }

    #[test]
    fn meridian_has_unit_modulus() {
        // |M| = 1 for every shape, not only on the edge curve.
        for z in [c(0.3, 0.7), c(-1.2, 0.4), c(2.0, 3.0)] {
            let s = ShapeAssignment::new(vec![z]).unwrap();
            let m = evaluate_word(&meridian_word(), &s).unwrap();
            assert!((m.norm() - 1.0).abs() < 1e-14);
            let l = evaluate_word(&longitude_word(), &s).unwrap();
            assert!(l.im.abs() < 1e-15 && l.re > 0.0);
        }
    }

    #[test]
    fn dehn_examples() {
        assert!(dehn_coefficients(c(0.0, 0.0), c(0.0, 0.0)).unwrap().is_infinite());
        let (p, q) = dehn_coefficients(c(0.4, 0.0), c(0.0, 0.25)).unwrap().finite().unwrap();
        assert!(p.abs() < 1e-15 && (q - TWO_PI / 0.25).abs() < 1e-12);
        assert!(matches!(dehn_coefficients(c(1.0, 1.0), c(2.0, 2.0)), Err(Error::NonUniqueDehn)));
        // u = 2πi/5 with an independent v: compare to a direct 2x2 solve.
        let (u, v) = (c(0.0, TWO_PI / 5.0), c(0.7, -0.3));
        let (p, q) = dehn_coefficients(u, v).unwrap().finite().unwrap();
        let m = nalgebra::Matrix2::new(u.re, v.re, u.im, v.im);
        let sol = m.lu().solve(&nalgebra::Vector2::new(0.0, TWO_PI)).unwrap();
        assert!((p - sol[0]).abs() < 1e-12 && (q - sol[1]).abs() < 1e-12);
        assert!((p - 5.0).abs() < 1e-12);
    }

    #[test]
    fn logs_cross_the_negative_axis_continuously() {
        let mut state = CuspHolonomy::complete();
        let mut theta = 0.0;
        while theta < 3.0 * PI {
            theta += 0.1;
            let l = ComplexValue::from_polar(1.0, theta);
            state = track_logs(&state, l, c(2.0, 0.0)).unwrap();
            assert!((state.u.im - theta).abs() < 1e-12);
            assert!((state.u.exp() - l).norm() < 1e-12);
        }
        assert!(matches!(
            track_logs(&state, -state.l, state.m),
            Err(Error::BranchJump { .. })
        ));
    }

    #[test]
    fn constant_holonomy_keeps_logs() {
        let start = CuspHolonomy {
            l: c(2.0, 0.0),
            m: c(0.0, 1.0),
            u: c(2f64.ln(), 0.0),
            v: c(0.0, PI / 2.0),
            coefficients: DehnCoefficients::Infinite,
        };
        let next = track_logs(&start, start.l, start.m).unwrap();
        assert_eq!(next.u, start.u);
        assert_eq!(next.v, start.v);
    }

    proptest! {
        #[test]
        fn dehn_coefficients_are_homogeneous(
            ur in -2.0f64..2.0, ui in -2.0f64..2.0, vr in -2.0f64..2.0, vi in -2.0f64..2.0, lam in 0.1f64..5.0
        ) {
            let (u, v) = (c(ur, ui), c(vr, vi));
            prop_assume!((ur * vi - vr * ui).abs() > 1e-3);
            let (p, q) = dehn_coefficients(u, v).unwrap().finite().unwrap();
            let (p2, q2) = dehn_coefficients(u * lam, v * lam).unwrap().finite().unwrap();
            prop_assert!((p2 * lam - p).abs() < 1e-9 * (1.0 + p.abs()));
            prop_assert!((q2 * lam - q).abs() < 1e-9 * (1.0 + q.abs()));
            let back = u * p + v * q;
            prop_assert!((back - c(0.0, TWO_PI)).norm() < 1e-9 * (1.0 + p.abs() + q.abs()));
        }

        #[test]
        fn peripheral_involution_is_an_involution(
            lr in -3.0f64..3.0, li in -3.0f64..3.0, mr in -3.0f64..3.0, mi in -3.0f64..3.0,
            p in -10.0f64..10.0, q in -10.0f64..10.0
        ) {
            let (l, m) = (c(lr, li), c(mr, mi));
            prop_assume!(l.norm() > 1e-3 && m.norm() > 1e-3);
            let h = CuspHolonomy { l, m, u: l.ln(), v: m.ln(), coefficients: DehnCoefficients::Finite { p, q } };
            let once = h.involution();
            // exp commutes with the action on (u, v).
            prop_assert!((once.u.exp() - once.l).norm() < 1e-12 * (1.0 + once.l.norm()));
            prop_assert!((once.v.exp() - once.m).norm() < 1e-12 * (1.0 + once.m.norm()));
            let twice = once.involution();
            prop_assert!((twice.l - l).norm() < 1e-12 * (1.0 + l.norm()));
            prop_assert!((twice.m - m).norm() < 1e-12 * (1.0 + m.norm()));
            prop_assert_eq!(twice.coefficients, h.coefficients);
        }
    }
}
