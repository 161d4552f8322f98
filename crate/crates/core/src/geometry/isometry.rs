use std::fmt;
use std::ops::Mul;

use nalgebra::{Matrix2, Matrix4};

use super::ComplexValue;
use crate::error::{Error, Result};

/// A point of the Riemann sphere `C ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RiemannPoint {
    Finite(ComplexValue),
    Infinity,
}

impl RiemannPoint {
    pub fn new(re: f64, im: f64) -> Self {
        RiemannPoint::Finite(ComplexValue::new(re, im))
    }

    pub fn finite(self) -> Option<ComplexValue> {
        match self {
            RiemannPoint::Finite(z) => Some(z),
            RiemannPoint::Infinity => None,
        }
    }

    pub fn conj(self) -> Self {
        match self {
            RiemannPoint::Finite(z) => RiemannPoint::Finite(z.conj()),
            RiemannPoint::Infinity => RiemannPoint::Infinity,
        }
    }

    /// Equality up to `tol`. Infinity only matches infinity.
    pub fn approx_eq(&self, other: &RiemannPoint, tol: f64) -> bool {
        match (self, other) {
            (RiemannPoint::Infinity, RiemannPoint::Infinity) => true,
            (RiemannPoint::Finite(a), RiemannPoint::Finite(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }
}

impl From<ComplexValue> for RiemannPoint {
    fn from(z: ComplexValue) -> Self {
        RiemannPoint::Finite(z)
    }
}

impl fmt::Display for RiemannPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiemannPoint::Finite(z) => write!(f, "{z}"),
            RiemannPoint::Infinity => write!(f, "∞"),
        }
    }
}

/// An isometry of H^3 acting on the boundary as
/// `z ↦ (a·z' + b)/(c·z' + d)` with `z' = conj(z)` when `conjugates` is set.
///
/// The matrix is kept at determinant one. The remaining sign ambiguity is
/// fixed by requiring the first non-negligible entry (in the order a, b, c,
/// d) to have argument in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedIsometry {
    a: ComplexValue,
    b: ComplexValue,
    c: ComplexValue,
    d: ComplexValue,
    conjugates: bool,
}

impl ExtendedIsometry {
    pub fn new(
        a: ComplexValue,
        b: ComplexValue,
        c: ComplexValue,
        d: ComplexValue,
        conjugates: bool,
    ) -> Result<Self> {
        let det = a * d - b * c;
        let scale = [a, b, c, d].iter().map(|x| x.norm()).fold(0.0, f64::max);
        if !det.is_finite() || det.norm().partial_cmp(&1e-300) != Some(std::cmp::Ordering::Greater) || det.norm() <= 1e-24 * scale * scale {
            return Err(Error::InvalidParameter(format!(
                "singular Möbius matrix (determinant {det})"
            )));
        }
        Ok(Self::normalized(a, b, c, d, conjugates))
    }

    pub fn from_matrix(m: Matrix2<ComplexValue>, conjugates: bool) -> Result<Self> {
        Self::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)], conjugates)
    }

    fn normalized(
        a: ComplexValue,
        b: ComplexValue,
        c: ComplexValue,
        d: ComplexValue,
        conjugates: bool,
    ) -> Self {
        let k = (a * d - b * c).sqrt().inv();
        let mut entries = [a * k, b * k, c * k, d * k];
        let scale = entries.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if let Some(lead) = entries.iter().find(|x| x.norm() > 1e-12 * scale) {
            let upper = lead.im > 0.0 || (lead.im == 0.0 && lead.re > 0.0);
            if !upper {
                entries.iter_mut().for_each(|x| *x = -*x);
            }
        }
        let [a, b, c, d] = entries;
        ExtendedIsometry {
            a,
            b,
            c,
            d,
            conjugates,
        }
    }

    pub fn identity() -> Self {
        let one = ComplexValue::new(1.0, 0.0);
        let zero = ComplexValue::new(0.0, 0.0);
        Self::normalized(one, zero, zero, one, false)
    }

    /// Complex conjugation `z ↦ conj(z)`, the reflection in the vertical
    /// plane over the real axis.
    pub fn conjugation() -> Self {
        ExtendedIsometry {
            conjugates: true,
            ..Self::identity()
        }
    }

    pub fn entries(&self) -> [ComplexValue; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn matrix(&self) -> Matrix2<ComplexValue> {
        Matrix2::new(self.a, self.b, self.c, self.d)
    }

    pub fn conjugates(&self) -> bool {
        self.conjugates
    }

    pub fn preserves_orientation(&self) -> bool {
        !self.conjugates
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ExtendedIsometry) -> ExtendedIsometry {
        let inner = if self.conjugates {
            other.matrix().map(|x| x.conj())
        } else {
            other.matrix()
        };
        let m = self.matrix() * inner;
        Self::normalized(
            m[(0, 0)],
            m[(0, 1)],
            m[(1, 0)],
            m[(1, 1)],
            self.conjugates ^ other.conjugates,
        )
    }

    pub fn inverse(&self) -> ExtendedIsometry {
        let (a, b, c, d) = if self.conjugates {
            (self.d.conj(), -self.b.conj(), -self.c.conj(), self.a.conj())
        } else {
            (self.d, -self.b, -self.c, self.a)
        };
        Self::normalized(a, b, c, d, self.conjugates)
    }

    pub fn pow(&self, n: i32) -> ExtendedIsometry {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| acc.compose(&base))
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate_by(&self, other: &ExtendedIsometry) -> ExtendedIsometry {
        other.compose(self).compose(&other.inverse())
    }

    pub fn apply(&self, p: RiemannPoint) -> RiemannPoint {
        let p = if self.conjugates { p.conj() } else { p };
        match p {
            RiemannPoint::Infinity => {
                if self.c == ComplexValue::new(0.0, 0.0) {
                    RiemannPoint::Infinity
                } else {
                    RiemannPoint::Finite(self.a / self.c)
                }
            }
            RiemannPoint::Finite(z) => {
                let num = self.a * z + self.b;
                let den = self.c * z + self.d;
                if den == ComplexValue::new(0.0, 0.0) {
                    RiemannPoint::Infinity
                } else {
                    RiemannPoint::Finite(num / den)
                }
            }
        }
    }

    pub fn trace(&self) -> ComplexValue {
        self.a + self.d
    }

    /// `trace² − 4`, independent of the sign of the representative.
    pub fn trace_invariant(&self) -> Result<ComplexValue> {
        if self.conjugates {
            return Err(Error::OrientationReversing);
        }
        let t = self.trace();
        Ok(t * t - 4.0)
    }

    /// Derivative at a fixed point: the square of an eigenvalue of the
    /// normalized matrix. The other fixed point carries the inverse.
    pub fn multiplier(&self) -> Result<ComplexValue> {
        if self.conjugates {
            return Err(Error::OrientationReversing);
        }
        let t = self.trace();
        let disc = (t * t - 4.0).sqrt();
        let lambda = if (t + disc).norm() >= (t - disc).norm() {
            (t + disc) / 2.0
        } else {
            (t - disc) / 2.0
        };
        Ok(lambda * lambda)
    }

    /// Trace of the isometry as an element of O(3,1).
    ///
    /// Computed from the action `X ↦ M X̃ M*` on 2×2 Hermitian matrices,
    /// where `X̃` is `X` or its transpose. Unlike the 2×2 trace this is
    /// defined for both orientation classes and is a conjugacy invariant of
    /// the full isometry group.
    pub fn lorentz_trace(&self) -> f64 {
        self.lorentz_matrix().trace()
    }

    pub fn lorentz_matrix(&self) -> Matrix4<f64> {
        let i = ComplexValue::i();
        let one = ComplexValue::new(1.0, 0.0);
        let zero = ComplexValue::new(0.0, 0.0);
        let basis = [
            Matrix2::new(one, zero, zero, zero),
            Matrix2::new(zero, zero, zero, one),
            Matrix2::new(zero, one, one, zero),
            Matrix2::new(zero, -i, i, zero),
        ];
        let m = self.matrix();
        let m_star = m.adjoint();
        let mut out = Matrix4::zeros();
        for (col, h) in basis.iter().enumerate() {
            let x = if self.conjugates { h.transpose() } else { *h };
            let y = m * x * m_star;
            // Hermitian y = [[p, q], [conj q, s]] in the basis above.
            out[(0, col)] = y[(0, 0)].re;
            out[(1, col)] = y[(1, 1)].re;
            out[(2, col)] = y[(0, 1)].re;
            out[(3, col)] = -y[(0, 1)].im;
        }
        out
    }

    /// Frobenius distance from `±identity`, as an orientation-preserving
    /// map. Orientation-reversing maps are at distance infinity.
    pub fn distance_to_identity(&self) -> f64 {
        if self.conjugates {
            return f64::INFINITY;
        }
        let one = ComplexValue::new(1.0, 0.0);
        let plus = (self.a - one).norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + (self.d - one).norm_sqr();
        let minus = (self.a + one).norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + (self.d + one).norm_sqr();
        plus.min(minus).sqrt()
    }

    /// Matrix distance up to the sign ambiguity; infinite across
    /// orientation classes.
    pub fn distance(&self, other: &ExtendedIsometry) -> f64 {
        if self.conjugates != other.conjugates {
            return f64::INFINITY;
        }
        let (x, y) = (self.entries(), other.entries());
        let plus: f64 = x.iter().zip(&y).map(|(p, q)| (p - q).norm_sqr()).sum();
        let minus: f64 = x.iter().zip(&y).map(|(p, q)| (p + q).norm_sqr()).sum();
        plus.min(minus).sqrt()
    }

    pub fn approx_eq(&self, other: &ExtendedIsometry, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

impl Mul for ExtendedIsometry {
    type Output = ExtendedIsometry;

    fn mul(self, rhs: ExtendedIsometry) -> ExtendedIsometry {
        self.compose(&rhs)
    }
}

impl fmt::Display for ExtendedIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.conjugates { "conj(z)" } else { "z" };
        write!(
            f,
            "z ↦ ({}·{var} + {})/({}·{var} + {})",
            self.a, self.b, self.c, self.d
        )
    }
}
