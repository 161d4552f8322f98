use std::f64::consts::PI;

use log::warn;
use nalgebra::{DMatrix, DVector};

use super::ShapeAssignment;
use crate::error::{Error, Result};
use crate::geometry::ComplexValue;
use crate::holonomy::{log_partials, word_log_gradient, word_log_near};
use crate::triangulation::{HolonomyWord, Triangulation, LONGITUDE, MERIDIAN};

/// What a cusp is asked to do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CuspTarget {
    /// `hol′(longitude) = 1`.
    Complete,
    /// `p·u + q·v = 2πi`. Klein-bottle cusps only accept `p = 0`.
    Filling { p: f64, q: f64 },
}

/// Cusp conditions added to the edge equations.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveTarget {
    /// Every cusp complete.
    Complete,
    /// One condition per cusp.
    Cusps(Vec<CuspTarget>),
}

impl SolveTarget {
    /// Fills the single cusp of a one-cusped manifold with `(0, q)`.
    pub fn klein_filling(q: f64) -> Self {
        SolveTarget::Cusps(vec![CuspTarget::Filling { p: 0.0, q }])
    }

    fn cusp_targets(&self, cusps: usize) -> Vec<CuspTarget> {
        match self {
            SolveTarget::Complete => vec![CuspTarget::Complete; cusps],
            SolveTarget::Cusps(t) => t.clone(),
        }
    }
}

enum CuspRow<'a> {
    Complete(&'a HolonomyWord),
    Filling {
        longitude: &'a HolonomyWord,
        meridian: &'a HolonomyWord,
        p: f64,
        q: f64,
    },
}

/// Edge and cusp equations of a triangulation as a real system in the real
/// and imaginary parts of the shapes.
///
/// Each edge cycle contributes the real and imaginary part of
/// `Σ ε log z − (1 − ε) log conj z − 2πi`, each cusp two rows from its
/// target. Logs entering filling targets are taken nearest the branch
/// references, zero unless set.
pub struct EquationSystem<'a> {
    tri: &'a Triangulation,
    rows: Vec<CuspRow<'a>>,
    references: Vec<(ComplexValue, ComplexValue)>,
}

fn word<'a>(tri: &'a Triangulation, cusp: usize, label: &str) -> Result<&'a HolonomyWord> {
    tri.cusps()[cusp].curve(label).ok_or_else(|| Error::MissingCurve {
        cusp,
        curve: label.to_string(),
    })
}

impl<'a> EquationSystem<'a> {
    pub fn new(tri: &'a Triangulation, target: &SolveTarget) -> Result<Self> {
        let cusps = tri.cusps().len();
        let targets = target.cusp_targets(cusps);
        if targets.len() != cusps {
            return Err(Error::InvalidTarget(format!(
                "{} cusp targets for {cusps} cusps",
                targets.len()
            )));
        }
        let mut rows = Vec::with_capacity(cusps);
        for (k, t) in targets.into_iter().enumerate() {
            rows.push(match t {
                CuspTarget::Complete => CuspRow::Complete(word(tri, k, LONGITUDE)?),
                CuspTarget::Filling { p, q } => {
                    if !p.is_finite() || !q.is_finite() || (p == 0.0 && q == 0.0) {
                        return Err(Error::InvalidTarget(format!("coefficients ({p}, {q}) for cusp {k}")));
                    }
                    if !tri.cusp_links()[k].orientable && p != 0.0 {
                        return Err(Error::InvalidTarget(format!(
                            "cusp {k} is a Klein bottle and only takes coefficients (0, q), got p = {p}"
                        )));
                    }
                    CuspRow::Filling {
                        longitude: word(tri, k, LONGITUDE)?,
                        meridian: word(tri, k, MERIDIAN)?,
                        p,
                        q,
                    }
                }
            });
        }
        Ok(EquationSystem {
            tri,
            rows,
            references: vec![Default::default(); cusps],
        })
    }

    /// Branch references for `(u, v)` of each cusp.
    pub fn with_references(mut self, references: Vec<(ComplexValue, ComplexValue)>) -> Self {
        self.references = references;
        self.references.resize(self.rows.len(), Default::default());
        self
    }

    pub fn unknowns(&self) -> usize {
        2 * self.tri.tetrahedra_count()
    }

    pub fn row_count(&self) -> usize {
        2 * (self.tri.edge_cycles().len() + self.rows.len())
    }

    /// Complex edge residuals, one per edge cycle.
    pub fn edge_residuals(&self, shapes: &ShapeAssignment) -> Vec<ComplexValue> {
        self.tri
            .edge_cycles()
            .iter()
            .map(|cycle| {
                let mut sum = ComplexValue::new(0.0, -2.0 * PI);
                for step in cycle.steps() {
                    let l = shapes.edge_invariant(step.tet, step.class).ln();
                    sum += if step.epsilon { l } else { -l.conj() };
                }
                sum
            })
            .collect()
    }

    /// Whether every edge invariant argument lies in `(0, π)`; warns otherwise.
    pub fn check_branches(&self, shapes: &ShapeAssignment) -> bool {
        let ok = shapes.values().iter().all(|z| z.im > 0.0);
        if !ok {
            warn!("an edge invariant argument left (0, pi); the log-form residual may not encode the angle sum");
        }
        ok
    }

    pub fn residual(&self, shapes: &ShapeAssignment) -> Result<DVector<f64>> {
        self.check_shapes(shapes)?;
        let mut out = Vec::with_capacity(self.row_count());
        for r in self.edge_residuals(shapes) {
            out.push(r.re);
            out.push(r.im);
        }
        for (k, row) in self.rows.iter().enumerate() {
            let value = match row {
                CuspRow::Complete(l) => word_log_near(l, shapes, ComplexValue::default())?,
                CuspRow::Filling { longitude, meridian, p, q } => {
                    let (ru, rv) = self.references[k];
                    let u = word_log_near(longitude, shapes, ru)?;
                    let v = word_log_near(meridian, shapes, rv)?;
                    (u * *p + v * *q - ComplexValue::new(0.0, 2.0 * PI)) / p.hypot(*q)
                }
            };
            out.push(value.re);
            out.push(value.im);
        }
        Ok(DVector::from_vec(out))
    }

    pub fn jacobian(&self, shapes: &ShapeAssignment) -> Result<DMatrix<f64>> {
        self.check_shapes(shapes)?;
        let mut jac = DMatrix::zeros(self.row_count(), self.unknowns());
        let mut add = |row: usize, tet: usize, dx: ComplexValue, dy: ComplexValue| {
            jac[(row, 2 * tet)] += dx.re;
            jac[(row, 2 * tet + 1)] += dy.re;
            jac[(row + 1, 2 * tet)] += dx.im;
            jac[(row + 1, 2 * tet + 1)] += dy.im;
        };
        for (c, cycle) in self.tri.edge_cycles().iter().enumerate() {
            for step in cycle.steps() {
                let g = step.class.dlog(shapes[step.tet]);
                let (dx, dy) = log_partials(g, !step.epsilon);
                let sign = if step.epsilon { 1.0 } else { -1.0 };
                add(2 * c, step.tet, dx * sign, dy * sign);
            }
        }
        let base = 2 * self.tri.edge_cycles().len();
        for (k, row) in self.rows.iter().enumerate() {
            let r = base + 2 * k;
            match row {
                CuspRow::Complete(l) => {
                    for (tet, dx, dy) in word_log_gradient(l, shapes) {
                        add(r, tet, dx, dy);
                    }
                }
                CuspRow::Filling { longitude, meridian, p, q } => {
                    let norm = p.hypot(*q);
                    for (tet, dx, dy) in word_log_gradient(longitude, shapes) {
                        add(r, tet, dx * (*p / norm), dy * (*p / norm));
                    }
                    for (tet, dx, dy) in word_log_gradient(meridian, shapes) {
                        add(r, tet, dx * (*q / norm), dy * (*q / norm));
                    }
                }
            }
        }
        Ok(jac)
    }

    fn check_shapes(&self, shapes: &ShapeAssignment) -> Result<()> {
        if shapes.len() != self.tri.tetrahedra_count() {
            return Err(Error::InvalidParameter(format!(
                "{} shapes for {} tetrahedra",
                shapes.len(),
                self.tri.tetrahedra_count()
            )));
        }
        Ok(())
    }
}

/// The residual vector of the gluing and cusp equations.
pub fn residual(tri: &Triangulation, shapes: &ShapeAssignment, target: &SolveTarget) -> Result<DVector<f64>> {
    let system = EquationSystem::new(tri, target)?;
    system.check_branches(shapes);
    system.residual(shapes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular_shape;
    use crate::gieseking::gieseking_triangulation;
    use crate::triangulation::orientation_double_cover;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn finite_difference(system: &EquationSystem, shapes: &ShapeAssignment) -> DMatrix<f64> {
        let h = 1e-6;
        let n = shapes.len();
        let mut jac = DMatrix::zeros(system.row_count(), 2 * n);
        for j in 0..2 * n {
            let shift = |s: f64| {
                let mut v = shapes.values().to_vec();
                v[j / 2] += if j % 2 == 0 { c(s, 0.0) } else { c(0.0, s) };
                ShapeAssignment::new(v).unwrap()
            };
            let plus = system.residual(&shift(h)).unwrap();
            let minus = system.residual(&shift(-h)).unwrap();
            jac.set_column(j, &((plus - minus) / (2.0 * h)));
        }
        jac
    }

    #[test]
    fn regular_shape_solves_gieseking() {
        let tri = gieseking_triangulation();
        let s = ShapeAssignment::new(vec![regular_shape()]).unwrap();
        assert!(residual(&tri, &s, &SolveTarget::Complete).unwrap().norm() < 1e-12);
    }

    #[test]
    fn gieseking_edge_equation_is_modulus_condition() {
        // Real part: 2 log|z|^2 - 2 log|1 - z| ... i.e. log(|z|^4 / |1 - z|^2).
        let tri = gieseking_triangulation();
        let system = EquationSystem::new(&tri, &SolveTarget::Complete).unwrap();
        for z in [c(0.3, 0.8), c(-0.7, 1.5), c(1.4, 0.2)] {
            let s = ShapeAssignment::new(vec![z]).unwrap();
            let r = system.edge_residuals(&s)[0];
            let expected = (z.norm_sqr().powi(2) / (c(1.0, 0.0) - z).norm_sqr()).ln();
            assert!((r.re - expected).abs() < 1e-12, "{r} vs {expected}");
            assert!(r.im.abs() < 1e-12);
        }
    }

    #[test]
    fn klein_cusp_rejects_nonzero_p() {
        let tri = gieseking_triangulation();
        let t = SolveTarget::Cusps(vec![CuspTarget::Filling { p: 1.0, q: 3.0 }]);
        assert!(matches!(EquationSystem::new(&tri, &t), Err(Error::InvalidTarget(_))));
        let t = SolveTarget::Cusps(vec![]);
        assert!(matches!(EquationSystem::new(&tri, &t), Err(Error::InvalidTarget(_))));
    }

    proptest! {
        #[test]
        fn jacobian_matches_finite_differences(re in -1.5f64..1.5, im in 0.3f64..2.0, re2 in -1.5f64..1.5, im2 in 0.3f64..2.0, q in 3.0f64..50.0) {
            let tri = gieseking_triangulation();
            let s = ShapeAssignment::new(vec![c(re, im)]).unwrap();
            prop_assume!((s[0] - 1.0).norm() > 0.2);
            for target in [SolveTarget::Complete, SolveTarget::klein_filling(q)] {
                let system = EquationSystem::new(&tri, &target).unwrap();
                let diff = system.jacobian(&s).unwrap() - finite_difference(&system, &s);
                prop_assert!(diff.amax() < 1e-6, "{}", diff);
            }
            let cover = orientation_double_cover(&tri).unwrap();
            let s2 = ShapeAssignment::new(vec![c(re, im), c(re2, im2)]).unwrap();
            prop_assume!((s2[1] - 1.0).norm() > 0.2);
            let target = SolveTarget::Cusps(vec![CuspTarget::Filling { p: 1.0, q }]);
            let system = EquationSystem::new(cover.triangulation(), &target).unwrap();
            let diff = system.jacobian(&s2).unwrap() - finite_difference(&system, &s2);
            prop_assert!(diff.amax() < 1e-6, "{}", diff);
        }
    }
}
