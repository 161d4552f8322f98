use log::debug;

use super::equations::{CuspTarget, EquationSystem, SolveTarget};
use super::newton::{solve_system, SolverOptions};
use super::ShapeAssignment;
use crate::error::{Error, Result};
use crate::holonomy::PeripheralState;
use crate::triangulation::{Triangulation, LONGITUDE, MERIDIAN};

/// One solved point of a continuation path.
#[derive(Debug, Clone)]
pub struct PathPoint {
    pub shapes: ShapeAssignment,
    /// Branch-tracked peripheral data, when every cusp has both curves.
    pub peripheral: Option<PeripheralState>,
    pub residual_norm: f64,
}

fn has_curves(tri: &Triangulation) -> bool {
    tri.cusps()
        .iter()
        .all(|c| c.curve(LONGITUDE).is_some() && c.curve(MERIDIAN).is_some())
}

/// Solves a sequence of targets, each seeded by the previous solution and
/// starting from the regular shapes.
pub fn solve_path(tri: &Triangulation, targets: &[SolveTarget]) -> Result<Vec<ShapeAssignment>> {
    let seed = ShapeAssignment::regular(tri.tetrahedra_count());
    Ok(solve_path_from(tri, &seed, targets, &SolverOptions::default())?
        .into_iter()
        .map(|p| p.shapes)
        .collect())
}

/// Continuation from an explicit seed.
///
/// The logs `u, v` are anchored with principal values at the seed and
/// continued along the path; the filling equations of each step use the
/// logs of the previous point as branch references.
pub fn solve_path_from(
    tri: &Triangulation,
    seed: &ShapeAssignment,
    targets: &[SolveTarget],
    opts: &SolverOptions,
) -> Result<Vec<PathPoint>> {
    let mut walker = Continuation::new(tri, seed, opts)?;
    let mut out = Vec::with_capacity(targets.len());
    for (index, target) in targets.iter().enumerate() {
        let point = walker.step(target).map_err(|e| match e {
            Error::InvalidTarget(_) | Error::MissingCurve { .. } => e,
            other => Error::StepTooLarge {
                index,
                reason: other.to_string(),
            },
        })?;
        out.push(point);
    }
    Ok(out)
}

/// Stateful path follower: the current shapes and tracked peripheral logs.
///
/// A failed step leaves the state untouched, so callers can retry with a
/// smaller step.
#[derive(Debug, Clone)]
pub struct Continuation<'a> {
    tri: &'a Triangulation,
    opts: SolverOptions,
    shapes: ShapeAssignment,
    peripheral: Option<PeripheralState>,
}

impl<'a> Continuation<'a> {
    pub fn new(tri: &'a Triangulation, seed: &ShapeAssignment, opts: &SolverOptions) -> Result<Self> {
        let peripheral = if has_curves(tri) {
            Some(PeripheralState::evaluate(tri, seed, &[]).or_else(|e| match e {
                Error::NonUniqueDehn => Ok(PeripheralState::complete(tri.cusps().len())),
                other => Err(other),
            })?)
        } else {
            None
        };
        Ok(Continuation {
            tri,
            opts: *opts,
            shapes: seed.clone(),
            peripheral,
        })
    }

    pub fn shapes(&self) -> &ShapeAssignment {
        &self.shapes
    }

    pub fn peripheral(&self) -> Option<&PeripheralState> {
        self.peripheral.as_ref()
    }

    /// Solves `target` seeded by the current point and moves there.
    pub fn step(&mut self, target: &SolveTarget) -> Result<PathPoint> {
        let references = self.peripheral.as_ref().map(|p| p.references()).unwrap_or_default();
        let system = EquationSystem::new(self.tri, target)?.with_references(references);
        let report = solve_system(&system, &self.shapes, &self.opts)?;
        let peripheral = match &self.peripheral {
            Some(prev) => Some(prev.track(self.tri, &report.shapes)?),
            None => None,
        };
        debug!(
            "continuation step: {} iterations, residual {:.3e}",
            report.iterations,
            report.residual_norm()
        );
        self.shapes = report.shapes.clone();
        self.peripheral = peripheral.clone();
        Ok(PathPoint {
            residual_norm: report.residual_norm(),
            shapes: report.shapes,
            peripheral,
        })
    }
}

fn scaled(target: &SolveTarget, lambda: f64) -> SolveTarget {
    match target {
        SolveTarget::Complete => SolveTarget::Complete,
        SolveTarget::Cusps(t) => SolveTarget::Cusps(
            t.iter()
                .map(|c| match *c {
                    CuspTarget::Complete => CuspTarget::Complete,
                    CuspTarget::Filling { p, q } => CuspTarget::Filling {
                        p: p / lambda,
                        q: q / lambda,
                    },
                })
                .collect(),
        ),
    }
}

/// Smallest homotopy step tried before giving up.
const MIN_HOMOTOPY_STEP: f64 = 1.0 / 4096.0;

/// Solves `target` from the complete structure by the homotopy
/// `p·u + q·v = 2πiλ`, `λ: 0 → 1`, halving the step on failure.
pub fn solve_by_continuation(tri: &Triangulation, target: &SolveTarget, opts: &SolverOptions) -> Result<PathPoint> {
    let seed = ShapeAssignment::regular(tri.tetrahedra_count());
    let mut walker = Continuation::new(tri, &seed, opts)?;
    let mut point = walker.step(&SolveTarget::Complete)?;
    if *target == SolveTarget::Complete {
        return Ok(point);
    }
    let mut lambda: f64 = 0.0;
    let mut h: f64 = 0.125;
    while lambda < 1.0 {
        let next = (lambda + h).min(1.0);
        match walker.step(&scaled(target, next)) {
            Ok(p) => {
                point = p;
                lambda = next;
                h = (h * 2.0).min(0.25);
            }
            Err(e @ (Error::InvalidTarget(_) | Error::MissingCurve { .. })) => return Err(e),
            Err(e) => {
                h /= 2.0;
                if h < MIN_HOMOTOPY_STEP {
                    return Err(Error::StepTooLarge {
                        index: 0,
                        reason: format!("homotopy stalled at λ = {lambda}: {e}"),
                    });
                }
            }
        }
    }
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ComplexValue;
    use crate::gieseking::gieseking_triangulation;

    #[test]
    fn constant_targets_give_constant_solutions() {
        let tri = gieseking_triangulation();
        let targets = vec![SolveTarget::Complete; 4];
        let sols = solve_path(&tri, &targets).unwrap();
        for s in &sols {
            assert!(s.distance(&sols[0]) < 1e-14);
        }
    }

    #[test]
    fn filling_path_lands_on_the_curve() {
        let tri = gieseking_triangulation();
        let targets: Vec<SolveTarget> = [400.0, 200.0, 100.0, 60.0, 40.0, 30.0]
            .iter()
            .map(|&q| SolveTarget::klein_filling(q))
            .collect();
        let points = solve_path_from(
            &tri,
            &ShapeAssignment::regular(1),
            &targets,
            &SolverOptions::default(),
        )
        .unwrap();
        for (point, &q) in points.iter().zip(&[400.0, 200.0, 100.0, 60.0, 40.0, 30.0]) {
            let w = -point.shapes[0].inv();
            assert!(((w * (w + 1.0)).norm() - 1.0).abs() < 1e-9);
            let cusp = point.peripheral.as_ref().unwrap().cusps[0];
            let (p, q_got) = cusp.coefficients.finite().unwrap();
            assert!(p.abs() < 1e-8);
            assert!((q_got - q).abs() < 1e-6 * q);
        }
    }

    #[test]
    fn reversed_path_gives_reversed_solutions() {
        let tri = gieseking_triangulation();
        let qs = [80.0, 60.0, 45.0, 35.0];
        let forward: Vec<SolveTarget> = qs.iter().map(|&q| SolveTarget::klein_filling(q)).collect();
        let fwd = solve_path(&tri, &forward).unwrap();
        let backward: Vec<SolveTarget> = forward.iter().rev().cloned().collect();
        let bwd = solve_path_from(&tri, &fwd[3], &backward, &SolverOptions::default()).unwrap();
        for (a, b) in fwd.iter().rev().zip(&bwd) {
            assert!(a.distance(&b.shapes) < 1e-8);
        }
    }

    #[test]
    fn oversized_step_reports_bisection() {
        let tri = gieseking_triangulation();
        let seed = ShapeAssignment::new(vec![ComplexValue::new(0.5, 0.8660254037844386)]).unwrap();
        let opts = SolverOptions {
            capture_radius: 1e-3,
            ..SolverOptions::default()
        };
        let err = solve_path_from(&tri, &seed, &[SolveTarget::klein_filling(2.5)], &opts).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge { index: 0, .. }), "{err}");
        assert!(err.to_string().contains("bisect"));
    }

    #[test]
    fn homotopy_reaches_a_small_filling() {
        let tri = gieseking_triangulation();
        let point = solve_by_continuation(&tri, &SolveTarget::klein_filling(6.0), &SolverOptions::default()).unwrap();
        let (p, q) = point.peripheral.unwrap().cusps[0].coefficients.finite().unwrap();
        assert!(p.abs() < 1e-8 && (q - 6.0).abs() < 1e-8);
        let w = -point.shapes[0].inv();
        assert!(((w * (w + 1.0)).norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn failed_step_keeps_the_state() {
        let tri = gieseking_triangulation();
        let opts = SolverOptions {
            capture_radius: 1e-3,
            ..SolverOptions::default()
        };
        let mut walker = Continuation::new(&tri, &ShapeAssignment::regular(1), &opts).unwrap();
        let before = walker.shapes().clone();
        assert!(walker.step(&SolveTarget::klein_filling(2.5)).is_err());
        assert_eq!(walker.shapes(), &before);
    }
}
