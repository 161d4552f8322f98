use log::debug;
use nalgebra::{DMatrix, DVector};

use super::equations::{EquationSystem, SolveTarget};
use super::ShapeAssignment;
use crate::error::{Error, Result};
use crate::geometry::ComplexValue;
use crate::triangulation::Triangulation;

/// Tuning of the damped Newton iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Largest initial residual norm accepted.
    pub capture_radius: f64,
    pub max_halvings: usize,
    /// Singular values below `rank_tol · σ_max` count as zero.
    pub rank_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-11,
            max_iters: 50,
            capture_radius: 2.0,
            max_halvings: 20,
            rank_tol: 1e-10,
        }
    }
}

/// Result of a converged solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub shapes: ShapeAssignment,
    pub iterations: usize,
    /// Residual norm before each iteration and after the last.
    pub residual_history: Vec<f64>,
    /// Numerical rank of the last Jacobian.
    pub rank: usize,
}

impl SolveReport {
    pub fn residual_norm(&self) -> f64 {
        *self.residual_history.last().expect("history is never empty")
    }
}

/// Numerical rank and condition estimate of a matrix.
pub fn numerical_rank(jac: &DMatrix<f64>, rank_tol: f64) -> (usize, f64) {
    let sv = jac.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return (0, f64::INFINITY);
    }
    let kept: Vec<f64> = sv.iter().cloned().filter(|&s| s > rank_tol * max).collect();
    let min = kept.iter().cloned().fold(f64::INFINITY, f64::min);
    let expected = jac.ncols().min(jac.nrows());
    let condition = if kept.len() < expected { f64::INFINITY } else { max / min };
    (kept.len(), condition)
}

fn step_shapes(shapes: &ShapeAssignment, delta: &DVector<f64>, t: f64) -> Vec<ComplexValue> {
    shapes
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| z + ComplexValue::new(t * delta[2 * i], t * delta[2 * i + 1]))
        .collect()
}

/// Damped Newton iteration on an equation system.
pub fn solve_system(system: &EquationSystem, initial: &ShapeAssignment, opts: &SolverOptions) -> Result<SolveReport> {
    let mut shapes = initial.clone();
    let mut r = system.residual(&shapes)?;
    let mut norm = r.norm();
    if norm.is_nan() || norm > opts.capture_radius {
        return Err(Error::OutsideCaptureRadius {
            residual: norm,
            radius: opts.capture_radius,
        });
    }
    let mut history = vec![norm];
    let mut rank = system.unknowns();
    let mut iterations = 0;
    while norm >= opts.tol {
        if iterations == opts.max_iters {
            return Err(Error::Divergence {
                iterations,
                residual: norm,
            });
        }
        let jac = system.jacobian(&shapes)?;
        let svd = jac.clone().svd(true, true);
        let max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let eps = opts.rank_tol * max;
        let (r_now, condition) = numerical_rank(&jac, opts.rank_tol);
        rank = r_now;
        if rank < system.unknowns() {
            return Err(Error::SingularJacobian {
                rank,
                expected: system.unknowns(),
                condition,
            });
        }
        let delta = svd.solve(&(-&r), eps).map_err(|e| Error::InvalidParameter(e.to_string()))?;

        let mut t = 1.0;
        let mut accepted = None;
        let mut left_domain = None;
        for _ in 0..=opts.max_halvings {
            let candidate = step_shapes(&shapes, &delta, t);
            if let Some(i) = candidate.iter().position(|z| z.im <= 0.0) {
                left_domain = Some(i);
                t *= 0.5;
                continue;
            }
            if let Ok(next) = ShapeAssignment::new(candidate) {
                let r_next = system.residual(&next)?;
                if r_next.norm() < norm {
                    accepted = Some((next, r_next));
                    break;
                }
            }
            t *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some((next, r_next)) => {
                shapes = next;
                r = r_next;
                norm = r.norm();
                debug!("newton iteration {iterations}: step {t:.3e}, residual {norm:.3e}");
                history.push(norm);
            }
            None => {
                if let Some(i) = left_domain {
                    return Err(Error::Degeneration(i));
                }
                return Err(Error::Divergence {
                    iterations,
                    residual: norm,
                });
            }
        }
    }
    Ok(SolveReport {
        shapes,
        iterations,
        residual_history: history,
        rank,
    })
}

/// Solves the gluing equations with the given cusp target.
pub fn newton_solve(tri: &Triangulation, initial: &ShapeAssignment, target: &SolveTarget) -> Result<ShapeAssignment> {
    let system = EquationSystem::new(tri, target)?;
    Ok(solve_system(&system, initial, &SolverOptions::default())?.shapes)
}

/// Like [`newton_solve`] with explicit options, returning the iteration
/// report.
pub fn newton_solve_with(
    tri: &Triangulation,
    initial: &ShapeAssignment,
    target: &SolveTarget,
    opts: &SolverOptions,
) -> Result<SolveReport> {
    let system = EquationSystem::new(tri, target)?;
    solve_system(&system, initial, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular_shape;
    use crate::gieseking::gieseking_triangulation;
    use crate::triangulation::orientation_double_cover;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn recovers_the_regular_tetrahedron() {
        let tri = gieseking_triangulation();
        let init = ShapeAssignment::new(vec![c(0.4, 0.9)]).unwrap();
        let report = newton_solve_with(&tri, &init, &SolveTarget::Complete, &SolverOptions::default()).unwrap();
        assert!((report.shapes[0] - regular_shape()).norm() < 1e-10);
        assert!(report.residual_norm() < 1e-11);
    }

    #[test]
    fn converges_quadratically() {
        let tri = gieseking_triangulation();
        let init = ShapeAssignment::new(vec![c(0.45, 0.82)]).unwrap();
        let report = newton_solve_with(&tri, &init, &SolveTarget::Complete, &SolverOptions::default()).unwrap();
        let h = &report.residual_history;
        for k in 0..h.len() - 1 {
            if h[k] < 1e-2 && h[k + 1] > 1e-13 {
                assert!(h[k + 1] <= 10.0 * h[k] * h[k], "{h:?}");
            }
        }
    }

    #[test]
    fn solved_input_takes_no_iterations() {
        let tri = gieseking_triangulation();
        let init = ShapeAssignment::new(vec![regular_shape()]).unwrap();
        let report = newton_solve_with(&tri, &init, &SolveTarget::Complete, &SolverOptions::default()).unwrap();
        assert_eq!(report.iterations, 0);
        assert_eq!(report.shapes, init);
    }

    #[test]
    fn far_seed_is_rejected() {
        let tri = gieseking_triangulation();
        let init = ShapeAssignment::new(vec![c(30.0, 0.01)]).unwrap();
        let err = newton_solve(&tri, &init, &SolveTarget::Complete).unwrap_err();
        assert!(matches!(err, Error::OutsideCaptureRadius { .. }), "{err}");
    }

    #[test]
    fn figure_eight_complete_structure() {
        let cover = orientation_double_cover(&gieseking_triangulation()).unwrap();
        let init = ShapeAssignment::new(vec![c(0.4, 0.9), c(0.6, 0.8)]).unwrap();
        let s = newton_solve(cover.triangulation(), &init, &SolveTarget::Complete).unwrap();
        for z in s.values() {
            assert!((z - regular_shape()).norm() < 1e-10);
        }
    }
}
