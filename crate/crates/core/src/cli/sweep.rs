use std::f64::consts::TAU as TWO_PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::ComplexValue;
use crate::gieseking::{
    curve_point, edge_relation_residual, fiber_generators, gieseking_triangulation, longitude_word, meridian_word,
    shape_from_w, w_from_shape, GiesekingPoint,
};
use crate::holonomy::{evaluate_word, track_logs, CuspHolonomy, DehnCoefficients};
use crate::klein::{classify, completion_geometry, KleinTag};
use crate::solver::{Continuation, ShapeAssignment, SolveTarget, SolverOptions};
use crate::triangulation::Triangulation;

pub const CSV_HEADER: &str = "t,w_re,w_im,x_re,x_im,tau,type,cone_angle,sing_length,p,q,residual_norm";

/// One sample of the Gieseking deformation curve with its solver
/// cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub w: ComplexValue,
    pub x: ComplexValue,
    pub tau: f64,
    pub kind: KleinTag,
    pub cone_angle: f64,
    pub sing_length: f64,
    /// Filling coefficients of the solver point.
    pub coefficients: DehnCoefficients,
    pub residual_norm: f64,
    /// `w` recovered from the solved shape.
    pub solver_w: ComplexValue,
    /// Largest of the curve, edge-relation and solver disagreements.
    pub crosscheck: f64,
}

/// Sample parameters `t_k = (2k + 1)/n − 1`, symmetric about `t = 0`.
pub fn sample_parameters(n: usize) -> Vec<f64> {
    (0..n).map(|k| (2 * k + 1) as f64 / n as f64 - 1.0).collect()
}

fn closed_form_holonomy(prev: &CuspHolonomy, point: &GiesekingPoint) -> Result<CuspHolonomy> {
    let shapes = ShapeAssignment::new(vec![shape_from_w(point.w)])?;
    let l = evaluate_word(&longitude_word(), &shapes)?;
    let m = evaluate_word(&meridian_word(), &shapes)?;
    track_logs(prev, l, m)
}

/// Largest parameter increment taken in one continuation step.
const MAX_DT: f64 = 0.025;

fn make_row(point: &GiesekingPoint, shapes: &ShapeAssignment, coefficients: DehnCoefficients, residual: f64) -> Result<SweepRow> {
    let kind = classify(&fiber_generators(point.w)?.peripheral())?;
    let geometry = completion_geometry(kind)?;
    // The holonomy fixes the rotation angle only up to θ ↔ 2π − θ; the
    // filling coefficients pick the geometric one.
    let (cone_angle, fold) = match coefficients {
        DehnCoefficients::Finite { q, .. } => {
            let theta = TWO_PI / q.abs();
            (theta, (theta.min(TWO_PI - theta) - geometry.cone_angle()).abs())
        }
        DehnCoefficients::Infinite => (geometry.cone_angle(), 0.0),
    };
    let solver_w = w_from_shape(shapes[0]);
    let on_curve = ((solver_w * (solver_w + 1.0)).norm() - 1.0).abs();
    let crosscheck = (solver_w - point.w)
        .norm()
        .max(on_curve)
        .max(edge_relation_residual(point.w)?)
        .max(fold);
    Ok(SweepRow {
        t: point.t,
        w: point.w,
        x: point.x,
        tau: point.tau,
        kind: kind.tag(),
        cone_angle,
        sing_length: geometry.singular_length(),
        coefficients,
        residual_norm: residual,
        solver_w,
        crosscheck,
    })
}

/// Follows one half of the curve outward from the complete structure,
/// subdividing long steps.
fn chain(walker: &mut Continuation, ts: &[(usize, f64)]) -> Result<Vec<(usize, SweepRow)>> {
    let mut closed = CuspHolonomy::complete();
    let mut prev_t = 0.0;
    let mut out = Vec::with_capacity(ts.len());
    for &(k, t) in ts {
        let pieces = ((t - prev_t).abs() / MAX_DT).ceil().max(1.0) as usize;
        let mut solved = None;
        let mut point = None;
        for j in 1..=pieces {
            let tj = if j == pieces { t } else { prev_t + (t - prev_t) * j as f64 / pieces as f64 };
            let p = curve_point(tj)?;
            closed = closed_form_holonomy(&closed, &p)?;
            let q = match closed.coefficients {
                DehnCoefficients::Finite { q, .. } => q,
                DehnCoefficients::Infinite => return Err(Error::NonUniqueDehn),
            };
            let step = walker
                .step(&SolveTarget::klein_filling(q))
                .map_err(|e| Error::StepTooLarge {
                    index: k,
                    reason: e.to_string(),
                })?;
            solved = Some(step);
            point = Some(p);
        }
        prev_t = t;
        let (solved, point) = (solved.expect("at least one piece"), point.expect("at least one piece"));
        let coefficients = solved
            .peripheral
            .as_ref()
            .map(|p| p.cusps[0].coefficients)
            .ok_or(Error::MissingCurve {
                cusp: 0,
                curve: "longitude".into(),
            })?;
        out.push((k, make_row(&point, &solved.shapes, coefficients, solved.residual_norm)?));
    }
    Ok(out)
}

/// Samples the Gieseking deformation curve at `n` parameters and solves the
/// gluing equations at each, continuing outward from the complete
/// structure along both halves in parallel.
pub fn gieseking_sweep(n: usize) -> Result<Vec<SweepRow>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 samples, got {n}")));
    }
    let tri: Triangulation = gieseking_triangulation();
    let opts = SolverOptions::default();
    let mut start = Continuation::new(&tri, &ShapeAssignment::regular(1), &opts)?;
    let complete = start.step(&SolveTarget::Complete)?;

    let params = sample_parameters(n);
    let mut middle = None;
    let mut right = Vec::new();
    let mut left = Vec::new();
    for (k, &t) in params.iter().enumerate() {
        if t.abs() < 0.5 / n as f64 {
            middle = Some((k, t));
        } else if t > 0.0 {
            right.push((k, t));
        } else {
            left.push((k, t));
        }
    }
    left.reverse();

    let mut walker_left = start.clone();
    let mut walker_right = start;
    let (l, r) = rayon::join(|| chain(&mut walker_left, &left), || chain(&mut walker_right, &right));
    let mut rows: Vec<(usize, SweepRow)> = l?.into_iter().chain(r?).collect();
    if let Some((k, t)) = middle {
        let point = curve_point(t)?;
        rows.push((
            k,
            make_row(&point, &complete.shapes, DehnCoefficients::Infinite, complete.residual_norm)?,
        ));
    }
    rows.sort_by_key(|(k, _)| *k);
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

/// Fixed-width scientific formatting with 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let (p, q) = match r.coefficients {
            DehnCoefficients::Infinite => ("inf".to_string(), "inf".to_string()),
            DehnCoefficients::Finite { p, q } => (format_float(p), format_float(q)),
        };
        let fields = [
            format_float(r.t),
            format_float(r.w.re),
            format_float(r.w.im),
            format_float(r.x.re),
            format_float(r.x.im),
            format_float(r.tau),
            r.kind.as_str().to_string(),
            format_float(r.cone_angle),
            format_float(r.sing_length),
            p,
            q,
            format_float(r.residual_norm),
        ];
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_are_symmetric() {
        let ts = sample_parameters(5);
        assert_eq!(ts.len(), 5);
        assert!(ts[2].abs() < 1e-15);
        for k in 0..5 {
            assert!((ts[k] + ts[4 - k]).abs() < 1e-15);
        }
    }

    #[test]
    fn small_sweep_cross_checks() {
        let rows = gieseking_sweep(11).unwrap();
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[5].kind, KleinTag::Parabolic);
        assert!(rows[5].coefficients.is_infinite());
        for r in &rows {
            assert!(r.crosscheck < 1e-9, "{r:?}");
            if let Some((p, q)) = r.coefficients.finite() {
                assert!(p.abs() < 1e-8);
                assert!((q * r.t - 1.0).abs() < 1e-8, "{r:?}");
                assert!((r.cone_angle - TWO_PI * r.t.abs()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let rows = gieseking_sweep(3).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[2].contains(",parabolic,"));
        assert!(lines[2].ends_with(&format!(",inf,inf,{}", format_float(rows[1].residual_norm))));
        assert!(text.ends_with('\n'));
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }
}
