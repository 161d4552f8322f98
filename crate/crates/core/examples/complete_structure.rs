//! Solves the gluing equations of the Gieseking manifold and its
//! orientation double cover for the complete structure.
//!
//! ```bash
//! cargo run --example complete_structure
//! ```

use cuspforge::geometry::ComplexValue;
use cuspforge::gieseking::{figure_eight_cover, gieseking_triangulation};
use cuspforge::holonomy::coordinate_report;
use cuspforge::solver::{newton_solve_with, ShapeAssignment, SolveTarget, SolverOptions};

fn main() -> cuspforge::Result<()> {
    let tri = gieseking_triangulation();
    let seed = ShapeAssignment::new(vec![ComplexValue::new(0.4, 0.9)])?;
    let report = newton_solve_with(&tri, &seed, &SolveTarget::Complete, &SolverOptions::default())?;
    println!("gieseking: z = {:.15}", report.shapes[0]);
    println!("  {} iterations, residual history:", report.iterations);
    for r in &report.residual_history {
        println!("    {r:.3e}");
    }
    for c in coordinate_report(&tri, &report.shapes)? {
        println!("  cusp {} (klein: {}): I_l = {:.2e}, I_m = {:.2e}", c.name, c.klein, c.i_longitude, c.i_meridian);
    }

    let cover = figure_eight_cover();
    let seed = ShapeAssignment::new(vec![ComplexValue::new(0.4, 0.9), ComplexValue::new(0.6, 0.8)])?;
    let report = newton_solve_with(cover.triangulation(), &seed, &SolveTarget::Complete, &SolverOptions::default())?;
    for (i, z) in report.shapes.values().iter().enumerate() {
        println!("figure-eight tet {i}: z = {z:.15}");
    }
    Ok(())
}
