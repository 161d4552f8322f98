//! Builds the orientation double cover of the Gieseking manifold, which is
//! the figure-eight knot complement, and checks the deck involution on
//! shapes and holonomy words.
//!
//! ```bash
//! cargo run --example double_cover
//! ```

use cuspforge::geometry::ComplexValue;
use cuspforge::gieseking::{gieseking_triangulation, meridian_word};
use cuspforge::holonomy::evaluate_word;
use cuspforge::solver::{residual, ShapeAssignment, SolveTarget};
use cuspforge::triangulation::{orientation_double_cover, Sheet};

fn main() -> cuspforge::Result<()> {
    let base = gieseking_triangulation();
    let cover = orientation_double_cover(&base)?;
    let tri = cover.triangulation();
    println!("{}: {} tetrahedra, orientable: {}", tri.name(), tri.tetrahedra_count(), tri.is_orientable());
    for (i, cycle) in tri.edge_cycles().iter().enumerate() {
        println!("  edge {i}: length {}, coherent: {}", cycle.len(), cycle.is_coherent());
    }
    for link in tri.cusp_links() {
        println!("  cusp: torus {}, {} triangles", link.is_torus(), link.triangle_count());
    }

    // A solution downstairs lifts to an involution-invariant solution.
    let z = ShapeAssignment::new(vec![ComplexValue::new(0.5, 3f64.sqrt() / 2.0)])?;
    let lifted = cover.lift_shapes(&z);
    let swapped = cover.involution_on_shapes(&lifted)?;
    println!("lift {:?}, invariant: {}", lifted.values(), lifted.distance(&swapped) < 1e-14);
    println!("cover residual {:.2e}", residual(tri, &lifted, &SolveTarget::Complete)?.norm());

    // Off the complete structure the lifted meridian picks up 1/conj.
    let z = ShapeAssignment::new(vec![ComplexValue::new(0.45, 0.82)])?;
    let lifted = cover.lift_shapes(&z);
    let m = evaluate_word(&meridian_word(), &z)?;
    let up = evaluate_word(&cover.lift_word(&meridian_word(), Sheet::Plus), &lifted)?;
    let swapped = evaluate_word(&cover.involution_on_word(&cover.lift_word(&meridian_word(), Sheet::Plus)), &lifted)?;
    println!("M = {m:.6}, lifted M = {up:.6}, involution image = {swapped:.6}");
    Ok(())
}
