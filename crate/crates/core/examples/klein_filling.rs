//! Generalized Dehn filling of the Gieseking cusp along `(0, q)`.
//!
//! Each filling is reached by a homotopy from the complete structure. The
//! completion is a solid Klein bottle whose soul is a cone axis of angle
//! `2π/q`.
//!
//! ```bash
//! cargo run --example klein_filling
//! ```

use std::f64::consts::TAU;

use cuspforge::gieseking::{fiber_generators, w_from_shape};
use cuspforge::gieseking::gieseking_triangulation;
use cuspforge::klein::{classify, completion_geometry};
use cuspforge::solver::{solve_by_continuation, SolveTarget, SolverOptions};

fn main() -> cuspforge::Result<()> {
    let tri = gieseking_triangulation();
    println!("{:>6} {:>24} {:>10} {:>10} {:>10}", "q", "w", "2pi/q", "alpha", "soul");
    for q in [50.0, 20.0, 10.0, 5.0, 3.0, 2.0, 1.5] {
        let point = solve_by_continuation(&tri, &SolveTarget::klein_filling(q), &SolverOptions::default())?;
        let w = w_from_shape(point.shapes[0]);
        let kind = classify(&fiber_generators(w)?.peripheral())?;
        let geometry = completion_geometry(kind)?;
        println!(
            "{q:>6} {:>24.10} {:>10.6} {:>10.6} {:>10.6}",
            w,
            TAU / q,
            geometry.cone_angle(),
            geometry.singular_length()
        );
    }
    Ok(())
}
