//! The closed-form deformation curve of the Gieseking manifold and its
//! image on the character circle `|x − 1| = 1`.
//!
//! ```bash
//! cargo run --example gieseking_curve
//! ```

use cuspforge::gieseking::{
    character, classify_character, commutator_trace_from_x, curve_point, edge_relation_residual, fiber_generators,
    CIRCLE_TOL,
};
use cuspforge::klein::verify_relation;

fn main() -> cuspforge::Result<()> {
    println!("{:>6} {:>26} {:>26} {:>8} {:>9} {:>9}", "t", "w", "x", "tau", "type", "relation");
    for k in -4..=4 {
        let t = k as f64 / 5.0;
        let p = curve_point(t)?;
        let (_, off) = character(p.w);
        let tau_x = commutator_trace_from_x(p.x, CIRCLE_TOL)?;
        assert!((tau_x - p.tau).abs() < 1e-9 && off.abs() < 1e-12);
        let gens = fiber_generators(p.w)?;
        let relation = edge_relation_residual(p.w)?.max(verify_relation(&gens.peripheral()));
        println!(
            "{t:>6.2} {:>26.12} {:>26.12} {:>8.4} {:>9} {relation:>9.1e}",
            p.w,
            p.x,
            p.tau,
            classify_character(p.x, CIRCLE_TOL)?.as_str()
        );
    }
    Ok(())
}
