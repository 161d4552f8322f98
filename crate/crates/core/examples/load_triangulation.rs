//! Reads a triangulation file and prints its combinatorics.
//!
//! ```bash
//! cargo run --example load_triangulation -- data/gieseking.json
//! ```

use cuspforge::triangulation::Triangulation;

fn main() -> cuspforge::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "data/gieseking.json".into());
    let tri = Triangulation::from_path(&path)?;
    println!("{} ({} tetrahedra), orientable: {}", tri.name(), tri.tetrahedra_count(), tri.is_orientable());
    for (i, cycle) in tri.edge_cycles().iter().enumerate() {
        let steps: Vec<String> = cycle
            .steps()
            .iter()
            .map(|s| format!("{}:{}{}{}", s.tet, s.edge.0, s.edge.1, if s.epsilon { "" } else { "*" }))
            .collect();
        println!("edge {i}: {}", steps.join(" "));
    }
    for (cusp, link) in tri.cusps().iter().zip(tri.cusp_links()) {
        let curves: Vec<&String> = cusp.curves.keys().collect();
        println!(
            "cusp {}: {} with curves {:?}",
            cusp.name,
            if link.is_klein_bottle() { "Klein bottle" } else { "torus" },
            curves
        );
    }
    Ok(())
}
