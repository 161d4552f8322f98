//! Classifies Klein-bottle peripheral representations and reports the
//! geometry of the completed end.
//!
//! ```bash
//! cargo run --example classify_peripheral
//! ```

use cuspforge::geometry::{ComplexValue, ExtendedIsometry};
use cuspforge::klein::{classify, completion_geometry, KleinRepresentation, KleinType};

fn main() -> cuspforge::Result<()> {
    let h = ExtendedIsometry::new(
        ComplexValue::new(1.0, 0.5),
        ComplexValue::new(-0.3, 0.2),
        ComplexValue::new(0.7, 0.0),
        ComplexValue::new(1.2, -0.4),
        false,
    )?;
    let samples = [
        KleinType::ParabolicNonDegenerate { tau: 1.5 },
        KleinType::TypeI { l: 0.8, alpha: 1.1 },
        KleinType::TypeII { alpha: 2.4, l: 0.6 },
    ];
    for t in samples {
        let rep = KleinRepresentation::normal_form(t).conjugate_by(&h);
        let (ia2, ib) = rep.trace_invariants();
        let found = classify(&rep)?;
        let geometry = completion_geometry(found)?;
        println!("{t:?}");
        println!("  I_a2 = {:.6}, I_b = {:.6}", ia2.re, ib.re);
        println!("  classified as {found:?}");
        println!(
            "  completion: {} (cone angle {:.6}, singular length {:.6})",
            geometry.name(),
            geometry.cone_angle(),
            geometry.singular_length()
        );
    }
    Ok(())
}
