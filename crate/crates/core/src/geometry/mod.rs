//! Complex arithmetic, isometries of hyperbolic space and ideal tetrahedra.
//!
//! Points of the ideal boundary are points of the Riemann sphere. Isometries
//! of H^3 act there as Möbius maps, optionally preceded by complex
//! conjugation for the orientation-reversing half of the group.

mod isometry;
mod shape;

pub use isometry::{ExtendedIsometry, RiemannPoint};
pub use shape::{cross_ratio_edge_invariant, ideal_vertices, shape_triple, EdgeClass, TetrahedronShape};
pub(crate) use shape::is_even as shape_is_even;

/// Complex scalar used for shapes, edge invariants and matrix entries.
pub type ComplexValue = num_complex::Complex64;

/// The shape of the regular ideal tetrahedron, `1/2 + i sqrt(3)/2`.
pub fn regular_shape() -> ComplexValue {
    ComplexValue::new(0.5, 3f64.sqrt() / 2.0)
}
