use std::ops::Index;

use crate::error::{Error, Result};
use crate::geometry::{regular_shape, ComplexValue, EdgeClass, TetrahedronShape};

/// One shape parameter per tetrahedron, indexed like the triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeAssignment {
    z: Vec<ComplexValue>,
}

impl ShapeAssignment {
    /// Rejects values at 0, 1 or infinity. Shapes below the real axis are
    /// allowed here; [`all_geometric`](Self::all_geometric) reports them.
    pub fn new(z: Vec<ComplexValue>) -> Result<Self> {
        for (i, &v) in z.iter().enumerate() {
            if v.norm() < 1e-300 {
                return Err(Error::ZeroShape(i));
            }
            TetrahedronShape::new(v)?;
        }
        Ok(ShapeAssignment { z })
    }

    pub fn regular(n: usize) -> Self {
        ShapeAssignment {
            z: vec![regular_shape(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn values(&self) -> &[ComplexValue] {
        &self.z
    }

    pub fn shape(&self, tet: usize) -> TetrahedronShape {
        TetrahedronShape::new(self.z[tet]).expect("validated on construction")
    }

    pub fn edge_invariant(&self, tet: usize, class: EdgeClass) -> ComplexValue {
        class.value(self.z[tet])
    }

    pub fn all_geometric(&self) -> bool {
        self.z.iter().all(|z| z.im > 0.0)
    }

    /// Largest componentwise distance to another assignment.
    pub fn distance(&self, other: &ShapeAssignment) -> f64 {
        self.z
            .iter()
            .zip(&other.z)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for ShapeAssignment {
    type Output = ComplexValue;

    fn index(&self, i: usize) -> &ComplexValue {
        &self.z[i]
    }
}
