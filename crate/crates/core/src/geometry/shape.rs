use serde::{Deserialize, Serialize};

use super::{ComplexValue, RiemannPoint};
use crate::error::{Error, Result};

/// One of the three pairs of opposite edges of a tetrahedron.
///
/// With vertices labelled 0..3, `First` is the pair {01, 23} and carries the
/// shape `z`, `Second` is {02, 13} with `1/(1 − z)` and `Third` is {03, 12}
/// with `(z − 1)/z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum EdgeClass {
    First,
    Second,
    Third,
}

impl EdgeClass {
    pub const ALL: [EdgeClass; 3] = [EdgeClass::First, EdgeClass::Second, EdgeClass::Third];

    pub fn index(self) -> usize {
        match self {
            EdgeClass::First => 0,
            EdgeClass::Second => 1,
            EdgeClass::Third => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        EdgeClass::ALL.get(i).copied()
    }

    /// Class of the edge joining vertices `a` and `b`.
    pub fn of_edge(a: usize, b: usize) -> Self {
        debug_assert!(a != b && a < 4 && b < 4);
        let other = |x: usize, y: usize| (a == x && b == y) || (a == y && b == x);
        if other(0, 1) || other(2, 3) {
            EdgeClass::First
        } else if other(0, 2) || other(1, 3) {
            EdgeClass::Second
        } else {
            EdgeClass::Third
        }
    }

    /// The class whose edges are exchanged with this one by swapping the
    /// labels of vertices 0 and 1.
    pub fn mirrored(self) -> Self {
        match self {
            EdgeClass::First => EdgeClass::First,
            EdgeClass::Second => EdgeClass::Third,
            EdgeClass::Third => EdgeClass::Second,
        }
    }

    pub fn value(self, z: ComplexValue) -> ComplexValue {
        let one = ComplexValue::new(1.0, 0.0);
        match self {
            EdgeClass::First => z,
            EdgeClass::Second => (one - z).inv(),
            EdgeClass::Third => (z - one) / z,
        }
    }

    /// Derivative of `log value(z)` with respect to `z`.
    pub fn dlog(self, z: ComplexValue) -> ComplexValue {
        let one = ComplexValue::new(1.0, 0.0);
        match self {
            EdgeClass::First => z.inv(),
            EdgeClass::Second => (one - z).inv(),
            EdgeClass::Third => (z * (z - one)).inv(),
        }
    }
}

impl TryFrom<u8> for EdgeClass {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        EdgeClass::from_index(v as usize).ok_or_else(|| format!("edge class {v} is not in 0..3"))
    }
}

impl From<EdgeClass> for u8 {
    fn from(c: EdgeClass) -> u8 {
        c.index() as u8
    }
}

/// Shape parameter of an ideal tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetrahedronShape {
    z: ComplexValue,
}

impl TetrahedronShape {
    /// Accepts any finite value away from 0 and 1. Whether the tetrahedron
    /// is positively oriented is reported by [`is_geometric`](Self::is_geometric).
    pub fn new(z: ComplexValue) -> Result<Self> {
        if !z.is_finite() || z.norm() < 1e-300 || (z - 1.0).norm() < 1e-300 {
            return Err(Error::DegenerateShape(z));
        }
        Ok(TetrahedronShape { z })
    }

    pub fn regular() -> Self {
        TetrahedronShape { z: super::regular_shape() }
    }

    pub fn z(&self) -> ComplexValue {
        self.z
    }

    pub fn is_geometric(&self) -> bool {
        self.z.im > 0.0
    }

    /// Flat but non-degenerate: real and away from 0 and 1.
    pub fn is_boundary_degenerate(&self) -> bool {
        self.z.im == 0.0
    }

    pub fn edge_invariant(&self, class: EdgeClass) -> ComplexValue {
        class.value(self.z)
    }

    pub fn triple(&self) -> (ComplexValue, ComplexValue, ComplexValue) {
        (
            self.edge_invariant(EdgeClass::First),
            self.edge_invariant(EdgeClass::Second),
            self.edge_invariant(EdgeClass::Third),
        )
    }

    /// Shape of the mirror image, read with vertices 0 and 1 swapped so
    /// that it is positively oriented again.
    pub fn mirrored(&self) -> TetrahedronShape {
        TetrahedronShape { z: self.z.conj().inv() }
    }
}

/// `(z, 1/(1 − z), (z − 1)/z)`.
pub fn shape_triple(z: ComplexValue) -> Result<(ComplexValue, ComplexValue, ComplexValue)> {
    Ok(TetrahedronShape::new(z)?.triple())
}

/// Ideal vertices of the tetrahedron with shape `z`, in label order.
///
/// Vertices 0..3 sit at `1, z, ∞, 0`, so the edge from vertex 2 to vertex 3
/// runs from ∞ to 0 and carries `z`.
pub fn ideal_vertices(z: ComplexValue) -> [RiemannPoint; 4] {
    [
        RiemannPoint::new(1.0, 0.0),
        RiemannPoint::Finite(z),
        RiemannPoint::Infinity,
        RiemannPoint::new(0.0, 0.0),
    ]
}

/// Edge invariant of the edge `(i, j)` of a tetrahedron with the given
/// ideal vertices, oriented by the vertex labels.
///
/// The remaining labels `k, l` are ordered so that `(i, j, k, l)` is an even
/// permutation; the invariant is the cross ratio
/// `(p_l − p_j)(p_k − p_i) / ((p_l − p_i)(p_k − p_j))`.
pub fn cross_ratio_edge_invariant(p: &[RiemannPoint; 4], i: usize, j: usize) -> ComplexValue {
    let mut rest = (0..4).filter(|&x| x != i && x != j);
    let (mut k, mut l) = (rest.next().unwrap(), rest.next().unwrap());
    if !is_even(&[i, j, k, l]) {
        std::mem::swap(&mut k, &mut l);
    }
    let diff = |x: usize, y: usize| match (p[x], p[y]) {
        (RiemannPoint::Finite(a), RiemannPoint::Finite(b)) => a - b,
        _ => ComplexValue::new(1.0, 0.0),
    };
    diff(l, j) * diff(k, i) / (diff(l, i) * diff(k, j))
}

pub(crate) fn is_even(perm: &[usize]) -> bool {
    let mut inversions = 0;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}
