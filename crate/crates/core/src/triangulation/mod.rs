//! Combinatorial ideal triangulations.
//!
//! A triangulation is a set of tetrahedra with vertices labelled 0..3, face
//! `f` being the face opposite vertex `f`, and a gluing for every face. A
//! gluing sends the vertices of a face to the vertices of its partner face
//! by a permutation of the four labels.
//!
//! Orientation convention: gluing two positively labelled tetrahedra
//! through an odd permutation extends their orientation across the face.
//! An even permutation reverses it.

mod cover;
mod cusps;
mod cycles;
mod format;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use cover::{orientation_double_cover, CuspLift, DoubleCover, Sheet};
pub use cusps::CuspLink;
pub use cycles::{EdgeCycle, EdgeStep};
pub use format::{load_triangulation, load_triangulation_str, TriangulationDocument, FORMAT_VERSION};

use crate::error::{Error, Result};
use crate::geometry::EdgeClass;

/// A permutation of the vertex labels {0, 1, 2, 3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Perm4([usize; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);
    /// Exchanges vertices 0 and 1.
    pub const SWAP01: Perm4 = Perm4([1, 0, 2, 3]);

    pub fn new(images: [usize; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i] {
                return Err(Error::Validation(format!("{images:?} is not a permutation of 0..3")));
            }
            seen[i] = true;
        }
        Ok(Perm4(images))
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> [usize; 4] {
        self.0
    }

    pub fn inverse(&self) -> Perm4 {
        let mut out = [0; 4];
        for (i, &j) in self.0.iter().enumerate() {
            out[j] = i;
        }
        Perm4(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        Perm4([0, 1, 2, 3].map(|i| self.0[other.0[i]]))
    }

    pub fn is_even(&self) -> bool {
        crate::geometry::shape_is_even(&self.0)
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// Where a face is glued: the partner tetrahedron and the vertex map.
/// The partner face is `perm.apply(face)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    pub to_tet: usize,
    pub perm: Perm4,
}

impl Gluing {
    pub fn new(to_tet: usize, perm: Perm4) -> Self {
        Gluing { to_tet, perm }
    }

    /// Odd permutations carry the orientation of one tetrahedron onto the
    /// orientation of its neighbour.
    pub fn preserves_orientation(&self) -> bool {
        !self.perm.is_even()
    }
}

/// One factor `f^exp` of a holonomy word, where `f` is the edge invariant of
/// `class` in tetrahedron `tet`, conjugated first when `conj` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordFactor {
    pub tet: usize,
    #[serde(rename = "edge_class")]
    pub class: EdgeClass,
    pub exp: i32,
    #[serde(default)]
    pub conj: bool,
}

impl WordFactor {
    pub fn new(tet: usize, class: EdgeClass, exp: i32, conj: bool) -> Self {
        WordFactor { tet, class, exp, conj }
    }
}

/// Symbolic product of edge invariants giving the derivative of the
/// holonomy of a peripheral curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolonomyWord {
    factors: Vec<WordFactor>,
}

impl HolonomyWord {
    pub fn new(factors: Vec<WordFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Validation("holonomy word is empty".into()));
        }
        if let Some(f) = factors.iter().find(|f| f.exp != 1 && f.exp != -1) {
            return Err(Error::Validation(format!("word exponent {} is not ±1", f.exp)));
        }
        Ok(HolonomyWord { factors })
    }

    pub fn factors(&self) -> &[WordFactor] {
        &self.factors
    }
}

/// Peripheral curves declared for one cusp, keyed by label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CuspCurves {
    pub name: String,
    pub curves: BTreeMap<String, HolonomyWord>,
}

/// Curve labels used by the solver and the Dehn-filling machinery.
pub const LONGITUDE: &str = "longitude";
pub const MERIDIAN: &str = "meridian";

impl CuspCurves {
    pub fn new(name: impl Into<String>) -> Self {
        CuspCurves {
            name: name.into(),
            curves: BTreeMap::new(),
        }
    }

    pub fn with_curve(mut self, label: &str, word: HolonomyWord) -> Self {
        self.curves.insert(label.to_string(), word);
        self
    }

    pub fn curve(&self, label: &str) -> Option<&HolonomyWord> {
        self.curves.get(label)
    }
}

/// A validated ideal triangulation with its edge cycles and cusp links.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    name: String,
    gluings: Vec<[Gluing; 4]>,
    cusps: Vec<CuspCurves>,
    edge_cycles: Vec<EdgeCycle>,
    cusp_links: Vec<CuspLink>,
}

impl Triangulation {
    /// Validates the face pairings and computes the derived data.
    ///
    /// `cusps` is either empty, in which case unnamed cusps without curves
    /// are created, or has one entry per vertex class in the order of
    /// [`cusp_links`](Self::cusp_links).
    pub fn new(name: impl Into<String>, gluings: Vec<[Gluing; 4]>, cusps: Vec<CuspCurves>) -> Result<Self> {
        let n = gluings.len();
        if n == 0 {
            return Err(Error::Validation("triangulation has no tetrahedra".into()));
        }
        for (tet, faces) in gluings.iter().enumerate() {
            for (face, g) in faces.iter().enumerate() {
                if g.to_tet >= n {
                    return Err(Error::Validation(format!(
                        "face ({tet}, {face}) is glued to missing tetrahedron {}",
                        g.to_tet
                    )));
                }
                let to_face = g.perm.apply(face);
                if g.to_tet == tet && to_face == face {
                    return Err(Error::Validation(format!("face ({tet}, {face}) is glued to itself")));
                }
                let back = gluings[g.to_tet][to_face];
                if back.to_tet != tet || back.perm != g.perm.inverse() {
                    return Err(Error::Validation(format!(
                        "gluing is not an involution: ({tet}, {face}) -> ({}, {to_face}) via {} but the reverse is ({}, {}) via {}",
                        g.to_tet,
                        g.perm,
                        back.to_tet,
                        back.perm.apply(to_face),
                        back.perm
                    )));
                }
            }
        }

        let edge_cycles = cycles::compute_edge_cycles(&gluings)?;
        let cusp_links = cusps::compute_cusp_links(&gluings)?;

        let cusps = if cusps.is_empty() {
            (0..cusp_links.len()).map(|i| CuspCurves::new(format!("cusp{i}"))).collect()
        } else if cusps.len() != cusp_links.len() {
            return Err(Error::Validation(format!(
                "{} cusps declared but the triangulation has {}",
                cusps.len(),
                cusp_links.len()
            )));
        } else {
            cusps
        };
        for (i, cusp) in cusps.iter().enumerate() {
            for (label, word) in &cusp.curves {
                if let Some(f) = word.factors().iter().find(|f| f.tet >= n) {
                    return Err(Error::Validation(format!(
                        "curve `{label}` of cusp {i} refers to missing tetrahedron {}",
                        f.tet
                    )));
                }
            }
        }

        Ok(Triangulation {
            name: name.into(),
            gluings,
            cusps,
            edge_cycles,
            cusp_links,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tetrahedra_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    pub fn cusps(&self) -> &[CuspCurves] {
        &self.cusps
    }

    pub fn edge_cycles(&self) -> &[EdgeCycle] {
        &self.edge_cycles
    }

    pub fn cusp_links(&self) -> &[CuspLink] {
        &self.cusp_links
    }

    /// A valid cusped triangulation has as many edges as tetrahedra.
    pub fn edge_count_matches(&self) -> bool {
        self.edge_cycles.len() == self.tetrahedra_count()
    }

    /// Orientation sign of each tetrahedron making every gluing
    /// orientation-preserving, or `None` when no such choice exists.
    pub fn coherent_orientation(&self) -> Option<Vec<bool>> {
        let n = self.tetrahedra_count();
        let mut sign: Vec<Option<bool>> = vec![None; n];
        for root in 0..n {
            if sign[root].is_some() {
                continue;
            }
            sign[root] = Some(true);
            let mut stack = vec![root];
            while let Some(t) = stack.pop() {
                let s = sign[t].unwrap();
                for g in &self.gluings[t] {
                    let expected = if g.preserves_orientation() { s } else { !s };
                    match sign[g.to_tet] {
                        None => {
                            sign[g.to_tet] = Some(expected);
                            stack.push(g.to_tet);
                        }
                        Some(existing) if existing != expected => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(sign.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_orientable(&self) -> bool {
        self.coherent_orientation().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_algebra() {
        let p = Perm4::new([3, 0, 2, 1]).unwrap();
        assert!(p.is_even());
        assert_eq!(p.compose(&p.inverse()), Perm4::IDENTITY);
        assert!(!Perm4::SWAP01.is_even());
        assert!(Perm4::new([0, 0, 1, 2]).is_err());
        assert!(Perm4::new([0, 1, 2, 4]).is_err());
    }

    #[test]
    fn word_validation() {
        assert!(HolonomyWord::new(vec![]).is_err());
        assert!(HolonomyWord::new(vec![WordFactor::new(0, EdgeClass::First, 2, false)]).is_err());
    }

    #[test]
    fn face_glued_to_itself_is_rejected() {
        let g = Gluing::new(0, Perm4::IDENTITY);
        let err = Triangulation::new("bad", vec![[g; 4]], vec![]).unwrap_err();
        assert!(err.to_string().contains("glued to itself"));
    }

    #[test]
    fn inconsistent_inverse_is_rejected() {
        let gies = crate::gieseking::gieseking_triangulation();
        let mut gluings = gies.gluings().to_vec();
        // Break the reverse map of face 2 while keeping the target face.
        gluings[0][2] = Gluing::new(0, Perm4::new([2, 1, 0, 3]).unwrap());
        let err = Triangulation::new("bad", gluings, vec![]).unwrap_err();
        assert!(err.to_string().contains("not an involution"), "{err}");
    }
}
