//! JSON triangulation documents.
//!
//! ```json
//! {
//!   "format": 1,
//!   "name": "example",
//!   "tetrahedra_count": 1,
//!   "gluings": [
//!     {"tet": 0, "face": 0, "to_tet": 0, "to_face": 3, "vertex_map": [3, 0, 2, 1]}
//!   ],
//!   "cusps": [
//!     {"name": "c0", "curves": {"longitude": [{"tet": 0, "edge_class": 0, "exp": -1, "conj": true}]}}
//!   ]
//! }
//! ```
//!
//! `vertex_map[k]` is the vertex of `to_tet` that vertex `k` of `tet` is
//! glued to, so `to_face = vertex_map[face]`. A gluing may be listed from
//! one side only; the reverse is filled in. Cusps are listed in the order of
//! their smallest `(tet, vertex)` corner.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CuspCurves, Gluing, HolonomyWord, Perm4, Triangulation, WordFactor};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingRecord {
    pub tet: usize,
    pub face: usize,
    pub to_tet: usize,
    pub to_face: usize,
    pub vertex_map: [usize; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspRecord {
    pub name: String,
    #[serde(default)]
    pub curves: BTreeMap<String, Vec<WordFactor>>,
}

/// The serialized form of a [`Triangulation`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationDocument {
    pub format: u32,
    pub name: String,
    pub tetrahedra_count: usize,
    pub gluings: Vec<GluingRecord>,
    #[serde(default)]
    pub cusps: Vec<CuspRecord>,
}

impl TriangulationDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn into_triangulation(self) -> Result<Triangulation> {
        if self.format != FORMAT_VERSION {
            return Err(Error::Validation(format!(
                "unsupported format version {}, expected {FORMAT_VERSION}",
                self.format
            )));
        }
        let n = self.tetrahedra_count;
        let mut table: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; n];
        let mut set = |tet: usize, face: usize, g: Gluing| -> Result<()> {
            match table[tet][face] {
                Some(existing) if existing != g => Err(Error::Validation(format!(
                    "face ({tet}, {face}) is glued twice: to ({}, {}) and to ({}, {})",
                    existing.to_tet,
                    existing.perm.apply(face),
                    g.to_tet,
                    g.perm.apply(face)
                ))),
                _ => {
                    table[tet][face] = Some(g);
                    Ok(())
                }
            }
        };
        for r in &self.gluings {
            if r.tet >= n || r.to_tet >= n || r.face > 3 || r.to_face > 3 {
                return Err(Error::Validation(format!(
                    "gluing ({}, {}) -> ({}, {}) is out of range for {n} tetrahedra",
                    r.tet, r.face, r.to_tet, r.to_face
                )));
            }
            let perm = Perm4::new(r.vertex_map)?;
            if perm.apply(r.face) != r.to_face {
                return Err(Error::Validation(format!(
                    "vertex_map {:?} of face ({}, {}) sends the opposite vertex to {}, not to face {}",
                    r.vertex_map,
                    r.tet,
                    r.face,
                    perm.apply(r.face),
                    r.to_face
                )));
            }
            set(r.tet, r.face, Gluing::new(r.to_tet, perm))?;
        }
        // Infer missing reverse gluings.
        for r in &self.gluings {
            let perm = Perm4::new(r.vertex_map)?;
            if table[r.to_tet][r.to_face].is_none() {
                table[r.to_tet][r.to_face] = Some(Gluing::new(r.tet, perm.inverse()));
            }
        }
        let mut gluings = Vec::with_capacity(n);
        for (tet, faces) in table.into_iter().enumerate() {
            let mut out = [Gluing::new(0, Perm4::IDENTITY); 4];
            for (face, g) in faces.into_iter().enumerate() {
                out[face] = g.ok_or_else(|| Error::Validation(format!("face ({tet}, {face}) is not glued")))?;
            }
            gluings.push(out);
        }

        let mut cusps = Vec::with_capacity(self.cusps.len());
        for c in self.cusps {
            let mut curves = CuspCurves::new(c.name);
            for (label, factors) in c.curves {
                let word = HolonomyWord::new(factors)
                    .map_err(|e| Error::Validation(format!("curve `{label}` of cusp `{}`: {e}", curves.name)))?;
                curves = curves.with_curve(&label, word);
            }
            cusps.push(curves);
        }
        Triangulation::new(self.name, gluings, cusps)
    }
}

impl Triangulation {
    /// The canonical document: every face listed, sorted by `(tet, face)`.
    pub fn to_document(&self) -> TriangulationDocument {
        let mut gluings = Vec::with_capacity(4 * self.tetrahedra_count());
        for (tet, faces) in self.gluings().iter().enumerate() {
            for (face, g) in faces.iter().enumerate() {
                gluings.push(GluingRecord {
                    tet,
                    face,
                    to_tet: g.to_tet,
                    to_face: g.perm.apply(face),
                    vertex_map: g.perm.images(),
                });
            }
        }
        let cusps = self
            .cusps()
            .iter()
            .map(|c| CuspRecord {
                name: c.name.clone(),
                curves: c
                    .curves
                    .iter()
                    .map(|(label, word)| (label.clone(), word.factors().to_vec()))
                    .collect(),
            })
            .collect();
        TriangulationDocument {
            format: FORMAT_VERSION,
            name: self.name().to_string(),
            tetrahedra_count: self.tetrahedra_count(),
            gluings,
            cusps,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document()).expect("documents always serialize");
        s.push('\n');
        s
    }
}

pub fn load_triangulation_str(text: &str) -> Result<Triangulation> {
    TriangulationDocument::parse(text)?.into_triangulation()
}

/// Reads and validates a triangulation document.
pub fn load_triangulation<R: Read>(mut source: R) -> Result<Triangulation> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    load_triangulation_str(&text)
}

impl Triangulation {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Triangulation> {
        load_triangulation(std::fs::File::open(path)?)
    }
}
