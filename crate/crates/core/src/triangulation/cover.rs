use super::{CuspCurves, Gluing, HolonomyWord, Perm4, Triangulation, WordFactor};
use crate::error::{Error, Result};
use crate::solver::ShapeAssignment;

/// Which copy of a base tetrahedron a cover tetrahedron is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sheet {
    /// Same labels and orientation as the base tetrahedron.
    Plus,
    /// The mirror image, relabelled by swapping vertices 0 and 1.
    Minus,
}

impl Sheet {
    pub fn other(self) -> Sheet {
        match self {
            Sheet::Plus => Sheet::Minus,
            Sheet::Minus => Sheet::Plus,
        }
    }
}

/// How a cover cusp sits over a base cusp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspLift {
    /// The unique lift of a Klein-bottle cusp, invariant under the deck map.
    Klein { base: usize },
    /// One of the two lifts of a torus cusp; the deck map swaps them.
    Torus { base: usize, sheet: Sheet },
}

impl CuspLift {
    pub fn base(&self) -> usize {
        match *self {
            CuspLift::Klein { base } | CuspLift::Torus { base, .. } => base,
        }
    }
}

/// The orientation double cover of a non-orientable triangulation,
/// together with the correspondence to the base.
///
/// Tetrahedron `i` of the base lifts to cover tetrahedra `i` (plus sheet)
/// and `n + i` (minus sheet).
#[derive(Debug, Clone)]
pub struct DoubleCover {
    cover: Triangulation,
    base_count: usize,
    lifts: Vec<CuspLift>,
}

/// Builds the orientation double cover.
pub fn orientation_double_cover(base: &Triangulation) -> Result<DoubleCover> {
    if base.is_orientable() {
        return Err(Error::AlreadyOrientable);
    }
    let n = base.tetrahedra_count();
    let tau = Perm4::SWAP01;
    let mut gluings = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut faces = [Gluing::new(0, Perm4::IDENTITY); 4];
        for (f, slot) in faces.iter_mut().enumerate() {
            let g = base.gluing(i, f);
            *slot = if g.preserves_orientation() {
                Gluing::new(g.to_tet, g.perm)
            } else {
                Gluing::new(n + g.to_tet, tau.compose(&g.perm))
            };
        }
        gluings.push(faces);
    }
    for i in 0..n {
        let mut faces = [Gluing::new(0, Perm4::IDENTITY); 4];
        for (f, slot) in faces.iter_mut().enumerate() {
            let g = base.gluing(i, tau.apply(f));
            *slot = if g.preserves_orientation() {
                Gluing::new(n + g.to_tet, tau.compose(&g.perm).compose(&tau))
            } else {
                Gluing::new(g.to_tet, g.perm.compose(&tau))
            };
        }
        gluings.push(faces);
    }

    // Vertex classes first, without curves, to locate the lifts.
    let bare = Triangulation::new(format!("{}-cover", base.name()), gluings.clone(), vec![])?;
    let mut lifts: Vec<Option<CuspLift>> = vec![None; bare.cusp_links().len()];
    for (k, link) in base.cusp_links().iter().enumerate() {
        let (t, v) = link.representative();
        let find = |tet: usize, vertex: usize| {
            bare.cusp_links()
                .iter()
                .position(|l| l.contains(tet, vertex))
                .expect("every corner lies in a cusp")
        };
        let plus = find(t, v);
        let minus = find(n + t, tau.apply(v));
        if plus == minus {
            lifts[plus] = Some(CuspLift::Klein { base: k });
        } else {
            lifts[plus] = Some(CuspLift::Torus { base: k, sheet: Sheet::Plus });
            lifts[minus] = Some(CuspLift::Torus { base: k, sheet: Sheet::Minus });
        }
    }
    let lifts: Vec<CuspLift> = lifts
        .into_iter()
        .map(|l| l.ok_or_else(|| Error::Validation("cover cusp over no base cusp".into())))
        .collect::<Result<_>>()?;

    let cover_for = DoubleCover {
        cover: bare,
        base_count: n,
        lifts: lifts.clone(),
    };
    let mut cusps = Vec::with_capacity(lifts.len());
    for lift in &lifts {
        let base_cusp = &base.cusps()[lift.base()];
        let (name, sheet) = match *lift {
            CuspLift::Klein { .. } => (base_cusp.name.clone(), Sheet::Plus),
            CuspLift::Torus { sheet: Sheet::Plus, .. } => (format!("{}+", base_cusp.name), Sheet::Plus),
            CuspLift::Torus { sheet: Sheet::Minus, .. } => (format!("{}-", base_cusp.name), Sheet::Minus),
        };
        let mut curves = CuspCurves::new(name);
        for (label, word) in &base_cusp.curves {
            curves = curves.with_curve(label, cover_for.lift_word(word, sheet));
        }
        cusps.push(curves);
    }

    let cover = Triangulation::new(format!("{}-cover", base.name()), gluings, cusps)?;
    Ok(DoubleCover {
        cover,
        base_count: n,
        lifts,
    })
}

impl DoubleCover {
    pub fn triangulation(&self) -> &Triangulation {
        &self.cover
    }

    pub fn into_triangulation(self) -> Triangulation {
        self.cover
    }

    pub fn base_count(&self) -> usize {
        self.base_count
    }

    /// Cover tetrahedron lying over `base_tet` on the given sheet.
    pub fn lift(&self, base_tet: usize, sheet: Sheet) -> usize {
        match sheet {
            Sheet::Plus => base_tet,
            Sheet::Minus => self.base_count + base_tet,
        }
    }

    /// Base tetrahedron and sheet of a cover tetrahedron.
    pub fn project(&self, tet: usize) -> (usize, Sheet) {
        if tet < self.base_count {
            (tet, Sheet::Plus)
        } else {
            (tet - self.base_count, Sheet::Minus)
        }
    }

    /// The deck transformation on tetrahedra.
    pub fn partner(&self, tet: usize) -> usize {
        let (base, sheet) = self.project(tet);
        self.lift(base, sheet.other())
    }

    pub fn cusp_lifts(&self) -> &[CuspLift] {
        &self.lifts
    }

    /// Shapes `(z, 1/conj z)` on the two sheets: the structure induced from
    /// the base.
    pub fn lift_shapes(&self, base: &ShapeAssignment) -> ShapeAssignment {
        let mut z = base.values().to_vec();
        z.extend(base.values().iter().map(|v| v.conj().inv()));
        ShapeAssignment::new(z).expect("mirror of a valid shape is valid")
    }

    /// The plus-sheet shapes, i.e. the base structure of an invariant cover
    /// structure.
    pub fn project_shapes(&self, cover: &ShapeAssignment) -> ShapeAssignment {
        ShapeAssignment::new(cover.values()[..self.base_count].to_vec()).expect("sub-assignment of a valid one")
    }

    /// The deck transformation acting on cover shapes:
    /// `(z, w) ↦ (1/conj w, 1/conj z)` on each pair of sheets.
    pub fn involution_on_shapes(&self, shapes: &ShapeAssignment) -> Result<ShapeAssignment> {
        if shapes.len() != 2 * self.base_count {
            return Err(Error::InvalidParameter(format!(
                "expected {} cover shapes, got {}",
                2 * self.base_count,
                shapes.len()
            )));
        }
        let v = shapes.values();
        let mut out = Vec::with_capacity(v.len());
        for k in 0..v.len() {
            let w = v[self.partner(k)];
            if w.norm() == 0.0 {
                return Err(Error::ZeroShape(self.partner(k)));
            }
            out.push(w.conj().inv());
        }
        ShapeAssignment::new(out)
    }

    /// Lifts a base holonomy word to the cover. Unconjugated factors stay on
    /// the chosen sheet; conjugated ones move to the other sheet as the
    /// inverse of the mirrored edge class.
    pub fn lift_word(&self, word: &HolonomyWord, sheet: Sheet) -> HolonomyWord {
        let factors = word
            .factors()
            .iter()
            .map(|f| {
                let (s, class, exp) = if f.conj {
                    (sheet.other(), f.class.mirrored(), -f.exp)
                } else {
                    (sheet, f.class, f.exp)
                };
                let (class, exp) = if sheet == Sheet::Minus {
                    (class.mirrored(), -exp)
                } else {
                    (class, exp)
                };
                WordFactor::new(self.lift(f.tet, s), class, exp, false)
            })
            .collect();
        HolonomyWord::new(factors).expect("lift of a valid word")
    }

    /// The deck transformation acting on a cover word.
    pub fn involution_on_word(&self, word: &HolonomyWord) -> HolonomyWord {
        let factors = word
            .factors()
            .iter()
            .map(|f| WordFactor::new(self.partner(f.tet), f.class.mirrored(), -f.exp, f.conj))
            .collect();
        HolonomyWord::new(factors).expect("image of a valid word")
    }
}
