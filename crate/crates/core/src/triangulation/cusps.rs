use super::Gluing;
use crate::error::{Error, Result};

/// The link of one ideal vertex class: a closed surface triangulated by the
/// vertex corners of the tetrahedra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspLink {
    /// `(tet, vertex)` corners, sorted.
    pub corners: Vec<(usize, usize)>,
    pub orientable: bool,
    pub euler_characteristic: i64,
}

impl CuspLink {
    pub fn is_torus(&self) -> bool {
        self.orientable && self.euler_characteristic == 0
    }

    pub fn is_klein_bottle(&self) -> bool {
        !self.orientable && self.euler_characteristic == 0
    }

    pub fn triangle_count(&self) -> usize {
        self.corners.len()
    }

    /// The corner used to name the cusp: the smallest `(tet, vertex)`.
    pub fn representative(&self) -> (usize, usize) {
        self.corners[0]
    }

    pub fn contains(&self, tet: usize, vertex: usize) -> bool {
        self.corners.binary_search(&(tet, vertex)).is_ok()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Vertex classes ordered by their smallest corner, with the topology of
/// each link surface.
pub(crate) fn compute_cusp_links(gluings: &[[Gluing; 4]]) -> Result<Vec<CuspLink>> {
    let n = gluings.len();
    let corner = |t: usize, v: usize| 4 * t + v;

    let mut classes = UnionFind::new(4 * n);
    for (t, faces) in gluings.iter().enumerate() {
        for (f, g) in faces.iter().enumerate() {
            for v in (0..4).filter(|&v| v != f) {
                classes.union(corner(t, v), corner(g.to_tet, g.perm.apply(v)));
            }
        }
    }

    // Vertices of the link triangles are the corners (t, v, u): the end of
    // edge vu near vertex v. They are identified across the two faces of t
    // containing both v and u.
    let link_vertex = |t: usize, v: usize, u: usize| 16 * t + 4 * v + u;
    let mut link_vertices = UnionFind::new(16 * n);
    for (t, faces) in gluings.iter().enumerate() {
        for (f, g) in faces.iter().enumerate() {
            for v in (0..4).filter(|&v| v != f) {
                for u in (0..4).filter(|&u| u != f && u != v) {
                    link_vertices.union(
                        link_vertex(t, v, u),
                        link_vertex(g.to_tet, g.perm.apply(v), g.perm.apply(u)),
                    );
                }
            }
        }
    }

    let mut roots: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
    for t in 0..n {
        for v in 0..4 {
            let r = classes.find(corner(t, v));
            let idx = match roots.iter().position(|&x| x == r) {
                Some(i) => i,
                None => {
                    roots.push(r);
                    members.push(Vec::new());
                    roots.len() - 1
                }
            };
            members[idx].push((t, v));
        }
    }

    let mut links = Vec::with_capacity(members.len());
    for (i, corners) in members.into_iter().enumerate() {
        let faces = corners.len() as i64;
        let edges = 3 * faces / 2;
        let mut seen = Vec::new();
        for &(t, v) in &corners {
            for u in (0..4).filter(|&u| u != v) {
                let r = link_vertices.find(link_vertex(t, v, u));
                if !seen.contains(&r) {
                    seen.push(r);
                }
            }
        }
        let chi = seen.len() as i64 - edges + faces;
        if chi != 0 {
            return Err(Error::Validation(format!(
                "the link of cusp {i} has Euler characteristic {chi}, expected 0"
            )));
        }
        let orientable = link_orientable(gluings, &corners);
        links.push(CuspLink {
            corners,
            orientable,
            euler_characteristic: chi,
        });
    }
    Ok(links)
}

/// Each corner triangle inherits an orientation from its tetrahedron. The
/// link is orientable when the tetrahedra meeting the vertex class can be
/// signed so that all gluings between corners preserve it.
fn link_orientable(gluings: &[[Gluing; 4]], corners: &[(usize, usize)]) -> bool {
    let mut sign: Vec<Option<bool>> = vec![None; corners.len()];
    let index = |c: (usize, usize)| corners.binary_search(&c).expect("corner in class");
    sign[0] = Some(true);
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let (t, v) = corners[i];
        let s = sign[i].unwrap();
        for f in (0..4).filter(|&f| f != v) {
            let g = gluings[t][f];
            let j = index((g.to_tet, g.perm.apply(v)));
            let expected = if g.preserves_orientation() { s } else { !s };
            match sign[j] {
                None => {
                    sign[j] = Some(expected);
                    stack.push(j);
                }
                Some(existing) if existing != expected => return false,
                Some(_) => {}
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use crate::gieseking::gieseking_triangulation;

    #[test]
    fn gieseking_cusp_is_a_klein_bottle() {
        let tri = gieseking_triangulation();
        let links = tri.cusp_links();
        assert_eq!(links.len(), 1);
        assert!(links[0].is_klein_bottle());
        assert_eq!(links[0].triangle_count(), 4);
    }
}
