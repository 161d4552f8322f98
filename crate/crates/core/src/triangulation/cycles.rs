use super::Gluing;
use crate::error::{Error, Result};
use crate::geometry::EdgeClass;

/// One edge slot visited while walking around an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeStep {
    pub tet: usize,
    /// The edge as an ordered pair of vertex labels of `tet`.
    pub edge: (usize, usize),
    pub class: EdgeClass,
    /// `true` when the tetrahedron keeps the orientation of the first one
    /// in the cycle; its invariant then enters the edge equation as is,
    /// otherwise conjugated and inverted.
    pub epsilon: bool,
}

/// The tetrahedron edges identified to one edge of the triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCycle {
    steps: Vec<EdgeStep>,
}

impl EdgeCycle {
    pub fn steps(&self) -> &[EdgeStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Whether every tetrahedron around the edge keeps the orientation of
    /// the first.
    pub fn is_coherent(&self) -> bool {
        self.steps.iter().all(|s| s.epsilon)
    }
}

fn slot(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

/// Walks around every edge of the triangulation.
///
/// The walk for edge `(a, b)` of `tet` with the other vertices `c, d`
/// leaves through face `d`, arrives in the neighbour with the edge
/// `(π a, π b)` and leaves it again through face `π c`.
pub(crate) fn compute_edge_cycles(gluings: &[[Gluing; 4]]) -> Result<Vec<EdgeCycle>> {
    let n = gluings.len();
    let mut visited = vec![[false; 6]; n];
    let mut cycles = Vec::new();
    for tet in 0..n {
        for (a, b) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            if visited[tet][slot(a, b)] {
                continue;
            }
            let mut rest = (0..4).filter(|&x| x != a && x != b);
            let (c, d) = (rest.next().unwrap(), rest.next().unwrap());
            let start = (tet, a, b, c, d);
            let mut state = start;
            let mut epsilon = true;
            let mut steps = Vec::new();
            loop {
                let (t, a, b, c, d) = state;
                if visited[t][slot(a, b)] {
                    return Err(Error::Validation(format!(
                        "edge {a}{b} of tetrahedron {t} is identified with itself reversed"
                    )));
                }
                visited[t][slot(a, b)] = true;
                steps.push(EdgeStep {
                    tet: t,
                    edge: (a, b),
                    class: EdgeClass::of_edge(a, b),
                    epsilon,
                });
                let g = gluings[t][d];
                if g.perm.is_even() {
                    epsilon = !epsilon;
                }
                let p = g.perm;
                state = (g.to_tet, p.apply(a), p.apply(b), p.apply(d), p.apply(c));
                if state.0 == start.0 && slot(state.1, state.2) == slot(start.1, start.2) {
                    if state != start {
                        return Err(Error::Validation(format!(
                            "edge {}{} of tetrahedron {} closes up with a reflection",
                            start.1, start.2, start.0
                        )));
                    }
                    break;
                }
            }
            cycles.push(EdgeCycle { steps });
        }
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use crate::gieseking::gieseking_triangulation;

    #[test]
    fn gieseking_has_one_cycle_of_length_six() {
        let tri = gieseking_triangulation();
        let cycles = tri.edge_cycles();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 6);
        assert!(tri.edge_count_matches());
        let conjugated = cycles[0].steps().iter().filter(|s| !s.epsilon).count();
        assert_eq!(conjugated, 3);
    }

    #[test]
    fn slots_are_conserved() {
        let tri = gieseking_triangulation();
        let total: usize = tri.edge_cycles().iter().map(|c| c.len()).sum();
        assert_eq!(total, 6 * tri.tetrahedra_count());
    }
}
