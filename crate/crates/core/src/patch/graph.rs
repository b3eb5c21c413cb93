use serde::Serialize;

use super::{Patch, PatchError};
use crate::geometry::{boundary_intersection, contact_kind, ContactKind, GeometryError, IntersectionSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactEdge {
    pub a: usize,
    pub b: usize,
    pub kind: ContactKind,
    pub contact: IntersectionSet,
}

/// Contact graph CG of a patch; its segmental edges form the direct contact
/// graph DG. Edges are ordered by tile index pair.
#[derive(Debug, Clone)]
pub struct ContactGraph {
    n: usize,
    edges: Vec<ContactEdge>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl ContactGraph {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[ContactEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &ContactEdge {
        &self.edges[e]
    }

    /// Indices of the edges of one kind, in edge order.
    pub fn edges_of(&self, kind: ContactKind) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].kind == kind).collect()
    }

    /// `(neighbor, edge index)` pairs of node `i`, ascending by neighbor.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adj[i]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a]
            .binary_search_by_key(&b, |&(nb, _)| nb)
            .ok()
            .map(|k| self.adj[a][k].1)
    }
}

pub fn build_contact_graph(p: &Patch) -> Result<ContactGraph, PatchError> {
    let n = p.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let contact = match boundary_intersection(p.shape(a), p.shape(b), &p.ctx) {
                Ok(s) => s,
                Err(GeometryError::OverlappingInteriors) => {
                    return Err(PatchError::Overlap(p.id(a).into(), p.id(b).into()))
                }
                Err(e) => unreachable!("boundary_intersection returned {e}"),
            };
            let kind = contact_kind(&contact);
            if kind != ContactKind::None {
                edges.push(ContactEdge { a, b, kind, contact });
            }
        }
    }
    let mut adj = vec![Vec::new(); n];
    for (k, e) in edges.iter().enumerate() {
        adj[e.a].push((e.b, k));
        adj[e.b].push((e.a, k));
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    Ok(ContactGraph { n, edges, adj })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polygon;
    use crate::patch::Tile;

    fn grid(w: usize, h: usize) -> Patch {
        let mut tiles = Vec::new();
        for y in 0..h {
            for x in 0..w {
                tiles.push(Tile::new(
                    format!("s{y}{x}"),
                    Polygon::rect(x as f64, y as f64, x as f64 + 1.0, y as f64 + 1.0),
                ));
            }
        }
        Patch::new(tiles, None)
    }

    #[test]
    fn two_by_three_grid_counts() {
        let g = build_contact_graph(&grid(2, 3)).unwrap();
        assert_eq!(g.edges_of(ContactKind::Segmental).len(), 7);
        assert_eq!(g.edges_of(ContactKind::Pointwise).len(), 4);
        assert_eq!(g.edges().len(), 11);
    }

    #[test]
    fn corner_touch_is_pointwise() {
        let p = Patch::new(
            vec![
                Tile::new("a", Polygon::rect(0.0, 0.0, 1.0, 1.0)),
                Tile::new("b", Polygon::rect(1.0, 1.0, 2.0, 2.0)),
            ],
            None,
        );
        let g = build_contact_graph(&p).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].kind, ContactKind::Pointwise);
    }

    #[test]
    fn row_is_a_path() {
        let g = build_contact_graph(&grid(5, 1)).unwrap();
        assert_eq!(g.edges().len(), 4);
        assert!((0..4).all(|i| g.edge_between(i, i + 1).is_some()));
    }
}
