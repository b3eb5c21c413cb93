use std::collections::{BTreeMap, BTreeSet};

use super::{CutSet, LocalGraph, Prepared};
use crate::geometry::{ContactKind, Point};
use crate::patch::find;

/// A connected piece of the union of the cut contacts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryComponent {
    pub edges: Vec<usize>,
    pub touches_border: bool,
}

/// Connected components of the union of the contacts of `cut_edges`, each
/// marked by whether it reaches the patch border.
pub fn arm_boundary_components(prep: &Prepared, cut_edges: &[usize]) -> Vec<BoundaryComponent> {
    let index: BTreeMap<usize, usize> = cut_edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..cut_edges.len()).collect();
    for (i, &e) in cut_edges.iter().enumerate() {
        for f in &prep.contact_links[e] {
            if let Some(&j) = index.get(f) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &e) in cut_edges.iter().enumerate() {
        groups.entry(find(&mut parent, i)).or_default().push(e);
    }
    groups
        .into_values()
        .map(|edges| BoundaryComponent {
            touches_border: edges.iter().any(|&e| prep.contact_on_border[e]),
            edges,
        })
        .collect()
}

/// The graph G left after a cut, with its components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutGraph {
    /// Contact edges kept in G.
    pub edges: Vec<usize>,
    /// Tile indices per component, ascending; components ordered by first tile.
    pub components: Vec<Vec<usize>>,
}

impl CutGraph {
    /// Component `k` as a graph on local indices `0..len`.
    pub fn local(&self, prep: &Prepared, k: usize) -> LocalGraph {
        let comp = &self.components[k];
        let pos: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let edges = self.edges.iter().filter_map(|&e| {
            let edge = prep.graph.edge(e);
            Some((*pos.get(&edge.a)?, *pos.get(&edge.b)?))
        });
        LocalGraph::new(comp.len(), edges)
    }
}

/// G = DG minus the edges of the cut's segmental classes. For an extended
/// cut, pointwise contacts whose class is not in the cut are added.
pub fn cut_graph(prep: &Prepared, cut: &CutSet) -> CutGraph {
    let removed: BTreeSet<usize> = cut.dg_classes.iter().copied().collect();
    let skipped: BTreeSet<usize> = cut.cg_classes.iter().copied().collect();
    let edges: Vec<usize> = prep
        .graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(e, edge)| match edge.kind {
            ContactKind::Segmental => !removed.contains(&prep.dg.class_of(*e).unwrap_or(0)),
            ContactKind::Pointwise => cut.extended && !skipped.contains(&prep.cg.class_of(*e).unwrap_or(0)),
            ContactKind::None => false,
        })
        .map(|(e, _)| e)
        .collect();
    let n = prep.patch.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for &e in &edges {
        let edge = prep.graph.edge(e);
        let (ra, rb) = (find(&mut parent, edge.a), find(&mut parent, edge.b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for t in 0..n {
        groups.entry(find(&mut parent, t)).or_default().push(t);
    }
    CutGraph {
        edges,
        components: groups.into_values().collect(),
    }
}

/// Checks that no tile meets more than two other tiles in single points
/// through edges of G. Returns the offending tile and its count.
pub fn point_contact_limit_ok(prep: &Prepared, g_edges: &[usize]) -> Result<(), (usize, usize)> {
    let eps = prep.patch.ctx.eps;
    let mut touch: Vec<Vec<Point>> = vec![Vec::new(); prep.patch.len()];
    for &e in g_edges {
        let edge = prep.graph.edge(e);
        if edge.kind != ContactKind::Pointwise {
            continue;
        }
        for &q in &edge.contact.isolated_points {
            for t in [edge.a, edge.b] {
                if !touch[t].iter().any(|p| p.dist(q) <= eps) {
                    touch[t].push(q);
                }
            }
        }
    }
    match touch.iter().position(|v| v.len() > 2) {
        Some(t) => Err((t, touch[t].len())),
        None => Ok(()),
    }
}
