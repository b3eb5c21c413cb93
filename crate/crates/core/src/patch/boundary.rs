use std::collections::{BTreeMap, BTreeSet};

use super::Patch;
use crate::geometry::{segment_distance, Point, PointIndex, Polygon};

/// One closed boundary curve of the union of tiles. Outer cycles run
/// counterclockwise, hole cycles clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCycle {
    pub points: Vec<Point>,
    /// Tile owning the sub-edge from `points[i]` to `points[i + 1]`.
    pub tiles: Vec<usize>,
    pub is_hole: bool,
}

impl BoundaryCycle {
    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    pub fn polygon(&self) -> Polygon {
        Polygon::new(self.points.clone())
    }

    pub fn distance_to_segment(&self, a: Point, b: Point) -> f64 {
        self.segments()
            .map(|(p, q)| segment_distance(a, b, p, q))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryCycles {
    pub cycles: Vec<BoundaryCycle>,
}

impl BoundaryCycles {
    pub fn outer(&self) -> impl Iterator<Item = &BoundaryCycle> {
        self.cycles.iter().filter(|c| !c.is_hole)
    }

    pub fn holes(&self) -> impl Iterator<Item = &BoundaryCycle> {
        self.cycles.iter().filter(|c| c.is_hole)
    }

    /// The cycles that count as patch border: outer cycles, plus hole cycles in
    /// singular mode.
    pub fn border_cycles(&self, singular_mode: bool) -> impl Iterator<Item = &BoundaryCycle> {
        self.cycles.iter().filter(move |c| singular_mode || !c.is_hole)
    }

    /// True iff segment `ab` (possibly degenerate) comes within eps of a
    /// border cycle.
    pub fn touches(&self, a: Point, b: Point, eps: f64, singular_mode: bool) -> bool {
        self.border_cycles(singular_mode)
            .any(|c| c.distance_to_segment(a, b) <= eps)
    }
}

/// Traces the boundary of the union of all tiles.
///
/// Tile edges are split at every patch vertex lying on them; a directed
/// sub-edge whose reverse belongs to no other tile is on the boundary. At
/// pinch vertices the trace takes the leftmost turn, so regions meeting in a
/// single point yield separate cycles.
pub fn outer_boundary(p: &Patch) -> BoundaryCycles {
    let eps = p.ctx.eps;
    let mut index = PointIndex::new(eps);
    for t in p.tiles() {
        for &v in t.shape.vertices() {
            index.insert(v);
        }
    }
    let verts: Vec<Point> = (0..index.len()).map(|i| index.point(i)).collect();
    let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (ti, t) in p.tiles().iter().enumerate() {
        for (a, b) in t.shape.edges() {
            let (ia, ib) = (index.insert(a), index.insert(b));
            let d = b - a;
            let l2 = d.norm2();
            let mut inner: Vec<(f64, usize)> = verts
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != ia && k != ib)
                .filter_map(|(k, &v)| {
                    let s = (v - a).dot(d) / l2;
                    let near = segment_distance(v, v, a, b) <= eps;
                    (near && s > 0.0 && s < 1.0).then_some((s, k))
                })
                .collect();
            inner.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut chain = vec![ia];
            chain.extend(inner.into_iter().map(|(_, k)| k));
            chain.push(ib);
            for w in chain.windows(2) {
                directed.insert((w[0], w[1]), ti);
            }
        }
    }
    let mut outgoing: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v) in directed.keys() {
        if !directed.contains_key(&(v, u)) {
            outgoing.entry(u).or_default().push(v);
        }
    }
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut cycles = Vec::new();
    let starts: Vec<(usize, usize)> = outgoing
        .iter()
        .flat_map(|(&u, vs)| vs.iter().map(move |&v| (u, v)))
        .collect();
    for (u0, v0) in starts {
        if used.contains(&(u0, v0)) {
            continue;
        }
        let mut pts = Vec::new();
        let mut owners = Vec::new();
        let (mut u, mut v) = (u0, v0);
        loop {
            used.insert((u, v));
            pts.push(verts[u]);
            owners.push(directed[&(u, v)]);
            let din = verts[v] - verts[u];
            let next = outgoing
                .get(&v)
                .into_iter()
                .flatten()
                .filter(|&&w| !used.contains(&(v, w)) || (v, w) == (u0, v0))
                .max_by(|&&w1, &&w2| {
                    let t1 = turn(din, verts[w1] - verts[v]);
                    let t2 = turn(din, verts[w2] - verts[v]);
                    t1.total_cmp(&t2)
                })
                .copied();
            match next {
                Some(w) if (v, w) == (u0, v0) => break,
                Some(w) => {
                    u = v;
                    v = w;
                }
                None => break,
            }
        }
        let area = Polygon::from_ccw(pts.clone()).signed_area();
        cycles.push(BoundaryCycle {
            points: pts,
            tiles: owners,
            is_hole: area < 0.0,
        });
    }
    BoundaryCycles { cycles }
}

fn turn(din: Point, dout: Point) -> f64 {
    din.cross(dout).atan2(din.dot(dout))
}

/// Tiles meeting the border cycles in a segment.
pub fn compute_border(p: &Patch, cycles: &BoundaryCycles) -> BTreeSet<usize> {
    cycles
        .border_cycles(p.singular_mode)
        .flat_map(|c| c.tiles.iter().copied())
        .collect()
}
