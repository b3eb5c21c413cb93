use serde::{Deserialize, Serialize};

use super::{
    center_candidates, cut_graph, detect_spiral, subsets, CutGraph, CutSet, DetectError, DetectOptions, HamiltonSearch,
    Prepared, Verdict,
};
use crate::classify::ClassMode;
use crate::geometry::{winding_number, Point};
use crate::patch::{ids_of, Patch};
use crate::thread::{build_ring_thread, class_condition, verify_ring_thread, Strategy, Thread};

/// A ring partition: nested rings around a center, innermost first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingReport {
    pub cut: CutSet,
    /// Tile ids per ring in cycle order.
    pub rings: Vec<Vec<String>>,
    /// Closed threads (last point not repeated).
    pub threads: Vec<Vec<Point>>,
    /// Angle swept by each thread about the center.
    pub windings: Vec<f64>,
    pub center: Point,
}

/// Outcome of combining spiral and ring detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    StrongSpiral,
    SpiralWithRings,
    RingOnly,
    None,
}

impl Strength {
    pub fn from_parts(spiral: bool, ring: bool) -> Strength {
        match (spiral, ring) {
            (true, false) => Strength::StrongSpiral,
            (true, true) => Strength::SpiralWithRings,
            (false, true) => Strength::RingOnly,
            (false, false) => Strength::None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Strength::StrongSpiral => "strong spiral",
            Strength::SpiralWithRings => "spiral with ring partition",
            Strength::RingOnly => "ring only",
            Strength::None => "none",
        }
    }
}

impl std::fmt::Display for Strength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn min_radius(prep: &Prepared, comp: &[usize], center: Point) -> f64 {
    comp.iter()
        .map(|&t| {
            let s = prep.patch.shape(t);
            if s.contains_strictly(center, prep.patch.ctx.eps) {
                0.0
            } else {
                s.boundary_distance(center)
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Every point of `inner` lies strictly inside the closed curve `outer`.
fn strictly_inside(inner: &[Point], outer: &[Point], eps: f64) -> bool {
    let mut closed = outer.to_vec();
    closed.push(outer[0]);
    let mut ring = inner.to_vec();
    ring.push(inner[0]);
    inner.iter().all(|&q| winding_number(outer, q) != 0) && crate::geometry::polyline_distance(&ring, &closed) > eps
}

/// First closed thread through a component that winds once about `center`.
fn ring_thread(prep: &Prepared, g: &CutGraph, k: usize, center: Point, opts: &DetectOptions) -> Option<Thread> {
    let comp = &g.components[k];
    let local = g.local(prep, k);
    for cycle in HamiltonSearch::cycles(&local, opts.hamilton_budget).take(opts.path_limit) {
        let Ok(cycle) = cycle else { return None };
        let cycle: Vec<usize> = cycle.into_iter().map(|i| comp[i]).collect();
        for strategy in Strategy::ALL {
            if let Ok(t) = build_ring_thread(prep, &cycle, center, strategy) {
                if verify_ring_thread(&t, prep.patch.ctx.angle_eps).is_ok() {
                    return Some(t);
                }
            }
        }
    }
    None
}

fn try_cut(prep: &Prepared, cut: &CutSet, center: Point, opts: &DetectOptions) -> Option<RingReport> {
    let g = cut_graph(prep, cut);
    if g.components.len() < 2 || g.components.iter().any(|c| c.len() < 3) {
        return None;
    }
    let mut comp_of = vec![0; prep.patch.len()];
    for (k, c) in g.components.iter().enumerate() {
        for &t in c {
            comp_of[t] = k;
        }
    }
    let same = |e: usize| {
        let edge = prep.graph.edge(e);
        comp_of[edge.a] == comp_of[edge.b]
    };
    let none = Default::default();
    class_condition(prep, &prep.dg, &none, same).ok()?;
    class_condition(prep, &prep.cg, &none, same).ok()?;
    let mut order: Vec<usize> = (0..g.components.len()).collect();
    let radii: Vec<f64> = g.components.iter().map(|c| min_radius(prep, c, center)).collect();
    order.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]).then(a.cmp(&b)));
    let mut threads = Vec::with_capacity(order.len());
    for &k in &order {
        threads.push(ring_thread(prep, &g, k, center, opts)?);
    }
    let eps = prep.patch.ctx.eps;
    if threads
        .windows(2)
        .any(|w| !strictly_inside(&w[0].points, &w[1].points, eps))
    {
        return None;
    }
    Some(RingReport {
        cut: cut.clone(),
        rings: threads
            .iter()
            .map(|t| {
                let tiles: Vec<usize> = t.tile_visits.iter().map(|v| v.tile).collect();
                ids_of(&prep.patch, &tiles)
            })
            .collect(),
        windings: threads.iter().map(|t| t.winding().abs()).collect(),
        threads: threads.into_iter().map(|t| t.points).collect(),
        center,
    })
}

/// Searches cuts over the segmental classes for a strong ring partition:
/// nested components, each with a closed thread winding once around the
/// center, and no class with edges both inside and across rings.
pub fn detect_ring_partition(
    patch: &Patch,
    mode: ClassMode,
    opts: &DetectOptions,
) -> Result<Option<RingReport>, DetectError> {
    let prep = Prepared::new(patch, mode)?;
    ring_prepared(&prep, opts)
}

pub fn ring_prepared(prep: &Prepared, opts: &DetectOptions) -> Result<Option<RingReport>, DetectError> {
    if prep.dg.len() > opts.max_classes {
        return Err(DetectError::TooManyClasses {
            kind: "segmental",
            count: prep.dg.len(),
            limit: opts.max_classes,
        });
    }
    let centers = center_candidates(prep, opts);
    for ids in subsets(prep.dg.len()) {
        let cut = CutSet::dg(ids);
        for &c in &centers {
            if let Some(r) = try_cut(prep, &cut, c, opts) {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

/// Spiral search in the patch's own mode, ring search in similarity mode.
pub fn strength_classify(patch: &Patch, opts: &DetectOptions) -> Result<Strength, DetectError> {
    let spiral = detect_spiral(patch, opts)?.verdict == Verdict::Spiral;
    let ring = detect_ring_partition(patch, ClassMode::Similarity, opts)?.is_some();
    Ok(Strength::from_parts(spiral, ring))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strength_table() {
        assert_eq!(Strength::from_parts(true, false), Strength::StrongSpiral);
        assert_eq!(Strength::from_parts(true, true), Strength::SpiralWithRings);
        assert_eq!(Strength::from_parts(false, true), Strength::RingOnly);
        assert_eq!(Strength::from_parts(false, false), Strength::None);
        assert_eq!(Strength::SpiralWithRings.to_string(), "spiral with ring partition");
    }

    #[test]
    fn nesting_of_squares() {
        let sq = |r: f64| {
            vec![
                Point::new(-r, -r),
                Point::new(r, -r),
                Point::new(r, r),
                Point::new(-r, r),
            ]
        };
        assert!(strictly_inside(&sq(1.0), &sq(2.0), 1e-9));
        assert!(!strictly_inside(&sq(2.0), &sq(1.0), 1e-9));
        assert!(!strictly_inside(&sq(2.0), &sq(2.0), 1e-9));
    }
}
