//! Threads through spiral arms and rings, and the checks run on them.
//!
//! A thread through a tile sequence runs from the representative point of
//! each tile to a crossing point on the contact with the next tile and on to
//! that tile's representative point. Within a tile the pieces are interior
//! routes, so every tile meets the thread in one connected piece.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::EdgeClassTable;
use crate::detect::Prepared;
use crate::geometry::{
    closed_polyline_is_simple, polyline_distance, polyline_is_simple, route_inside, unwrapped_angle, winding_number,
    ContactKind, GeometryError, Point,
};

/// How a thread crosses its tiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strategy {
    /// Pass through each tile's representative point.
    pub through_rep: bool,
    /// Arc-length fraction along each contact chain for the crossing point.
    pub fraction: f64,
}

impl Strategy {
    pub const DEFAULT: Strategy = Strategy {
        through_rep: true,
        fraction: 0.5,
    };

    /// Strategies tried in order until a thread passes its checks.
    pub const ALL: [Strategy; 6] = [
        Strategy::DEFAULT,
        Strategy {
            through_rep: false,
            fraction: 0.5,
        },
        Strategy {
            through_rep: true,
            fraction: 1.0 / 3.0,
        },
        Strategy {
            through_rep: true,
            fraction: 2.0 / 3.0,
        },
        Strategy {
            through_rep: false,
            fraction: 1.0 / 3.0,
        },
        Strategy {
            through_rep: false,
            fraction: 2.0 / 3.0,
        },
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TileVisit {
    pub tile: usize,
    pub entry: Point,
    pub exit: Point,
    /// Index range of the thread points inside this tile's piece.
    pub first: usize,
    pub last: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thread {
    pub points: Vec<Point>,
    pub center: Point,
    pub phi: Vec<f64>,
    pub tile_visits: Vec<TileVisit>,
}

impl Thread {
    pub fn winding(&self) -> f64 {
        match (self.phi.first(), self.phi.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    /// Tile at the thread end nearer to the center.
    pub fn start_tile(&self) -> usize {
        let first = self.points[0].dist(self.center);
        let last = self.points[self.points.len() - 1].dist(self.center);
        if first <= last {
            self.tile_visits[0].tile
        } else {
            self.tile_visits[self.tile_visits.len() - 1].tile
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThreadError {
    #[error("no interior route through tile {0}")]
    NoRoute(String),
    #[error("tiles {0} and {1} are not in contact")]
    MissingContact(String, String),
    #[error("thread is not simple")]
    NotSimple,
    #[error("thread passes through the center")]
    CenterOnCurve,
}

fn crossing(prep: &Prepared, a: usize, b: usize, fraction: f64) -> Result<(Point, bool), ThreadError> {
    let p = &prep.patch;
    let e = prep
        .graph
        .edge_between(a, b)
        .ok_or_else(|| ThreadError::MissingContact(p.id(a).into(), p.id(b).into()))?;
    let edge = prep.graph.edge(e);
    let x = edge
        .contact
        .crossing_point(fraction, p.ctx.eps)
        .ok_or_else(|| ThreadError::MissingContact(p.id(a).into(), p.id(b).into()))?;
    Ok((x, edge.kind == ContactKind::Pointwise))
}

fn route(prep: &Prepared, tile: usize, waypoints: &[Point]) -> Result<Vec<Point>, ThreadError> {
    let poly = prep.patch.shape(tile);
    let mut out = vec![waypoints[0]];
    for w in waypoints.windows(2) {
        let leg = route_inside(poly, w[0], w[1], &prep.patch.ctx)
            .map_err(|_| ThreadError::NoRoute(prep.patch.id(tile).into()))?;
        out.extend_from_slice(&leg[1..]);
    }
    Ok(out)
}

/// Polyline through the tiles of `seq` in order; when `closed`, the last tile
/// connects back to the first and the result is a closed polyline (last
/// point not repeated).
fn assemble(
    prep: &Prepared,
    seq: &[usize],
    closed: bool,
    strategy: Strategy,
) -> Result<(Vec<Point>, Vec<TileVisit>), ThreadError> {
    let n = seq.len();
    let links = if closed { n } else { n.saturating_sub(1) };
    let mut cross = Vec::with_capacity(links);
    for i in 0..links {
        cross.push(crossing(prep, seq[i], seq[(i + 1) % n], strategy.fraction)?.0);
    }
    let mut points: Vec<Point> = Vec::new();
    let mut visits = Vec::with_capacity(n);
    for (i, &t) in seq.iter().enumerate() {
        let rep = prep.reps[t];
        let entry = if closed {
            Some(cross[(i + n - 1) % n])
        } else {
            (i > 0).then(|| cross[i - 1])
        };
        let exit = (closed || i + 1 < n).then(|| cross[i]);
        let waypoints: Vec<Point> = match (entry, exit) {
            (None, None) => vec![rep],
            (None, Some(x)) => vec![rep, x],
            (Some(e), None) => vec![e, rep],
            (Some(e), Some(x)) if strategy.through_rep => vec![e, rep, x],
            (Some(e), Some(x)) => vec![e, x],
        };
        let piece = if waypoints.len() == 1 {
            waypoints
        } else {
            route(prep, t, &waypoints)?
        };
        let first = if points.is_empty() { 0 } else { points.len() - 1 };
        if points.is_empty() {
            points.extend_from_slice(&piece);
        } else {
            points.extend_from_slice(&piece[1..]);
        }
        visits.push(TileVisit {
            tile: t,
            entry: piece[0],
            exit: piece[piece.len() - 1],
            first,
            last: points.len() - 1,
        });
    }
    if closed {
        points.pop();
    }
    Ok((points, visits))
}

/// Center-independent part of an arm thread: the simple polyline and its
/// tile visits.
pub fn thread_polyline(
    prep: &Prepared,
    path: &[usize],
    strategy: Strategy,
) -> Result<(Vec<Point>, Vec<TileVisit>), ThreadError> {
    let (points, visits) = assemble(prep, path, false, strategy)?;
    if !polyline_is_simple(&points, prep.patch.ctx.eps) {
        return Err(ThreadError::NotSimple);
    }
    Ok((points, visits))
}

impl Thread {
    /// Attaches a center to a thread polyline, computing its angles.
    pub fn about(
        points: Vec<Point>,
        tile_visits: Vec<TileVisit>,
        center: Point,
        eps: f64,
    ) -> Result<Thread, ThreadError> {
        let phi = unwrapped_angle(&points, center, eps).map_err(|_| ThreadError::CenterOnCurve)?;
        Ok(Thread {
            points,
            center,
            phi,
            tile_visits,
        })
    }
}

/// Builds the thread of an arm along a Hamilton path of tile indices.
pub fn build_thread(prep: &Prepared, path: &[usize], center: Point, strategy: Strategy) -> Result<Thread, ThreadError> {
    let (points, visits) = thread_polyline(prep, path, strategy)?;
    Thread::about(points, visits, center, prep.patch.ctx.eps)
}

/// Builds the closed thread of a ring along a Hamilton cycle.
pub fn build_ring_thread(
    prep: &Prepared,
    cycle: &[usize],
    center: Point,
    strategy: Strategy,
) -> Result<Thread, ThreadError> {
    let (points, tile_visits) = assemble(prep, cycle, true, strategy)?;
    let eps = prep.patch.ctx.eps;
    if !closed_polyline_is_simple(&points, eps) {
        return Err(ThreadError::NotSimple);
    }
    let mut ring = points.clone();
    ring.push(points[0]);
    let phi = unwrapped_angle(&ring, center, eps).map_err(|_| ThreadError::CenterOnCurve)?;
    Ok(Thread {
        points,
        center,
        phi,
        tile_visits,
    })
}

/// True iff consecutive angles never move against the overall direction by
/// more than `angle_eps`.
pub fn is_monotone(phi: &[f64], angle_eps: f64) -> bool {
    let up = phi.windows(2).all(|w| w[1] - w[0] >= -angle_eps);
    let down = phi.windows(2).all(|w| w[1] - w[0] <= angle_eps);
    up || down
}

/// Why an arm thread fails its checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArmThreadFailure {
    #[error("thread angle is not monotone")]
    NotMonotone,
    #[error("thread winds {got:.3} rad, below the required {need:.3} rad")]
    ShortWinding { got: f64, need: f64 },
}

/// Checks a single arm thread: monotone angle and enough winding.
pub fn check_arm_thread(t: &Thread, min_winding: f64, angle_eps: f64) -> Result<(), ArmThreadFailure> {
    if !is_monotone(&t.phi, angle_eps) {
        return Err(ArmThreadFailure::NotMonotone);
    }
    let w = t.winding().abs();
    if w < min_winding - angle_eps {
        return Err(ArmThreadFailure::ShortWinding {
            got: w,
            need: min_winding,
        });
    }
    Ok(())
}

/// Definition L on a finite patch: every thread simple, monotone and winding
/// at least `min_winding`, and threads pairwise disjoint.
pub fn verify_l(threads: &[Thread], min_winding: f64, eps: f64, angle_eps: f64) -> Result<(), String> {
    for (i, t) in threads.iter().enumerate() {
        if !polyline_is_simple(&t.points, eps) {
            return Err(format!("thread {i} is not simple"));
        }
        check_arm_thread(t, min_winding, angle_eps).map_err(|r| format!("thread {i}: {r}"))?;
    }
    for i in 0..threads.len() {
        for j in i + 1..threads.len() {
            if polyline_distance(&threads[i].points, &threads[j].points) <= eps {
                return Err(format!("threads {i} and {j} meet"));
            }
        }
    }
    Ok(())
}

/// A pair of contact edges showing that a neighbor constellation inside an
/// arm recurs elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: ContactKind,
    pub class: usize,
    pub inside: (String, String),
    pub elsewhere: (String, String),
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "pair ({}, {}) is inside an arm but the congruent pair ({}, {}) of class {} is not",
            self.inside.0, self.inside.1, self.elsewhere.0, self.elsewhere.1, self.class
        )
    }
}

/// Class-wise neighbor condition shared by S2 and O2.
///
/// `inside(e)` says whether contact edge `e` joins direct neighbors within one
/// part. For every class holding such an edge, all its edges must satisfy
/// `inside`, ignoring edges with an exempt tile.
pub fn class_condition(
    prep: &Prepared,
    table: &EdgeClassTable,
    exempt: &BTreeSet<usize>,
    inside: impl Fn(usize) -> bool,
) -> Result<(), Witness> {
    let g = &prep.graph;
    let p = &prep.patch;
    let pair = |e: usize| {
        let edge = g.edge(e);
        (p.id(edge.a).to_string(), p.id(edge.b).to_string())
    };
    for class in &table.classes {
        let relevant: Vec<usize> = class
            .edges
            .iter()
            .copied()
            .filter(|&e| !exempt.contains(&g.edge(e).a) && !exempt.contains(&g.edge(e).b))
            .collect();
        let Some(&w) = relevant.iter().find(|&&e| inside(e)) else {
            continue;
        };
        if let Some(&bad) = relevant.iter().find(|&&e| !inside(e)) {
            return Err(Witness {
                kind: table.kind,
                class: class.id,
                inside: pair(w),
                elsewhere: pair(bad),
            });
        }
    }
    Ok(())
}

/// Definition S2: neighbor pairs inside an arm never recur across arms.
///
/// `arm_of[t]` is the arm of tile `t`; `paths` are the tile sequences the
/// threads follow (pointwise contacts count as neighbors only when a thread
/// passes through them); tiles in `exempt` hold an arm start.
pub fn verify_s(
    prep: &Prepared,
    arm_of: &[usize],
    paths: &[Vec<usize>],
    exempt: &BTreeSet<usize>,
) -> Result<(), Witness> {
    let g = &prep.graph;
    let mut crossed = BTreeSet::new();
    for path in paths {
        for w in path.windows(2) {
            if let Some(e) = g.edge_between(w[0], w[1]) {
                crossed.insert(e);
            }
        }
    }
    let inside = |e: usize| {
        let edge = g.edge(e);
        arm_of[edge.a] == arm_of[edge.b] && (edge.kind == ContactKind::Segmental || crossed.contains(&e))
    };
    class_condition(prep, &prep.dg, exempt, inside)?;
    class_condition(prep, &prep.cg, exempt, inside)
}

/// Spiral boundary of a one-armed partition: the union of the cut contacts
/// as one polyline.
pub fn spiral_boundary(prep: &Prepared, cut_edges: &[usize]) -> Result<Vec<Point>, String> {
    let eps = prep.patch.ctx.eps;
    let mut segs: Vec<(Point, Point)> = Vec::new();
    let mut points: Vec<Point> = Vec::new();
    for &e in cut_edges {
        let c = &prep.graph.edge(e).contact;
        segs.extend_from_slice(&c.segments);
        points.extend_from_slice(&c.isolated_points);
    }
    if segs.is_empty() {
        return Err("cut has no segmental contacts".into());
    }
    let set = crate::geometry::IntersectionSet {
        segments: segs,
        isolated_points: Vec::new(),
    };
    let chain = set
        .chain(eps)
        .ok_or_else(|| "cut contacts do not form one curve".to_string())?;
    if points.iter().any(|&q| !chain.iter().any(|&c| c.dist(q) <= eps)) {
        return Err("a pointwise cut contact lies off the spiral boundary".into());
    }
    Ok(chain)
}

/// Definitions O1 and O2 for a cut leaving a single component.
pub fn verify_o(prep: &Prepared, cut_edges: &[usize], min_winding: f64) -> Result<Vec<Point>, String> {
    let ctx = &prep.patch.ctx;
    let chain = spiral_boundary(prep, cut_edges)?;
    if !polyline_is_simple(&chain, ctx.eps) {
        return Err("spiral boundary is not simple".into());
    }
    for w in chain.windows(2) {
        let m = w[0].midpoint(w[1]);
        if !prep.patch.tiles().iter().any(|t| t.shape.on_boundary(m, ctx.eps)) {
            return Err("spiral boundary leaves the tile boundaries".into());
        }
    }
    let mut last_err = String::from("spiral boundary does not wind");
    for reversed in [false, true] {
        let mut b = chain.clone();
        if reversed {
            b.reverse();
        }
        let start = b[0];
        let phi = match unwrapped_angle(&b[1..], start, ctx.eps) {
            Ok(phi) => phi,
            Err(GeometryError::CenterOnCurve { .. }) => {
                last_err = "spiral boundary returns to its start".into();
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        if !is_monotone(&phi, ctx.angle_eps) {
            last_err = "spiral boundary angle is not monotone about its start".into();
            continue;
        }
        let w = (phi[phi.len() - 1] - phi[0]).abs();
        if w < min_winding - ctx.angle_eps {
            last_err = format!(
                "spiral boundary winds {:.3} rad about its start, below {:.3} rad",
                w, min_winding
            );
            continue;
        }
        let cut: BTreeSet<usize> = cut_edges.iter().copied().collect();
        let inside = |e: usize| prep.graph.edge(e).kind == ContactKind::Segmental && !cut.contains(&e);
        class_condition(prep, &prep.dg, &BTreeSet::new(), inside).map_err(|w| w.to_string())?;
        return Ok(b);
    }
    Err(last_err)
}

/// Ring thread condition: simple closed curve, monotone angle, exactly one
/// turn about the center.
pub fn verify_ring_thread(t: &Thread, angle_eps: f64) -> Result<(), String> {
    if !is_monotone(&t.phi, angle_eps) {
        return Err("ring thread angle is not monotone".into());
    }
    let w = t.winding().abs();
    if (w - TAU).abs() > angle_eps {
        return Err(format!("ring thread winds {w:.6} rad instead of one full turn"));
    }
    if winding_number(&t.points, t.center).abs() != 1 {
        return Err("ring thread does not enclose the center once".into());
    }
    Ok(())
}
