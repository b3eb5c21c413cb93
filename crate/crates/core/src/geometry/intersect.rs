use serde::{Deserialize, Serialize};

use super::{segment_distance, GeometryError, Location, Point, Polygon, ToleranceContext};

/// Result of intersecting two closed segments at tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentHit {
    None,
    Point(Point),
    Overlap(Point, Point),
}

fn closest_on_segment(p: Point, a: Point, b: Point) -> Point {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    a + d * t
}

pub fn intersect_segments(a0: Point, a1: Point, b0: Point, b1: Point, eps: f64) -> SegmentHit {
    let d = a1 - a0;
    let e = b1 - b0;
    let dl = d.norm();
    let el = e.norm();
    if dl <= eps || el <= eps {
        let dist = segment_distance(a0, a1, b0, b1);
        if dist > eps {
            return SegmentHit::None;
        }
        let p = if dl <= eps { a0 } else { closest_on_segment(b0, a0, a1) };
        return SegmentHit::Point(p);
    }
    let u = d * (1.0 / dl);
    let h0 = u.cross(b0 - a0);
    let h1 = u.cross(b1 - a0);
    if h0.abs() <= eps && h1.abs() <= eps {
        // Collinear: overlap of the projections onto a.
        let t0 = (b0 - a0).dot(u);
        let t1 = (b1 - a0).dot(u);
        let lo = t0.min(t1).max(0.0);
        let hi = t0.max(t1).min(dl);
        if hi - lo > eps {
            return SegmentHit::Overlap(a0 + u * lo, a0 + u * hi);
        }
        if hi - lo >= -eps {
            let t = 0.5 * (lo + hi);
            return SegmentHit::Point(a0 + u * t.clamp(0.0, dl));
        }
        return SegmentHit::None;
    }
    let denom = d.cross(e);
    if denom.abs() > f64::EPSILON * dl * el {
        let t = (b0 - a0).cross(e) / denom;
        let s = (b0 - a0).cross(d) / denom;
        let tt = eps / dl;
        let ts = eps / el;
        if t >= -tt && t <= 1.0 + tt && s >= -ts && s <= 1.0 + ts {
            return SegmentHit::Point(a0 + d * t.clamp(0.0, 1.0));
        }
    }
    // Endpoint within eps of the other segment (near-parallel or just short).
    let cands = [
        (a0, closest_on_segment(a0, b0, b1)),
        (a1, closest_on_segment(a1, b0, b1)),
        (closest_on_segment(b0, a0, a1), b0),
        (closest_on_segment(b1, a0, a1), b1),
    ];
    let mut best: Option<(f64, Point)> = None;
    for (p, q) in cands {
        let dd = p.dist(q);
        if dd <= eps && best.is_none_or(|(bd, _)| dd < bd) {
            best = Some((dd, p));
        }
    }
    match best {
        Some((_, p)) => SegmentHit::Point(p),
        None => SegmentHit::None,
    }
}

/// Shared boundary of two tiles: maximal common segments plus isolated touch points.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IntersectionSet {
    pub segments: Vec<(Point, Point)>,
    pub isolated_points: Vec<Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactKind {
    None,
    Pointwise,
    Segmental,
}

impl IntersectionSet {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty() && self.isolated_points.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|(a, b)| a.dist(*b)).sum()
    }

    /// Every point that carries the intersection: segment endpoints and touch points.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.segments
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .chain(self.isolated_points.iter().copied())
    }

    pub fn contains_point(&self, p: Point, eps: f64) -> bool {
        self.segments.iter().any(|&(a, b)| segment_distance(p, p, a, b) <= eps)
            || self.isolated_points.iter().any(|q| q.dist(p) <= eps)
    }

    pub fn distance_to(&self, other: &IntersectionSet) -> f64 {
        let mine = self.pieces();
        let theirs = other.pieces();
        let mut best = f64::INFINITY;
        for &(a0, a1) in &mine {
            for &(b0, b1) in &theirs {
                best = best.min(segment_distance(a0, a1, b0, b1));
            }
        }
        best
    }

    /// Segments plus isolated points as zero-length segments.
    pub fn pieces(&self) -> Vec<(Point, Point)> {
        self.segments
            .iter()
            .copied()
            .chain(self.isolated_points.iter().map(|&p| (p, p)))
            .collect()
    }

    /// A point in the relative interior of the contact: the arc-length midpoint
    /// of the segment chain when the segments form one chain, the midpoint of
    /// the longest segment otherwise, or the touch point for pointwise contacts.
    pub fn crossing_point(&self, fraction: f64, eps: f64) -> Option<Point> {
        if self.segments.is_empty() {
            return self.isolated_points.first().copied();
        }
        if let Some(chain) = self.chain(eps) {
            let total: f64 = chain.windows(2).map(|w| w[0].dist(w[1])).sum();
            let mut target = total * fraction;
            for w in chain.windows(2) {
                let l = w[0].dist(w[1]);
                if target <= l {
                    return Some(w[0].lerp(w[1], if l > 0.0 { target / l } else { 0.0 }));
                }
                target -= l;
            }
            return chain.last().copied();
        }
        let (a, b) = self
            .segments
            .iter()
            .copied()
            .max_by(|x, y| x.0.dist(x.1).total_cmp(&y.0.dist(y.1)))?;
        Some(a.lerp(b, fraction))
    }

    /// Orders the segments into one polyline if they form a simple chain.
    pub fn chain(&self, eps: f64) -> Option<Vec<Point>> {
        let mut segs: Vec<(Point, Point)> = self.segments.clone();
        let first = segs.pop()?;
        let mut chain = vec![first.0, first.1];
        while !segs.is_empty() {
            let head = chain[0];
            let tail = *chain.last().unwrap();
            let pos = segs.iter().position(|&(a, b)| {
                a.dist(tail) <= eps || b.dist(tail) <= eps || a.dist(head) <= eps || b.dist(head) <= eps
            })?;
            let (a, b) = segs.swap_remove(pos);
            if a.dist(tail) <= eps {
                chain.push(b);
            } else if b.dist(tail) <= eps {
                chain.push(a);
            } else if a.dist(head) <= eps {
                chain.insert(0, b);
            } else {
                chain.insert(0, a);
            }
        }
        Some(chain)
    }

    fn normalize(&mut self, eps: f64) {
        for s in &mut self.segments {
            if s.1.lex_cmp(&s.0).is_lt() {
                *s = (s.1, s.0);
            }
        }
        self.segments.sort_by(|a, b| a.0.lex_cmp(&b.0).then(a.1.lex_cmp(&b.1)));
        let mut pts: Vec<Point> = Vec::new();
        for &p in &self.isolated_points {
            if pts.iter().any(|q| q.dist(p) <= eps) {
                continue;
            }
            if self.segments.iter().any(|&(a, b)| segment_distance(p, p, a, b) <= eps) {
                continue;
            }
            pts.push(p);
        }
        pts.sort_by(|a, b| a.lex_cmp(b));
        self.isolated_points = pts;
    }
}

pub fn contact_kind(s: &IntersectionSet) -> ContactKind {
    if !s.segments.is_empty() {
        ContactKind::Segmental
    } else if !s.isolated_points.is_empty() {
        ContactKind::Pointwise
    } else {
        ContactKind::None
    }
}

/// Merges collinear segments that overlap or touch end to end.
fn merge_collinear(mut segs: Vec<(Point, Point)>, eps: f64) -> Vec<(Point, Point)> {
    let mut changed = true;
    while changed {
        changed = false;
        'outer: for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                let (a0, a1) = segs[i];
                let (b0, b1) = segs[j];
                let d = a1 - a0;
                let l = d.norm();
                let u = d * (1.0 / l);
                if u.cross(b0 - a0).abs() > eps || u.cross(b1 - a0).abs() > eps {
                    continue;
                }
                let tb0 = (b0 - a0).dot(u);
                let tb1 = (b1 - a0).dot(u);
                let (blo, bhi) = (tb0.min(tb1), tb0.max(tb1));
                if blo > l + eps || bhi < -eps {
                    continue;
                }
                let lo = blo.min(0.0);
                let hi = bhi.max(l);
                let p = |t: f64| {
                    if t.abs() <= eps {
                        a0
                    } else if (t - l).abs() <= eps {
                        a1
                    } else if (t - tb0).abs() <= eps {
                        b0
                    } else if (t - tb1).abs() <= eps {
                        b1
                    } else {
                        a0 + u * t
                    }
                };
                segs[i] = (p(lo), p(hi));
                segs.swap_remove(j);
                changed = true;
                break 'outer;
            }
        }
    }
    segs
}

/// Splits each edge of `a` at its contacts with `b` and reports whether any
/// resulting piece runs through the interior of `b`.
fn boundary_enters(a: &Polygon, b: &Polygon, eps: f64) -> bool {
    for (p, q) in a.edges() {
        let d = q - p;
        let l2 = d.norm2();
        let mut ts = vec![0.0, 1.0];
        for (r, s) in b.edges() {
            match intersect_segments(p, q, r, s, eps) {
                SegmentHit::None => {}
                SegmentHit::Point(x) => ts.push((x - p).dot(d) / l2),
                SegmentHit::Overlap(x, y) => {
                    ts.push((x - p).dot(d) / l2);
                    ts.push((y - p).dot(d) / l2);
                }
            }
        }
        ts.iter_mut().for_each(|t| *t = t.clamp(0.0, 1.0));
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            if (w[1] - w[0]) * l2.sqrt() <= 2.0 * eps {
                continue;
            }
            let m = p + d * (0.5 * (w[0] + w[1]));
            if b.locate(m, eps) == Location::Inside {
                return true;
            }
        }
    }
    false
}

/// Exact shared boundary of two interior-disjoint polygons.
pub fn boundary_intersection(
    a: &Polygon,
    b: &Polygon,
    ctx: &ToleranceContext,
) -> Result<IntersectionSet, GeometryError> {
    let eps = ctx.eps;
    if !a.bbox_overlaps(b, eps) {
        return Ok(IntersectionSet::default());
    }
    let mut segments = Vec::new();
    let mut points = Vec::new();
    for (p, q) in a.edges() {
        for (r, s) in b.edges() {
            match intersect_segments(p, q, r, s, eps) {
                SegmentHit::None => {}
                SegmentHit::Point(x) => points.push(x),
                SegmentHit::Overlap(x, y) => segments.push((x, y)),
            }
        }
    }
    if boundary_enters(a, b, eps) || boundary_enters(b, a, eps) {
        return Err(GeometryError::OverlappingInteriors);
    }
    if segments.len() >= a.len().min(b.len()) {
        // Possibly identical outlines: compare an interior point.
        let pa = super::representative_point(a, ctx);
        if b.locate(pa, eps) == Location::Inside {
            return Err(GeometryError::OverlappingInteriors);
        }
    }
    let mut set = IntersectionSet {
        segments: merge_collinear(segments, eps),
        isolated_points: points,
    };
    set.normalize(eps);
    Ok(set)
}
