use super::{intersect_segments, GeometryError, Location, Point, Polygon, SegmentHit, ToleranceContext};

/// Area of the part of `poly` left of the vertical line `x = c`.
fn area_left_of(poly: &Polygon, c: f64) -> f64 {
    let mut clipped: Vec<Point> = Vec::new();
    for (p, q) in poly.edges() {
        let pin = p.x <= c;
        let qin = q.x <= c;
        if pin {
            clipped.push(p);
        }
        if pin != qin {
            let t = (c - p.x) / (q.x - p.x);
            clipped.push(Point::new(c, p.y + t * (q.y - p.y)));
        }
    }
    Polygon::from_ccw(clipped).signed_area()
}

/// Midpoint of the longest interior chord of `poly` on the line `x = c`.
fn vertical_chord_midpoint(poly: &Polygon, c: f64) -> Option<Point> {
    let mut ys: Vec<f64> = poly
        .edges()
        .filter(|(p, q)| (p.x <= c && c < q.x) || (q.x <= c && c < p.x))
        .map(|(p, q)| p.y + (c - p.x) / (q.x - p.x) * (q.y - p.y))
        .collect();
    ys.sort_by(f64::total_cmp);
    ys.chunks_exact(2)
        .max_by(|a, b| (a[1] - a[0]).total_cmp(&(b[1] - b[0])))
        .map(|w| Point::new(c, 0.5 * (w[0] + w[1])))
}

/// A deterministic point strictly inside `poly`: the centroid when it is
/// interior, otherwise the midpoint of the longest vertical chord through the
/// area-median abscissa.
pub fn representative_point(poly: &Polygon, ctx: &ToleranceContext) -> Point {
    let c = poly.centroid();
    if poly.locate(c, ctx.eps) == Location::Inside {
        return c;
    }
    let (lo, hi) = poly.bbox();
    let half = 0.5 * poly.area();
    let (mut a, mut b) = (lo.x, hi.x);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if area_left_of(poly, m) < half {
            a = m;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    // Avoid chords that graze a vertex.
    let width = hi.x - lo.x;
    for k in 0..8 {
        if poly.vertices().iter().all(|v| (v.x - x).abs() > ctx.eps) {
            break;
        }
        x += width * 1e-6 * (k + 1) as f64;
    }
    vertical_chord_midpoint(poly, x).unwrap_or(c)
}

/// True iff every point of segment `ab` other than its endpoints lies
/// strictly inside `poly`.
pub fn segment_inside(poly: &Polygon, a: Point, b: Point, eps: f64) -> bool {
    if a.dist(b) <= eps {
        return false;
    }
    for (p, q) in poly.edges() {
        match intersect_segments(a, b, p, q, eps) {
            SegmentHit::None => {}
            SegmentHit::Overlap(..) => return false,
            SegmentHit::Point(x) => {
                if x.dist(a) > eps && x.dist(b) > eps {
                    return false;
                }
            }
        }
    }
    poly.locate(a.midpoint(b), eps) == Location::Inside
}

/// Offset of routing waypoints from the polygon corners.
fn route_offset(poly: &Polygon, ctx: &ToleranceContext) -> f64 {
    let min_edge = poly.edges().map(|(a, b)| a.dist(b)).fold(f64::INFINITY, f64::min);
    (1e-3 * min_edge).max(100.0 * ctx.eps)
}

fn inset_vertices(poly: &Polygon, delta: f64, eps: f64) -> Vec<Point> {
    let v = poly.vertices();
    let n = v.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let prev = v[(i + n - 1) % n];
        let cur = v[i];
        let next = v[(i + 1) % n];
        let n1 = (cur - prev).normalized().perp();
        let n2 = (next - cur).normalized().perp();
        let bis = n1 + n2;
        if bis.norm() < 1e-12 {
            continue;
        }
        let q = cur + bis.normalized() * delta;
        if poly.locate(q, eps) == Location::Inside {
            out.push(q);
        }
    }
    out
}

/// Shortest polyline from `entry` to `exit` whose interior lies strictly
/// inside `poly`, searched on the visibility graph of inset corners.
pub fn route_inside(
    poly: &Polygon,
    entry: Point,
    exit: Point,
    ctx: &ToleranceContext,
) -> Result<Vec<Point>, GeometryError> {
    let eps = ctx.eps;
    let fail = || GeometryError::NoRoute { from: entry, to: exit };
    if entry.dist(exit) <= eps {
        return Err(fail());
    }
    if segment_inside(poly, entry, exit, eps) {
        return Ok(vec![entry, exit]);
    }
    let mut nodes = vec![entry, exit];
    nodes.extend(inset_vertices(poly, route_offset(poly, ctx), eps));
    let n = nodes.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[0] = 0.0;
    for _ in 0..n {
        let Some(u) = (0..n)
            .filter(|&i| !done[i] && dist[i].is_finite())
            .min_by(|&i, &j| dist[i].total_cmp(&dist[j]))
        else {
            break;
        };
        done[u] = true;
        if u == 1 {
            break;
        }
        for v in 0..n {
            if done[v] || v == u {
                continue;
            }
            let d = dist[u] + nodes[u].dist(nodes[v]);
            if d < dist[v] && segment_inside(poly, nodes[u], nodes[v], eps) {
                dist[v] = d;
                prev[v] = u;
            }
        }
    }
    if !dist[1].is_finite() {
        return Err(fail());
    }
    let mut path = vec![nodes[1]];
    let mut cur = 1;
    while cur != 0 {
        cur = prev[cur];
        path.push(nodes[cur]);
    }
    path.reverse();
    Ok(path)
}
