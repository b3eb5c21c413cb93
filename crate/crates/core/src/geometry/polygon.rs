use serde::{Deserialize, Serialize};

use super::{intersect_segments, segment_distance, Point, SegmentHit, ToleranceContext};

/// Position of a point relative to a polygon, at tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    OnBoundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PolygonDefect {
    TooFewVertices(usize),
    NonFinite,
    ZeroArea,
    SelfIntersecting,
}

impl std::fmt::Display for PolygonDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolygonDefect::TooFewVertices(n) => write!(f, "only {n} distinct vertices"),
            PolygonDefect::NonFinite => write!(f, "non-finite coordinate"),
            PolygonDefect::ZeroArea => write!(f, "zero area"),
            PolygonDefect::SelfIntersecting => write!(f, "boundary intersects itself"),
        }
    }
}

/// A simple polygon with counterclockwise vertices (closed implicitly).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Builds a polygon, reversing clockwise input and dropping repeated
    /// consecutive vertices. Validity is checked separately by [`Polygon::validate`].
    pub fn new(mut vertices: Vec<Point>) -> Self {
        vertices.dedup();
        while vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        let mut p = Polygon { vertices };
        if p.signed_area() < 0.0 {
            p.vertices.reverse();
        }
        p
    }

    /// Wraps vertices already known to be counterclockwise.
    pub fn from_ccw(vertices: Vec<Point>) -> Self {
        Polygon { vertices }
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Polygon::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges `(v[i], v[i+1])`.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let o = self.vertices[0];
        let mut s = 0.0;
        for i in 1..n - 1 {
            s += (self.vertices[i] - o).cross(self.vertices[i + 1] - o);
        }
        0.5 * s
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let o = self.vertices[0];
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a2 = 0.0;
        for (p, q) in self.edges() {
            let (p, q) = (p - o, q - o);
            let c = p.cross(q);
            a2 += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        if a2.abs() < f64::MIN_POSITIVE {
            let n = self.vertices.len() as f64;
            let s = self.vertices.iter().fold(Point::ORIGIN, |acc, &v| acc + v);
            return s * (1.0 / n);
        }
        o + Point::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    pub fn bbox_overlaps(&self, other: &Polygon, pad: f64) -> bool {
        let (a0, a1) = self.bbox();
        let (b0, b1) = other.bbox();
        a0.x <= b1.x + pad && b0.x <= a1.x + pad && a0.y <= b1.y + pad && b0.y <= a1.y + pad
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(p, p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Even-odd containment ignoring the boundary band.
    fn contains_raw(&self, p: Point) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn locate(&self, p: Point, eps: f64) -> Location {
        if self.boundary_distance(p) <= eps {
            Location::OnBoundary
        } else if self.contains_raw(p) {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    pub fn contains_strictly(&self, p: Point, eps: f64) -> bool {
        self.locate(p, eps) == Location::Inside
    }

    pub fn on_boundary(&self, p: Point, eps: f64) -> bool {
        self.boundary_distance(p) <= eps
    }

    /// Vertices with collinear (straight-angle) vertices removed.
    ///
    /// Two polygons describing the same point set have the same corners, which
    /// is what congruence tests compare.
    pub fn corners(&self, angle_eps: f64) -> Vec<Point> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let prev = self.vertices[(i + n - 1) % n];
            let cur = self.vertices[i];
            let next = self.vertices[(i + 1) % n];
            let u = (cur - prev).normalized();
            let w = (next - cur).normalized();
            if u.cross(w).abs() <= angle_eps && u.dot(w) > 0.0 {
                continue;
            }
            out.push(cur);
        }
        out
    }

    pub fn validate(&self, ctx: &ToleranceContext) -> Result<(), PolygonDefect> {
        if self.vertices.iter().any(|v| !v.is_finite()) {
            return Err(PolygonDefect::NonFinite);
        }
        if self.vertices.len() < 3 {
            return Err(PolygonDefect::TooFewVertices(self.vertices.len()));
        }
        let n = self.vertices.len();
        for i in 0..n {
            let (a0, a1) = (self.vertices[i], self.vertices[(i + 1) % n]);
            if a0.dist(a1) <= ctx.eps {
                return Err(PolygonDefect::TooFewVertices(n - 1));
            }
            for j in i + 1..n {
                let (b0, b1) = (self.vertices[j], self.vertices[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                match intersect_segments(a0, a1, b0, b1, ctx.eps) {
                    SegmentHit::None => {}
                    SegmentHit::Overlap(..) => return Err(PolygonDefect::SelfIntersecting),
                    SegmentHit::Point(x) => {
                        if !adjacent {
                            return Err(PolygonDefect::SelfIntersecting);
                        }
                        let shared = if j == i + 1 { a1 } else { a0 };
                        if x.dist(shared) > ctx.eps {
                            return Err(PolygonDefect::SelfIntersecting);
                        }
                    }
                }
            }
        }
        if self.area() <= ctx.eps * ctx.eps {
            return Err(PolygonDefect::ZeroArea);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clockwise_input_is_reoriented() {
        let p = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ]);
        assert!(p.signed_area() > 0.0);
    }

    #[test]
    fn corners_drop_collinear_vertices() {
        let p = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(0.0, 1.0),
        ]);
        assert_eq!(p.corners(1e-9).len(), 4);
    }

    #[test]
    fn bow_tie_is_rejected() {
        let p = Polygon::from_ccw(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ]);
        let ctx = ToleranceContext::default();
        assert_eq!(p.validate(&ctx), Err(PolygonDefect::SelfIntersecting));
    }

    #[test]
    fn locate_square() {
        let sq = Polygon::rect(0.0, 0.0, 1.0, 1.0);
        assert_eq!(sq.locate(Point::new(0.5, 0.5), 1e-9), Location::Inside);
        assert_eq!(sq.locate(Point::new(1.0, 0.5), 1e-9), Location::OnBoundary);
        assert_eq!(sq.locate(Point::new(1.5, 0.5), 1e-9), Location::Outside);
    }
}
