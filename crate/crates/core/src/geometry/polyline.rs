use std::f64::consts::PI;

use super::{intersect_segments, GeometryError, Point, SegmentHit};

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Euclidean distance between closed segments `a0a1` and `b0b1`.
pub fn segment_distance(a0: Point, a1: Point, b0: Point, b1: Point) -> f64 {
    let d = a1 - a0;
    let e = b1 - b0;
    let denom = d.cross(e);
    if denom != 0.0 {
        let t = (b0 - a0).cross(e) / denom;
        let s = (b0 - a0).cross(d) / denom;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s) {
            return 0.0;
        }
    }
    point_segment_distance(a0, b0, b1)
        .min(point_segment_distance(a1, b0, b1))
        .min(point_segment_distance(b0, a0, a1))
        .min(point_segment_distance(b1, a0, a1))
}

/// Minimum distance between two polylines.
pub fn polyline_distance(a: &[Point], b: &[Point]) -> f64 {
    let seg = |l: &[Point]| -> Vec<(Point, Point)> {
        if l.len() == 1 {
            vec![(l[0], l[0])]
        } else {
            l.windows(2).map(|w| (w[0], w[1])).collect()
        }
    };
    let sa = seg(a);
    let sb = seg(b);
    let mut best = f64::INFINITY;
    for &(p, q) in &sa {
        for &(r, s) in &sb {
            best = best.min(segment_distance(p, q, r, s));
            if best == 0.0 {
                return 0.0;
            }
        }
    }
    best
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Continuous polar angle of each polyline vertex about `center`.
///
/// The first value lies in (-pi, pi]; each later value differs from its
/// predecessor by the smallest-magnitude angle change.
pub fn unwrapped_angle(line: &[Point], center: Point, eps: f64) -> Result<Vec<f64>, GeometryError> {
    let mut out = Vec::with_capacity(line.len());
    let mut prev_raw = 0.0;
    for (index, &p) in line.iter().enumerate() {
        let v = p - center;
        if v.norm() <= eps {
            return Err(GeometryError::CenterOnCurve { index });
        }
        let raw = v.angle();
        match out.last() {
            None => out.push(raw),
            Some(&last) => out.push(last + wrap_angle(raw - prev_raw)),
        }
        prev_raw = raw;
    }
    Ok(out)
}

/// Winding number of a closed polyline about `center`, by signed crossings of
/// the ray from `center` towards +x.
pub fn winding_number(closed: &[Point], center: Point) -> i64 {
    let n = closed.len();
    let mut w = 0i64;
    for i in 0..n {
        let a = closed[i] - center;
        let b = closed[(i + 1) % n] - center;
        if a.y <= 0.0 && b.y > 0.0 && a.cross(b) > 0.0 {
            w += 1;
        } else if a.y > 0.0 && b.y <= 0.0 && a.cross(b) < 0.0 {
            w -= 1;
        }
    }
    w
}

fn segments_clash(i: usize, j: usize, pts: &[Point], closed: bool, eps: f64) -> bool {
    let n = pts.len();
    let seg = |k: usize| (pts[k], pts[(k + 1) % n]);
    let (a0, a1) = seg(i);
    let (b0, b1) = seg(j);
    let m = if closed { n } else { n - 1 };
    let adjacent_next = j == i + 1;
    let adjacent_wrap = closed && i == 0 && j == m - 1 && m > 2;
    if adjacent_next || adjacent_wrap {
        let (shared, p, q) = if adjacent_next { (a1, a0, b1) } else { (a0, a1, b0) };
        let u = p - shared;
        let w = q - shared;
        // Backtracking along the same line.
        if u.cross(w).abs() <= eps * u.norm().max(w.norm()) && u.dot(w) > 0.0 {
            return true;
        }
        return match intersect_segments(a0, a1, b0, b1, eps) {
            SegmentHit::None => false,
            SegmentHit::Point(x) => x.dist(shared) > eps,
            SegmentHit::Overlap(..) => true,
        };
    }
    !matches!(intersect_segments(a0, a1, b0, b1, eps), SegmentHit::None)
}

/// True iff the open polyline does not meet or cross itself (at tolerance).
pub fn polyline_is_simple(line: &[Point], eps: f64) -> bool {
    if line.len() < 3 {
        return line.len() < 2 || line[0].dist(line[1]) > eps;
    }
    if line.windows(2).any(|w| w[0].dist(w[1]) <= eps) {
        return false;
    }
    let m = line.len() - 1;
    for i in 0..m {
        for j in i + 1..m {
            if segments_clash(i, j, line, false, eps) {
                return false;
            }
        }
    }
    true
}

/// True iff the closed polyline (last vertex joined to the first) is a Jordan curve.
pub fn closed_polyline_is_simple(ring: &[Point], eps: f64) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    if (0..n).any(|i| ring[i].dist(ring[(i + 1) % n]) <= eps) {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if segments_clash(i, j, ring, true, eps) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn full_turn_around_square() {
        let line = [
            p(1.0, 0.0),
            p(1.0, 1.0),
            p(-1.0, 1.0),
            p(-1.0, -1.0),
            p(1.0, -1.0),
            p(1.0, 0.0),
        ];
        let phi = unwrapped_angle(&line, Point::ORIGIN, 1e-9).unwrap();
        assert!((phi.last().unwrap() - phi[0] - 2.0 * PI).abs() < 1e-12);
        assert!(phi[0] > -PI && phi[0] <= PI);
    }

    #[test]
    fn radial_segment_has_constant_angle() {
        let line = [p(1.0, 1.0), p(2.0, 2.0), p(5.0, 5.0)];
        let phi = unwrapped_angle(&line, Point::ORIGIN, 1e-9).unwrap();
        assert!(phi.iter().all(|a| (a - phi[0]).abs() < 1e-15));
    }

    #[test]
    fn center_on_curve_is_an_error() {
        let line = [p(1.0, 0.0), p(0.0, 0.0)];
        assert_eq!(
            unwrapped_angle(&line, Point::ORIGIN, 1e-9),
            Err(GeometryError::CenterOnCurve { index: 1 })
        );
    }

    #[test]
    fn archimedean_spiral_two_turns() {
        // r = 1 + theta, theta in [0, 4 pi], 100 samples.
        let n = 100;
        let line: Vec<Point> = (0..n)
            .map(|i| {
                let t = 4.0 * PI * i as f64 / (n - 1) as f64;
                Point::new(1.0 + t, 0.0).rotate(t)
            })
            .collect();
        let phi = unwrapped_angle(&line, Point::ORIGIN, 1e-9).unwrap();
        for (i, a) in phi.iter().enumerate() {
            let expect = 4.0 * PI * i as f64 / (n - 1) as f64;
            assert!((a - expect).abs() < 1e-9, "sample {i}");
        }
        assert!(phi.windows(2).all(|w| w[1] > w[0]));
        assert!((phi[n - 1] - phi[0] - 4.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn simple_and_crossing_polylines() {
        assert!(polyline_is_simple(&[p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)], 1e-9));
        assert!(!polyline_is_simple(
            &[p(0.0, 0.0), p(2.0, 0.0), p(1.0, 1.0), p(1.0, -1.0)],
            1e-9
        ));
        assert!(polyline_is_simple(&[p(0.0, 0.0), p(1.0, 0.0)], 1e-9));
        // Doubling back along the previous segment.
        assert!(!polyline_is_simple(&[p(0.0, 0.0), p(2.0, 0.0), p(1.0, 0.0)], 1e-9));
    }

    #[test]
    fn winding_of_square_ring() {
        let sq = [p(1.0, 1.0), p(-1.0, 1.0), p(-1.0, -1.0), p(1.0, -1.0)];
        assert_eq!(winding_number(&sq, Point::ORIGIN), 1);
        assert_eq!(winding_number(&sq, p(5.0, 0.0)), 0);
        let rev: Vec<Point> = sq.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, Point::ORIGIN), -1);
        assert!(closed_polyline_is_simple(&sq, 1e-9));
    }
}
