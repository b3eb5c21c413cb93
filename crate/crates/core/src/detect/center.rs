use super::{DetectOptions, Prepared};
use crate::geometry::Point;

/// Most candidate centers tried per cut.
const MAX_CENTERS: usize = 24;

/// Centroid of the tile whose neighborhood (the tile and its `center_k`
/// nearest tiles) holds the most translation classes. Ties go to the tile
/// nearest the patch centroid; if every tile ties, the patch centroid itself.
pub fn estimate_center(prep: &Prepared, opts: &DetectOptions) -> Point {
    if let Some(c) = opts.center.or(prep.patch.declared_center) {
        return c;
    }
    let p = &prep.patch;
    let centroid = p.centroid();
    let n = p.len();
    let cents: Vec<Point> = (0..n).map(|i| p.shape(i).centroid()).collect();
    let counts: Vec<usize> = (0..n)
        .map(|i| {
            let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            order.sort_by(|&a, &b| {
                cents[i]
                    .dist(cents[a])
                    .total_cmp(&cents[i].dist(cents[b]))
                    .then(a.cmp(&b))
            });
            order.truncate(opts.center_k);
            order.push(i);
            prep.translations.distinct(order)
        })
        .collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    if counts.iter().all(|&c| c == max) {
        return centroid;
    }
    let best = (0..n)
        .filter(|&i| counts[i] == max)
        .min_by(|&a, &b| {
            cents[a]
                .dist(centroid)
                .total_cmp(&cents[b].dist(centroid))
                .then(a.cmp(&b))
        })
        .expect("nonempty patch");
    cents[best]
}

/// Centers tried by thread verification, most likely first.
///
/// A declared center is used alone. Otherwise the estimate is followed by
/// the vertices, edge midpoints and representative points near it, then the
/// patch centroid and (in singular mode) the hole centroids.
pub fn center_candidates(prep: &Prepared, opts: &DetectOptions) -> Vec<Point> {
    if let Some(c) = opts.center.or(prep.patch.declared_center) {
        return vec![c];
    }
    let p = &prep.patch;
    let est = estimate_center(prep, opts);
    let mut diams: Vec<f64> = p.tiles().iter().map(|t| t.shape.diameter()).collect();
    diams.sort_by(f64::total_cmp);
    let radius = 1.5 * diams[diams.len() / 2];
    let mut near: Vec<Point> = Vec::new();
    for (i, t) in p.tiles().iter().enumerate() {
        if t.shape.centroid().dist(est) > radius + t.shape.diameter() {
            continue;
        }
        near.extend_from_slice(t.shape.vertices());
        near.extend(t.shape.edges().map(|(a, b)| a.midpoint(b)));
        near.push(prep.reps[i]);
    }
    near.retain(|q| q.dist(est) <= radius);
    near.sort_by(|a, b| a.dist(est).total_cmp(&b.dist(est)).then_with(|| a.lex_cmp(b)));
    let mut out = vec![est];
    let push = |q: Point, out: &mut Vec<Point>| {
        if !out.iter().any(|c| c.dist(q) <= p.ctx.eps * 10.0) {
            out.push(q);
        }
    };
    let mut tail = vec![p.centroid()];
    if p.singular_mode {
        tail.extend(prep.boundary.holes().map(|h| h.polygon().centroid()));
    }
    let reserve = tail.len();
    for q in near {
        if out.len() + reserve >= MAX_CENTERS {
            break;
        }
        push(q, &mut out);
    }
    for q in tail {
        push(q, &mut out);
    }
    out.truncate(MAX_CENTERS);
    out
}
