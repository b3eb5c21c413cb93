//! Brute-force reference for the cut search on small patches.
//!
//! Only the direct contact graph is modelled, so compare against runs with
//! `GraphPolicy::DgOnly`.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use spiral_core::classify::orientation_diversity;
use spiral_core::detect::{AnalysisReport, Prepared};
use spiral_core::geometry::{ContactKind, Point};
use spiral_core::patch::{Patch, Tile};

/// A cut that passes every graph check, with its components as sorted id lists.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RefCandidate {
    pub cut: Vec<usize>,
    pub components: Vec<Vec<String>>,
}

fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Held-Karp reachability over vertex subsets.
pub fn has_hamilton_path(n: usize, edges: &[(usize, usize)]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut adj = vec![0u32; n];
    for &(a, b) in edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let full = (1u32 << n) - 1;
    let mut ends = vec![0u32; 1 << n];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    for mask in 1..=full {
        let e = ends[mask as usize];
        if e == 0 {
            continue;
        }
        for (v, &nb) in adj.iter().enumerate() {
            if e >> v & 1 == 1 {
                let mut next = nb & !mask;
                while next != 0 {
                    let w = next.trailing_zeros();
                    ends[(mask | 1 << w) as usize] |= 1 << w;
                    next &= next - 1;
                }
            }
        }
    }
    ends[full as usize] != 0
}

fn passes(prep: &Prepared, cut: &[usize]) -> Option<Vec<Vec<usize>>> {
    let p = &prep.patch;
    let eps = p.ctx.eps;
    let edges = prep.graph.edges();
    let in_cut = |e: usize| prep.dg.class_of(e).is_some_and(|c| cut.contains(&c));
    let cut_edges: Vec<usize> = (0..edges.len())
        .filter(|&e| edges[e].kind == ContactKind::Segmental && in_cut(e))
        .collect();

    // Arm boundary: touching contacts of cut edges, each group must reach the border.
    let mut links = Vec::new();
    for i in 0..cut_edges.len() {
        for j in i + 1..cut_edges.len() {
            if edges[cut_edges[i]].contact.distance_to(&edges[cut_edges[j]].contact) <= eps {
                links.push((i, j));
            }
        }
    }
    for group in components(cut_edges.len(), &links) {
        if !group.iter().any(|&i| prep.contact_on_border[cut_edges[i]]) {
            return None;
        }
    }

    let kept: Vec<(usize, usize)> = (0..edges.len())
        .filter(|&e| edges[e].kind == ContactKind::Segmental && !in_cut(e))
        .map(|e| (edges[e].a, edges[e].b))
        .collect();
    let comps = components(p.len(), &kept);
    for comp in &comps {
        if !comp.iter().any(|t| prep.border.contains(t)) {
            return None;
        }
        let local: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let sub: Vec<(usize, usize)> = kept
            .iter()
            .filter_map(|&(a, b)| Some((*local.get(&a)?, *local.get(&b)?)))
            .collect();
        if !has_hamilton_path(comp.len(), &sub) {
            return None;
        }
        if prep.translations.distinct(comp.iter().copied()) < 3 {
            return None;
        }
    }
    Some(comps)
}

/// Every nonempty cut over the segmental classes that passes the graph
/// checks, or nothing when the orientation precheck fails.
pub fn reference_candidates(prep: &Prepared) -> BTreeSet<RefCandidate> {
    let mut out = BTreeSet::new();
    if orientation_diversity(&prep.patch, &prep.translations) < 3 {
        return out;
    }
    let n = prep.dg.len();
    for mask in 1u32..(1 << n) {
        let cut: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        if let Some(comps) = passes(prep, &cut) {
            let mut components: Vec<Vec<String>> = comps
                .iter()
                .map(|c| {
                    let mut ids: Vec<String> = c.iter().map(|&t| prep.patch.id(t).to_string()).collect();
                    ids.sort();
                    ids
                })
                .collect();
            components.sort();
            out.insert(RefCandidate { cut, components });
        }
    }
    out
}

pub fn report_candidates(report: &AnalysisReport) -> BTreeSet<RefCandidate> {
    report
        .candidates
        .iter()
        .map(|c| {
            let mut components: Vec<Vec<String>> = c
                .arms
                .iter()
                .map(|a| {
                    let mut a = a.clone();
                    a.sort();
                    a
                })
                .collect();
            components.sort();
            RefCandidate {
                cut: c.cut.dg_classes.clone(),
                components,
            }
        })
        .collect()
}

/// Compares a report with the reference. Verified candidates with the same
/// components are collapsed in reports, so a reference cut may be missing
/// when a verified report candidate has its components.
pub fn compare(reference: &BTreeSet<RefCandidate>, report: &AnalysisReport, eps: f64) -> Result<(), String> {
    let got = report_candidates(report);
    if let Some(extra) = got.difference(reference).next() {
        return Err(format!("report has {extra:?}, the reference does not"));
    }
    let verified: BTreeSet<Vec<Vec<String>>> = report
        .candidates
        .iter()
        .filter(|c| c.status.is_verified())
        .map(|c| {
            let mut comps: Vec<Vec<String>> = c
                .arms
                .iter()
                .map(|a| {
                    let mut a = a.clone();
                    a.sort();
                    a
                })
                .collect();
            comps.sort();
            comps
        })
        .collect();
    for missing in reference.difference(&got) {
        if !verified.contains(&missing.components) {
            return Err(format!("reference has {missing:?}, the report does not"));
        }
    }
    for c in report.candidates.iter().filter(|c| c.status.is_verified()) {
        let center = c.center.ok_or("verified candidate without a center")?;
        check_threads(&c.threads, center, eps)?;
    }
    Ok(())
}

fn angle(c: Point, p: Point) -> f64 {
    (p.y - c.y).atan2(p.x - c.x)
}

fn seg_dist(a: Point, b: Point, c: Point, d: Point) -> f64 {
    fn cross(o: Point, a: Point, b: Point) -> f64 {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    }
    fn pt_seg(p: Point, a: Point, b: Point) -> f64 {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let l = dx * dx + dy * dy;
        let t = if l == 0.0 {
            0.0
        } else {
            (((p.x - a.x) * dx + (p.y - a.y) * dy) / l).clamp(0.0, 1.0)
        };
        ((p.x - a.x - t * dx).powi(2) + (p.y - a.y - t * dy).powi(2)).sqrt()
    }
    let (d1, d2, d3, d4) = (cross(a, b, c), cross(a, b, d), cross(c, d, a), cross(c, d, b));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    pt_seg(a, c, d)
        .min(pt_seg(b, c, d))
        .min(pt_seg(c, a, b))
        .min(pt_seg(d, a, b))
}

/// Threads of a verified candidate: each winds at least a full turn about
/// the center without turning back, and no two come within `eps`.
pub fn check_threads(threads: &[Vec<Point>], center: Point, eps: f64) -> Result<(), String> {
    for (i, t) in threads.iter().enumerate() {
        let mut total = 0.0;
        let mut back = 0.0f64;
        for w in t.windows(2) {
            let mut d = angle(center, w[1]) - angle(center, w[0]);
            if d > std::f64::consts::PI {
                d -= std::f64::consts::TAU;
            } else if d < -std::f64::consts::PI {
                d += std::f64::consts::TAU;
            }
            total += d;
            back = back.min(d);
        }
        let (total, back) = if total < 0.0 { (-total, 0.0) } else { (total, back) };
        if total < std::f64::consts::TAU - 1e-6 {
            return Err(format!("thread {i} winds only {total}"));
        }
        if back < -1e-6 {
            return Err(format!("thread {i} turns back by {back}"));
        }
    }
    for i in 0..threads.len() {
        for j in i + 1..threads.len() {
            for a in threads[i].windows(2) {
                for b in threads[j].windows(2) {
                    if seg_dist(a[0], a[1], b[0], b[1]) <= eps {
                        return Err(format!("threads {i} and {j} meet"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// A random connected set of `size` tiles of `p`, grown from a random seed
/// tile through segmental contacts, as a new patch.
pub fn random_subpatch(p: &Patch, prep: &Prepared, size: usize, rng: &mut StdRng) -> Patch {
    let mut chosen = vec![rng.random_range(0..p.len())];
    while chosen.len() < size {
        let frontier: Vec<usize> = prep
            .graph
            .edges()
            .iter()
            .filter(|e| e.kind == ContactKind::Segmental)
            .filter_map(|e| match (chosen.contains(&e.a), chosen.contains(&e.b)) {
                (true, false) => Some(e.b),
                (false, true) => Some(e.a),
                _ => None,
            })
            .collect();
        let Some(&t) = frontier.choose(rng) else { break };
        chosen.push(t);
    }
    let tiles: Vec<Tile> = chosen.iter().map(|&t| p.tiles()[t].clone()).collect();
    Patch::new(tiles, Some(p.ctx.eps)).with_singular_mode(p.singular_mode)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
