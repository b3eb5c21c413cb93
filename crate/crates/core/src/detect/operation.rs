use std::collections::BTreeSet;

use super::{
    arm_boundary_components, cut_graph, point_contact_limit_ok, subsets, Candidate, CutGraph, CutSet, DetectOptions,
    HamiltonSearch, Prepared, Status,
};
use crate::geometry::{ContactKind, Point};
use crate::thread::{
    check_arm_thread, thread_polyline, verify_o, verify_s, ArmThreadFailure, Strategy, Thread, TileVisit,
};

#[derive(Debug, Clone, PartialEq)]
pub enum OpAOutcome {
    Candidates(Vec<Candidate>),
    Discarded { cut: CutSet, reason: String },
    Inconclusive { cut: CutSet, reason: String },
}

enum GraphCheck {
    Paths(Vec<Vec<usize>>),
    Failed(String),
    Budget(String),
}

/// Every component must hold a border tile and have a Hamilton path.
fn check_components(prep: &Prepared, g: &CutGraph, budget: u64, trace: &mut Vec<String>) -> GraphCheck {
    let p = &prep.patch;
    let mut remaining = budget;
    let mut paths = Vec::with_capacity(g.components.len());
    for (k, comp) in g.components.iter().enumerate() {
        if !comp.iter().any(|t| prep.border.contains(t)) {
            return GraphCheck::Failed(format!(
                "component containing tile {} has no border tile",
                p.id(comp[0])
            ));
        }
        let local = g.local(prep, k);
        let mut search = HamiltonSearch::paths(&local, remaining);
        let first = search.next();
        remaining -= search.expansions();
        match first {
            Some(Ok(path)) => paths.push(path.into_iter().map(|i| comp[i]).collect()),
            Some(Err(e)) => return GraphCheck::Budget(format!("component containing tile {}: {e}", p.id(comp[0]))),
            None => {
                return GraphCheck::Failed(format!(
                    "component containing tile {} ({} tiles) has no Hamilton path",
                    p.id(comp[0]),
                    comp.len()
                ))
            }
        }
    }
    trace.push(format!(
        "every component has a border tile and a Hamilton path ({} component(s))",
        g.components.len()
    ));
    GraphCheck::Paths(paths)
}

fn translation_check(prep: &Prepared, g: &CutGraph) -> Result<(), String> {
    let counts: Vec<usize> = g
        .components
        .iter()
        .map(|c| prep.translations.distinct(c.iter().copied()))
        .collect();
    let failing = counts.iter().filter(|&&c| c < 3).count();
    if failing == 0 {
        return Ok(());
    }
    let mut reason = format!(
        "{failing} of {} component(s) span fewer than 3 translation classes (counts {:?})",
        counts.len(),
        counts
    );
    if failing < counts.len() {
        reason.push_str("; the reading requiring only one passing component would keep this cut");
    }
    Err(reason)
}

fn arm_boundary_check(prep: &Prepared, cut_edges: &[usize], trace: &mut Vec<String>) -> Result<(), String> {
    let comps = arm_boundary_components(prep, cut_edges);
    if let Some(bad) = comps.iter().find(|c| !c.touches_border) {
        let e = prep.graph.edge(bad.edges[0]);
        return Err(format!(
            "arm boundary component through the contact of tiles {} and {} does not reach the border",
            prep.patch.id(e.a),
            prep.patch.id(e.b)
        ));
    }
    trace.push(format!(
        "arm boundary: {} component(s), all reach the border",
        comps.len()
    ));
    Ok(())
}

fn candidate(cut: &CutSet, g: CutGraph, paths: Vec<Vec<usize>>) -> Candidate {
    Candidate {
        cut: cut.clone(),
        components: g.components,
        graph_edges: g.edges,
        hamilton_paths: paths,
        threads: Vec::new(),
        center: None,
        spiral_boundary: None,
        status: Status::PendingThread,
    }
}

/// Operation A for a cut of segmental classes. With `extensions`, a cut
/// whose graph fails the border or Hamilton check is retried with every
/// K-extension over the pointwise classes.
///
/// Returns the outcome and a trace of every check performed.
pub fn operation_a(prep: &Prepared, cut: &CutSet, extensions: bool, opts: &DetectOptions) -> (OpAOutcome, Vec<String>) {
    let mut trace = Vec::new();
    let discard = |reason: String| OpAOutcome::Discarded {
        cut: cut.clone(),
        reason,
    };
    let cut_edges = prep.class_edges(ContactKind::Segmental, &cut.dg_classes);
    trace.push(format!("cut {cut}: removes {} segmental contact(s)", cut_edges.len()));
    if let Err(r) = arm_boundary_check(prep, &cut_edges, &mut trace) {
        return (discard(r), trace);
    }
    let g = cut_graph(prep, cut);
    trace.push(format!("G has {} component(s)", g.components.len()));
    let failure = match check_components(prep, &g, opts.hamilton_budget, &mut trace) {
        GraphCheck::Paths(paths) => {
            return match translation_check(prep, &g) {
                Ok(()) => {
                    trace.push("every component spans at least 3 translation classes".into());
                    (OpAOutcome::Candidates(vec![candidate(cut, g, paths)]), trace)
                }
                Err(r) => (discard(r), trace),
            };
        }
        GraphCheck::Budget(r) => {
            return match translation_check(prep, &g) {
                Err(t) => (discard(t), trace),
                Ok(()) => (
                    OpAOutcome::Inconclusive {
                        cut: cut.clone(),
                        reason: r,
                    },
                    trace,
                ),
            }
        }
        GraphCheck::Failed(r) => r,
    };
    trace.push(failure.clone());
    if !extensions {
        return (discard(failure), trace);
    }
    let mut found = Vec::new();
    let mut inconclusive = None;
    let mut reasons = Vec::new();
    let mut xs: Vec<Vec<usize>> = vec![Vec::new()];
    xs.extend(subsets(prep.cg.len()));
    for x in xs {
        let ext = cut.extend(x);
        let (outcome, sub) = operation_a_extension(prep, &ext, opts);
        trace.extend(sub);
        match outcome {
            OpAOutcome::Candidates(c) => found.extend(c),
            OpAOutcome::Inconclusive { reason, .. } => {
                inconclusive.get_or_insert(reason);
            }
            OpAOutcome::Discarded { reason, .. } => reasons.push(reason),
        }
    }
    if !found.is_empty() {
        return (OpAOutcome::Candidates(found), trace);
    }
    if let Some(reason) = inconclusive {
        return (
            OpAOutcome::Inconclusive {
                cut: cut.clone(),
                reason,
            },
            trace,
        );
    }
    let reason = format!("{failure}; no K-extension passes");
    (discard(reason), trace)
}

/// Operation A for one K-extension: the cut's pointwise classes join the arm
/// boundaries and the remaining pointwise contacts join G.
pub fn operation_a_extension(prep: &Prepared, cut: &CutSet, opts: &DetectOptions) -> (OpAOutcome, Vec<String>) {
    let mut trace = Vec::new();
    let discard = |reason: String| OpAOutcome::Discarded {
        cut: cut.clone(),
        reason,
    };
    let mut cut_edges = prep.class_edges(ContactKind::Segmental, &cut.dg_classes);
    cut_edges.extend(prep.class_edges(ContactKind::Pointwise, &cut.cg_classes));
    if let Err(r) = arm_boundary_check(prep, &cut_edges, &mut trace) {
        return (discard(r), prefix(cut, trace));
    }
    let g = cut_graph(prep, cut);
    if let Err((t, n)) = point_contact_limit_ok(prep, &g.edges) {
        return (
            discard(format!(
                "tile {} meets {n} tiles in single points through G",
                prep.patch.id(t)
            )),
            prefix(cut, trace),
        );
    }
    trace.push("no tile has more than 2 point contacts in G".into());
    let outcome = match check_components(prep, &g, opts.hamilton_budget, &mut trace) {
        GraphCheck::Paths(paths) => match translation_check(prep, &g) {
            Ok(()) => OpAOutcome::Candidates(vec![candidate(cut, g, paths)]),
            Err(r) => discard(r),
        },
        GraphCheck::Budget(r) => match translation_check(prep, &g) {
            Err(t) => discard(t),
            Ok(()) => OpAOutcome::Inconclusive {
                cut: cut.clone(),
                reason: r,
            },
        },
        GraphCheck::Failed(r) => discard(r),
    };
    (outcome, prefix(cut, trace))
}

fn prefix(cut: &CutSet, trace: Vec<String>) -> Vec<String> {
    trace.into_iter().map(|l| format!("cut {cut}: {l}")).collect()
}

struct PathThread {
    path: Vec<usize>,
    points: Vec<Point>,
    visits: Vec<TileVisit>,
}

/// Simple thread polylines per component, over up to `path_limit` Hamilton
/// paths and all crossing strategies.
fn component_polylines(
    prep: &Prepared,
    cand: &Candidate,
    opts: &DetectOptions,
) -> Result<Vec<Vec<PathThread>>, String> {
    let g = CutGraph {
        edges: cand.graph_edges.clone(),
        components: cand.components.clone(),
    };
    let mut out = Vec::with_capacity(g.components.len());
    let mut remaining = opts.hamilton_budget;
    for (k, comp) in g.components.iter().enumerate() {
        let local = g.local(prep, k);
        let mut search = HamiltonSearch::paths(&local, remaining);
        let mut lines = Vec::new();
        let mut last_err = None;
        for path in search.by_ref().take(opts.path_limit) {
            let Ok(path) = path else { break };
            let path: Vec<usize> = path.into_iter().map(|i| comp[i]).collect();
            for strategy in Strategy::ALL {
                match thread_polyline(prep, &path, strategy) {
                    Ok((points, visits)) => lines.push(PathThread {
                        path: path.clone(),
                        points,
                        visits,
                    }),
                    Err(e) => last_err = Some(e.to_string()),
                }
            }
        }
        remaining = remaining.saturating_sub(search.expansions());
        if lines.is_empty() {
            return Err(format!(
                "no thread through the component containing tile {}: {}",
                prep.patch.id(comp[0]),
                last_err.unwrap_or_else(|| "no Hamilton path".into())
            ));
        }
        out.push(lines);
    }
    Ok(out)
}

/// Picks one thread per component so that all are pairwise disjoint.
fn disjoint_choice(options: &[Vec<Thread>], eps: f64) -> Option<Vec<usize>> {
    fn go(options: &[Vec<Thread>], eps: f64, chosen: &mut Vec<usize>) -> bool {
        let k = chosen.len();
        if k == options.len() {
            return true;
        }
        for i in 0..options[k].len() {
            let t = &options[k][i];
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(j, &c)| crate::geometry::polyline_distance(&t.points, &options[j][c].points) > eps);
            if ok {
                chosen.push(i);
                if go(options, eps, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    go(options, eps, &mut chosen).then_some(chosen)
}

/// Threads kept per component when searching for a disjoint combination.
const THREADS_PER_COMPONENT: usize = 6;

/// Operation B: threads for every component about a common center, then the
/// L and S checks (or O for a single component).
pub fn operation_b(prep: &Prepared, mut cand: Candidate, centers: &[Point], opts: &DetectOptions) -> Candidate {
    let ctx = &prep.patch.ctx;
    let lines = match component_polylines(prep, &cand, opts) {
        Ok(l) => l,
        Err(r) => {
            cand.status = Status::Discarded(r);
            return cand;
        }
    };
    let mut cut_edges = prep.class_edges(ContactKind::Segmental, &cand.cut.dg_classes);
    cut_edges.extend(prep.class_edges(ContactKind::Pointwise, &cand.cut.cg_classes));
    let mut arm_of = vec![0; prep.patch.len()];
    for (k, comp) in cand.components.iter().enumerate() {
        for &t in comp {
            arm_of[t] = k;
        }
    }
    let mut best: Option<(u8, String)> = None;
    let mut note = |depth: u8, reason: String| {
        if best.as_ref().is_none_or(|(d, _)| depth > *d) {
            best = Some((depth, reason));
        }
    };
    for &center in centers {
        let mut options: Vec<Vec<Thread>> = Vec::with_capacity(lines.len());
        let mut failed = None;
        for (k, comp_lines) in lines.iter().enumerate() {
            let mut keep = Vec::new();
            // A short winding means the thread got further than a
            // non-monotone one, so it wins as the reported reason.
            let mut reason: Option<(u8, String)> = None;
            let mut keep_reason = |rank: u8, r: String| {
                if reason.as_ref().is_none_or(|(k, _)| rank > *k) {
                    reason = Some((rank, r));
                }
            };
            for pt in comp_lines {
                let t = match Thread::about(pt.points.clone(), pt.visits.clone(), center, ctx.eps) {
                    Ok(t) => t,
                    Err(e) => {
                        keep_reason(0, e.to_string());
                        continue;
                    }
                };
                match check_arm_thread(&t, opts.min_winding, ctx.angle_eps) {
                    Ok(()) => {
                        if !keep.iter().any(|(p, _): &(Vec<usize>, Thread)| *p == pt.path) {
                            keep.push((pt.path.clone(), t));
                        }
                    }
                    Err(r) => {
                        let rank = match r {
                            ArmThreadFailure::NotMonotone => 1,
                            ArmThreadFailure::ShortWinding { .. } => 2,
                        };
                        keep_reason(rank, r.to_string());
                    }
                }
                if keep.len() >= THREADS_PER_COMPONENT {
                    break;
                }
            }
            if keep.is_empty() {
                failed = Some(format!(
                    "component containing tile {}: {}",
                    prep.patch.id(cand.components[k][0]),
                    reason.map(|(_, r)| r).unwrap_or_default()
                ));
                break;
            }
            options.push(keep.into_iter().map(|(_, t)| t).collect());
        }
        if let Some(r) = failed {
            note(0, r);
            continue;
        }
        let Some(choice) = disjoint_choice(&options, ctx.eps) else {
            note(1, "threads of different arms meet".into());
            continue;
        };
        let threads: Vec<&Thread> = choice.iter().enumerate().map(|(k, &i)| &options[k][i]).collect();
        let paths: Vec<Vec<usize>> = threads
            .iter()
            .map(|t| t.tile_visits.iter().map(|v| v.tile).collect())
            .collect();
        let boundary = if cand.components.len() == 1 {
            match verify_o(prep, &cut_edges, opts.min_winding) {
                Ok(b) => Some(b),
                Err(r) => {
                    note(2, format!("one-armed check failed: {r}"));
                    continue;
                }
            }
        } else {
            let exempt: BTreeSet<usize> = threads.iter().map(|t| t.start_tile()).collect();
            if let Err(w) = verify_s(prep, &arm_of, &paths, &exempt) {
                note(2, format!("neighbor condition failed: {w}"));
                continue;
            }
            None
        };
        cand.hamilton_paths = paths;
        cand.threads = threads.iter().map(|t| t.points.clone()).collect();
        cand.center = Some(center);
        cand.spiral_boundary = boundary;
        cand.status = Status::Verified;
        return cand;
    }
    cand.status = Status::Discarded(best.map(|(_, r)| r).unwrap_or_else(|| "no center candidate".into()));
    cand
}
