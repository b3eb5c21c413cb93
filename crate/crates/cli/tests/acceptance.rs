//! One pass/fail line per acceptance criterion, then a single assertion.

#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::Rng;
use spiral_core::classify::{build_edge_classes, ClassMode};
use spiral_core::corpus::{
    fixture_names, gen_annulus_rings, gen_rect_spiral, gen_square_grid, load_fixture, Generated,
};
use spiral_core::detect::{
    detect_ring_partition, detect_spiral, guided_verify, strength_classify, AnalysisReport, DetectOptions, GraphPolicy,
    Prepared, Strength, Verdict,
};
use spiral_core::geometry::{ContactKind, DirectIsometry, PlaneMap, Point};
use spiral_core::patch::{build_contact_graph, Patch};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn spiral(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_spiral")).args(args).output().unwrap();
    (out, start.elapsed())
}

fn exit(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn write_patch(dir: &std::path::Path, name: &str, g: &Generated) -> String {
    let path = dir.join(name);
    std::fs::write(&path, g.to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

/// Segmental edges of the given classes as sorted tile-id pairs.
fn edge_pairs(p: &Patch, mode: ClassMode, classes: &[usize]) -> BTreeSet<(String, String)> {
    let g = build_contact_graph(p).unwrap();
    let table = build_edge_classes(p, &g, ContactKind::Segmental, mode);
    classes
        .iter()
        .flat_map(|&k| table.class(k).edges.iter().copied())
        .map(|e| {
            let e = g.edge(e);
            let (a, b) = (p.id(e.a).to_string(), p.id(e.b).to_string());
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

fn inside(poly: &[Point], q: Point) -> bool {
    let mut hit = false;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if (a.y > q.y) != (b.y > q.y) && q.x < a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x) {
            hit = !hit;
        }
    }
    hit
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (d1, d2, d3, d4) = (cross(a, b, c), cross(a, b, d), cross(c, d, a), cross(c, d, b));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Polyline simplicity by pairwise segment tests, plus a check that
/// non-adjacent segments keep apart.
fn simple(line: &[Point], eps: f64) -> bool {
    let n = line.len();
    for i in 0..n.saturating_sub(1) {
        for j in i + 2..n - 1 {
            if segments_cross(line[i], line[i + 1], line[j], line[j + 1]) {
                return false;
            }
            let close = [line[j], line[j + 1]]
                .iter()
                .any(|&q| q.dist(line[i]) <= eps || q.dist(line[i + 1]) <= eps);
            if close {
                return false;
            }
        }
    }
    true
}

/// Tiles whose interiors the thread passes through, in order, with repeats
/// of the same tile collapsed.
fn visit_order(p: &Patch, thread: &[Point]) -> Vec<String> {
    let mut samples = Vec::new();
    for w in thread.windows(2) {
        samples.push(w[0]);
        samples.push(w[0].midpoint(w[1]));
    }
    samples.extend(thread.last().copied());
    let mut out: Vec<String> = Vec::new();
    for q in samples {
        let owners: Vec<&str> = p
            .tiles()
            .iter()
            .filter(|t| inside(t.shape.vertices(), q))
            .map(|t| t.id.as_str())
            .collect();
        if let [id] = owners[..] {
            if out.last().map(String::as_str) != Some(id) {
                out.push(id.to_string());
            }
        }
    }
    out
}

fn c1() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_patch(dir.path(), "grid.json", &gen_square_grid(8).unwrap());
    let (o, t) = spiral(&["analyze", &grid]);
    let err = String::from_utf8_lossy(&o.stderr);
    ensure(exit(&o) == 1, format!("exit {}", exit(&o)))?;
    ensure(err.contains("precheck"), format!("no precheck reason in {err:?}"))?;
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("exit 1, {:?}, {t:.2?}", err.trim()))
}

fn c2() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_rect_spiral(3).unwrap();
    let path = write_patch(dir.path(), "rs.json", &g);
    let (o, t) = spiral(&["analyze", &path]);
    ensure(exit(&o) == 0, format!("exit {}", exit(&o)))?;
    ensure(t < Duration::from_secs(30), format!("took {t:?}"))?;
    let report: AnalysisReport = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
    let best = report.best().ok_or("no candidate")?;
    ensure(best.status.is_verified(), "best candidate not verified")?;
    ensure(best.arms.len() == 2, format!("{} arms", best.arms.len()))?;
    let got = edge_pairs(&g.patch, report.mode, &best.cut.dg_classes);
    let truth = edge_pairs(&g.patch, ClassMode::Isometry, &g.truth.cut_classes);
    ensure(
        best.cut.cg_classes.is_empty() && got == truth,
        "winning cut differs from the ground truth",
    )?;
    let (c, _) = spiral(&["classify", &path]);
    let first = String::from_utf8_lossy(&c.stdout)
        .lines()
        .next()
        .unwrap_or_default()
        .to_string();
    ensure(first == "4 segmental classes", format!("classify says {first:?}"))?;
    Ok(format!(
        "exit 0, 2 arms, cut {} matches truth ({} edges), 4 classes, {t:.2?}",
        best.cut,
        truth.len()
    ))
}

fn c3() -> Check {
    let g = gen_rect_spiral(3).unwrap();
    let report = detect_spiral(&g.patch, &DetectOptions::default()).map_err(|e| e.to_string())?;
    let best = report
        .best()
        .filter(|c| c.status.is_verified())
        .ok_or("no verified candidate")?;
    let eps = g.patch.ctx.eps;
    ensure((g.patch.ctx.angle_eps - 1e-6).abs() < 1e-18, "angle_eps is not 1e-6")?;
    for (k, t) in best.threads.iter().enumerate() {
        ensure(simple(t, eps), format!("thread {k} is not simple"))?;
        let order = visit_order(&g.patch, t);
        let distinct: BTreeSet<&String> = order.iter().collect();
        ensure(distinct.len() == order.len(), format!("thread {k} enters a tile twice"))?;
        let mut arm = best.arms[k].clone();
        arm.sort();
        let mut seen = order.clone();
        seen.sort();
        ensure(
            seen == arm,
            format!("thread {k} does not visit exactly its arm's tiles"),
        )?;
    }
    oracle::check_threads(&best.threads, best.center.ok_or("no center")?, eps)?;
    Ok(format!(
        "{} threads simple, one visit per tile, monotone, at least 2pi, disjoint",
        best.threads.len()
    ))
}

fn c4() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json").to_string_lossy().into_owned();
    let (o, _) = spiral(&["analyze", "fixture:corner_contact_spiral", "--graph-policy", "dg-only"]);
    ensure(exit(&o) == 1, format!("dg-only exit {}", exit(&o)))?;
    let (o, t) = spiral(&[
        "analyze",
        "fixture:corner_contact_spiral",
        "--graph-policy",
        "dg-first",
        "--out",
        &out,
    ]);
    ensure(exit(&o) == 0, format!("dg-first exit {}", exit(&o)))?;
    let report: AnalysisReport =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).map_err(|e| e.to_string())?;
    let best = report.best().ok_or("no candidate")?;
    ensure(!best.cut.cg_classes.is_empty(), "winning cut has no pointwise classes")?;
    Ok(format!(
        "dg-only exit 1, dg-first exit 0 with cut {} ({t:.2?})",
        best.cut
    ))
}

fn c5() -> Check {
    let f = load_fixture("double_partition").map_err(|e| e.to_string())?;
    let report = detect_spiral(&f.patch, &DetectOptions::default()).map_err(|e| e.to_string())?;
    let arms: Vec<usize> = report.verified().map(|c| c.arms.len()).collect();
    ensure(arms.len() >= 2, format!("{} verified", arms.len()))?;
    ensure(arms.windows(2).all(|w| w[0] < w[1]), format!("order {arms:?}"))?;
    ensure(
        report
            .candidates
            .iter()
            .take(arms.len())
            .all(|c| c.status.is_verified()),
        "verified candidates are not listed first",
    )?;
    Ok(format!("verified arm counts in order {arms:?}"))
}

fn c6() -> Check {
    let f = load_fixture("triangle_rhombus").map_err(|e| e.to_string())?;
    let p = &f.patch;
    let prep = Prepared::new(p, ClassMode::Similarity).map_err(|e| e.to_string())?;
    let label = |t: usize| p.tiles()[t].label.clone().unwrap_or_default();
    let (mut tt, mut tr) = (Vec::new(), Vec::new());
    for c in &prep.dg.classes {
        let e = prep.graph.edge(c.edges[0]);
        let mut pair = [label(e.a), label(e.b)];
        pair.sort();
        match (pair[0].as_str(), pair[1].as_str()) {
            ("triangle", "triangle") => tt.push(c.id),
            ("rhombus", "triangle") => tr.push(c.id),
            _ => {}
        }
    }
    let opts = DetectOptions::default();
    let mut arms = Vec::new();
    for k in [&tt, &tr] {
        let r = guided_verify(p, k, None, &opts).map_err(|e| e.to_string())?;
        let v = r
            .candidates
            .iter()
            .find(|c| c.status.is_verified())
            .ok_or_else(|| format!("K = {k:?} not verified: {:?}", r.diagnostics.last()))?;
        arms.push(v.arms.len());
    }
    ensure(arms == [1, 2], format!("arms {arms:?}"))?;
    Ok(format!(
        "triangle-triangle K = {tt:?}: 1 arm; triangle-rhombus K = {tr:?}: 2 arms"
    ))
}

fn c7() -> Check {
    let (o, _) = spiral(&["analyze", "fixture:disrupted_arms"]);
    ensure(exit(&o) == 1, format!("exit {}", exit(&o)))?;
    let report: AnalysisReport = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
    for c in &report.candidates {
        match &c.status {
            spiral_core::detect::Status::Discarded(r) if !r.is_empty() => {}
            s => return Err(format!("cut {} has status {s:?}", c.cut)),
        }
    }
    ensure(
        !report.diagnostics.iter().any(|d| d.contains("inconclusive")),
        "a cut was inconclusive",
    )?;
    Ok(format!(
        "exit 1, {} candidate(s), all discarded with reasons",
        report.candidates.len()
    ))
}

fn c8() -> Check {
    let opts = DetectOptions::default();
    let an = gen_annulus_rings(3, 8).unwrap().patch;
    let ring = detect_ring_partition(&an, ClassMode::Similarity, &opts)
        .map_err(|e| e.to_string())?
        .ok_or("no ring partition")?;
    ensure(ring.rings.len() == 3, format!("{} rings", ring.rings.len()))?;
    for (k, t) in ring.threads.iter().enumerate() {
        let mut closed = t.clone();
        closed.extend(t.first().copied());
        let mut sweep = 0.0;
        for w in closed.windows(2) {
            let mut d = (w[1] - ring.center).angle() - (w[0] - ring.center).angle();
            if d > PI {
                d -= TAU;
            } else if d < -PI {
                d += TAU;
            }
            sweep += d;
        }
        ensure(
            (sweep.abs() - TAU).abs() <= 1e-6,
            format!("ring thread {k} winds {sweep}"),
        )?;
    }
    let s_an = strength_classify(&an, &opts).map_err(|e| e.to_string())?;
    ensure(s_an == Strength::RingOnly, format!("annulus strength {s_an}"))?;
    let s_rs = strength_classify(&gen_rect_spiral(3).unwrap().patch, &opts).map_err(|e| e.to_string())?;
    ensure(s_rs == Strength::StrongSpiral, format!("rect spiral strength {s_rs}"))?;
    Ok(format!("3 rings winding 2pi; annulus {s_an}, rect spiral {s_rs}"))
}

fn c9() -> Check {
    let sources: Vec<(Patch, Prepared)> = [
        gen_rect_spiral(3).unwrap().patch,
        gen_annulus_rings(2, 8).unwrap().patch,
        load_fixture("triangle_rhombus").unwrap().patch,
    ]
    .into_iter()
    .map(|p| {
        let prep = Prepared::new(&p, ClassMode::Similarity).unwrap();
        (p, prep)
    })
    .collect();
    let opts = DetectOptions {
        policy: GraphPolicy::DgOnly,
        ..DetectOptions::default()
    };
    let mut rng = oracle::rng(2024);
    let (mut checked, mut candidates) = (0, 0);
    while checked < 20 {
        let (full, prep) = &sources[checked % sources.len()];
        let size = rng.random_range(4..=10);
        let sub = oracle::random_subpatch(full, prep, size, &mut rng);
        let sp = Prepared::new(&sub, ClassMode::Similarity).map_err(|e| e.to_string())?;
        if sp.dg.len() > 5 {
            continue;
        }
        let reference = oracle::reference_candidates(&sp);
        let report = detect_spiral(&sub, &opts).map_err(|e| e.to_string())?;
        oracle::compare(&reference, &report, sub.ctx.eps).map_err(|e| format!("patch {checked}: {e}"))?;
        candidates += reference.len();
        checked += 1;
    }
    ensure(candidates > 0, "every sampled patch had an empty candidate set")?;
    Ok(format!(
        "20 patches agree, {candidates} reference candidate(s) in total"
    ))
}

fn summary(p: &Patch) -> Result<(Verdict, Option<usize>, usize, usize), String> {
    let r = detect_spiral(p, &DetectOptions::default()).map_err(|e| e.to_string())?;
    let best = r.best().filter(|c| c.status.is_verified()).map(|c| c.arms.len());
    Ok((r.verdict, best, r.segmental_classes, r.pointwise_classes))
}

fn c10() -> Check {
    let (a, _) = spiral(&["analyze", "fixture:double_partition"]);
    let (b, _) = spiral(&["analyze", "fixture:double_partition"]);
    ensure(
        a.stdout == b.stdout && !a.stdout.is_empty(),
        "analyze output differs between runs",
    )?;
    let (a, _) = spiral(&["ring", "fixture:disrupted_arms", "--strength"]);
    let (b, _) = spiral(&["ring", "fixture:disrupted_arms", "--strength"]);
    ensure(
        a.stdout == b.stdout && !a.stdout.is_empty(),
        "ring output differs between runs",
    )?;

    let mut corpus = vec![
        gen_square_grid(8).unwrap().patch,
        gen_rect_spiral(3).unwrap().patch,
        gen_annulus_rings(3, 8).unwrap().patch,
    ];
    corpus.extend(fixture_names().into_iter().map(|n| load_fixture(n).unwrap().patch));
    let mut rng = oracle::rng(99);
    for p in &corpus {
        let m = DirectIsometry::new(
            rng.random_range(-PI..PI),
            Point::new(rng.random_range(-100.0..100.0), rng.random_range(-100.0..100.0)),
        );
        let q = p.map_points(|x| m.map_point(x));
        let (before, after) = (summary(p)?, summary(&q)?);
        ensure(before == after, format!("{before:?} became {after:?}"))?;
    }
    Ok(format!(
        "reruns byte-identical; {} patches unchanged under a rigid motion",
        corpus.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("negative control", c1),
        ("two-arm detection", c2),
        ("thread validity", c3),
        ("pointwise fallback", c4),
        ("fewer arms first", c5),
        ("guided mode", c6),
        ("disrupted arms", c7),
        ("ring separation", c8),
        ("oracle equivalence", c9),
        ("determinism and invariance", c10),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let line = match &result {
            Ok(detail) => format!("PASS {:>2} {name}: {detail}", i + 1),
            Err(e) => format!("FAIL {:>2} {name}: {e}", i + 1),
        };
        let _ = writeln!(err, "{line} [{:.1?}]", start.elapsed());
        if result.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
