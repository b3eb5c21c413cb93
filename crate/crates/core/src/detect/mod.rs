//! Cut-set search for spiral partitions (Operation A), thread verification
//! of its candidates, ring partitions and the strength classification.

mod center;
mod cut;
mod hamilton;
mod operation;
mod ring;

pub use center::{center_candidates, estimate_center};
pub use cut::{arm_boundary_components, cut_graph, point_contact_limit_ok, BoundaryComponent, CutGraph};
pub use hamilton::{BudgetExhausted, HamiltonSearch, LocalGraph};
pub use operation::{operation_a, operation_b, OpAOutcome};
pub use ring::{detect_ring_partition, ring_prepared, strength_classify, RingReport, Strength};

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{
    build_edge_classes, orientation_diversity, translation_classes, ClassMode, EdgeClassTable, TranslationClassTable,
};
use crate::geometry::{representative_point, ContactKind, Point};
use crate::patch::{
    border_warning, build_contact_graph, compute_border, outer_boundary, validate_patch, BoundaryCycles, ContactGraph,
    Patch, PatchDefect, PatchError,
};

#[derive(Debug, Error)]
pub enum DetectError {
    #[error("invalid patch: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidPatch(Vec<PatchDefect>),
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error("{count} {kind} edge classes exceed the limit of {limit}")]
    TooManyClasses {
        kind: &'static str,
        count: usize,
        limit: usize,
    },
    #[error("unknown {kind} class id {id}")]
    UnknownClassId { kind: &'static str, id: usize },
    #[error("cut must contain at least one segmental class")]
    EmptyCut,
}

/// When pointwise contacts may join arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphPolicy {
    /// Segmental contacts only.
    DgOnly,
    /// Segmental contacts first; pointwise extensions only if that finds nothing.
    #[default]
    DgFirst,
    /// Pointwise extensions from the start.
    CgAlways,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectOptions {
    pub policy: GraphPolicy,
    pub max_classes: usize,
    /// Hamilton search node expansions allowed per candidate.
    pub hamilton_budget: u64,
    /// Hamilton paths tried per component during thread construction.
    pub path_limit: usize,
    pub min_winding: f64,
    pub center: Option<Point>,
    pub similarity: bool,
    /// Neighborhood size for center estimation.
    pub center_k: usize,
    pub workers: Option<usize>,
}

impl Default for DetectOptions {
    fn default() -> Self {
        Self {
            policy: GraphPolicy::DgFirst,
            max_classes: 16,
            hamilton_budget: 1_000_000,
            path_limit: 32,
            min_winding: TAU,
            center: None,
            similarity: false,
            center_k: 8,
            workers: None,
        }
    }
}

/// Everything derived from a patch once and shared by all cut evaluations.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub patch: Patch,
    pub mode: ClassMode,
    pub graph: ContactGraph,
    /// Segmental (DG) edge classes.
    pub dg: EdgeClassTable,
    /// Pointwise (CG only) edge classes.
    pub cg: EdgeClassTable,
    pub translations: TranslationClassTable,
    pub boundary: BoundaryCycles,
    pub border: BTreeSet<usize>,
    pub reps: Vec<Point>,
    /// For each contact edge, the edges whose contacts touch it.
    pub contact_links: Vec<Vec<usize>>,
    /// Whether each contact reaches a border cycle.
    pub contact_on_border: Vec<bool>,
}

impl Prepared {
    pub fn new(patch: &Patch, mode: ClassMode) -> Result<Prepared, DetectError> {
        let defects = validate_patch(patch);
        if !defects.is_empty() {
            return Err(DetectError::InvalidPatch(defects));
        }
        let graph = build_contact_graph(patch)?;
        let dg = build_edge_classes(patch, &graph, ContactKind::Segmental, mode);
        let cg = build_edge_classes(patch, &graph, ContactKind::Pointwise, mode);
        let translations = translation_classes(patch);
        let boundary = outer_boundary(patch);
        let border = compute_border(patch, &boundary);
        let reps = patch
            .tiles()
            .iter()
            .map(|t| representative_point(&t.shape, &patch.ctx))
            .collect();
        let eps = patch.ctx.eps;
        let edges = graph.edges();
        let pieces: Vec<Vec<(Point, Point)>> = edges.iter().map(|e| e.contact.pieces()).collect();
        let contact_on_border = pieces
            .iter()
            .map(|ps| {
                ps.iter()
                    .any(|&(a, b)| boundary.touches(a, b, eps, patch.singular_mode))
            })
            .collect();
        let mut contact_links = vec![Vec::new(); edges.len()];
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (ei, ej) = (&edges[i], &edges[j]);
                // Contacts can only touch if the edges share a tile or the
                // tiles themselves touch.
                let share = ei.a == ej.a || ei.a == ej.b || ei.b == ej.a || ei.b == ej.b;
                let near = share
                    || [ei.a, ei.b]
                        .iter()
                        .any(|&x| [ej.a, ej.b].iter().any(|&y| graph.edge_between(x, y).is_some()));
                if near && edges[i].contact.distance_to(&edges[j].contact) <= eps {
                    contact_links[i].push(j);
                    contact_links[j].push(i);
                }
            }
        }
        Ok(Prepared {
            patch: patch.clone(),
            mode,
            graph,
            dg,
            cg,
            translations,
            boundary,
            border,
            reps,
            contact_links,
            contact_on_border,
        })
    }

    pub fn table(&self, kind: ContactKind) -> &EdgeClassTable {
        match kind {
            ContactKind::Pointwise => &self.cg,
            _ => &self.dg,
        }
    }

    /// Contact edges of the given classes.
    pub fn class_edges(&self, kind: ContactKind, ids: &[usize]) -> Vec<usize> {
        let table = self.table(kind);
        let mut out: Vec<usize> = ids.iter().flat_map(|&k| table.class(k).edges.iter().copied()).collect();
        out.sort_unstable();
        out
    }
}

/// A cut: segmental classes removed from DG, plus the pointwise classes of a
/// K-extension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CutSet {
    pub dg_classes: Vec<usize>,
    pub cg_classes: Vec<usize>,
    /// Whether pointwise contacts outside the cut join tiles in G.
    #[serde(default)]
    pub extended: bool,
}

impl CutSet {
    pub fn dg(ids: impl IntoIterator<Item = usize>) -> Self {
        let mut dg_classes: Vec<usize> = ids.into_iter().collect();
        dg_classes.sort_unstable();
        dg_classes.dedup();
        Self {
            dg_classes,
            cg_classes: Vec::new(),
            extended: false,
        }
    }

    pub fn extend(&self, cg: impl IntoIterator<Item = usize>) -> Self {
        let mut cg_classes: Vec<usize> = cg.into_iter().collect();
        cg_classes.sort_unstable();
        cg_classes.dedup();
        Self {
            dg_classes: self.dg_classes.clone(),
            cg_classes,
            extended: true,
        }
    }

    /// Sort key: total size, then class ids.
    pub fn encoding(&self) -> (usize, &[usize], bool, &[usize]) {
        (
            self.dg_classes.len() + self.cg_classes.len(),
            &self.dg_classes,
            self.extended,
            &self.cg_classes,
        )
    }
}

impl fmt::Display for CutSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}", list(&self.dg_classes))?;
        if self.extended {
            write!(f, "+cg{{{}}}", list(&self.cg_classes))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum Status {
    PendingThread,
    Verified,
    Discarded(String),
    Inconclusive(String),
}

impl Status {
    fn rank(&self) -> u8 {
        match self {
            Status::Verified => 0,
            Status::PendingThread => 1,
            Status::Inconclusive(_) => 2,
            Status::Discarded(_) => 3,
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Status::Verified)
    }
}

/// Output unit of Operation A, finalized by Operation B.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub cut: CutSet,
    /// Tile indices per component, each ascending; components ordered by
    /// their smallest tile.
    pub components: Vec<Vec<usize>>,
    /// Contact edges forming G.
    pub graph_edges: Vec<usize>,
    /// One Hamilton path per component (the one the threads follow once verified).
    pub hamilton_paths: Vec<Vec<usize>>,
    pub threads: Vec<Vec<Point>>,
    pub center: Option<Point>,
    pub spiral_boundary: Option<Vec<Point>>,
    pub status: Status,
}

impl Candidate {
    pub fn arms(&self) -> usize {
        self.components.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Spiral,
    NoSpiral,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphKind {
    #[serde(rename = "DG")]
    Dg,
    #[serde(rename = "DG+CG")]
    DgCg,
}

/// One candidate as written to a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub cut: CutSet,
    /// Tile ids per arm, in thread order when a path is known.
    pub arms: Vec<Vec<String>>,
    pub threads: Vec<Vec<Point>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub center: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spiral_boundary: Option<Vec<Point>>,
    #[serde(flatten)]
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub verdict: Verdict,
    pub mode: ClassMode,
    pub graph_kind_used: GraphKind,
    pub segmental_classes: usize,
    pub pointwise_classes: usize,
    pub candidates: Vec<CandidateReport>,
    pub diagnostics: Vec<String>,
}

impl AnalysisReport {
    pub fn best(&self) -> Option<&CandidateReport> {
        self.candidates.iter().find(|c| c.status.is_verified())
    }

    pub fn verified(&self) -> impl Iterator<Item = &CandidateReport> {
        self.candidates.iter().filter(|c| c.status.is_verified())
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        match (self.verdict, self.best()) {
            (Verdict::Spiral, Some(b)) => {
                format!("spiral: {} arm(s), cut {}", b.arms.len(), b.cut)
            }
            (Verdict::Inconclusive, _) => "inconclusive: search budget exhausted".into(),
            _ => match self.diagnostics.iter().find(|d| d.starts_with("precheck")) {
                Some(d) => format!("no spiral ({d})"),
                None => "no spiral".into(),
            },
        }
    }
}

pub fn candidate_report(prep: &Prepared, c: &Candidate) -> CandidateReport {
    let p = &prep.patch;
    let arms = c
        .components
        .iter()
        .enumerate()
        .map(|(i, comp)| {
            let order = c.hamilton_paths.get(i).unwrap_or(comp);
            order.iter().map(|&t| p.id(t).to_string()).collect()
        })
        .collect();
    CandidateReport {
        cut: c.cut.clone(),
        arms,
        threads: c.threads.clone(),
        center: c.center,
        spiral_boundary: c.spiral_boundary.clone(),
        status: c.status.clone(),
    }
}

pub(crate) fn mode_for(patch: &Patch, opts: &DetectOptions) -> ClassMode {
    if opts.similarity || patch.singular_mode {
        ClassMode::Similarity
    } else {
        ClassMode::Isometry
    }
}

/// All nonempty subsets of `1..=n`, by ascending size then lexicographically.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u64..(1u64 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn run_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

/// Evaluates one cut through Operations A and B.
fn evaluate(
    prep: &Prepared,
    cut: &CutSet,
    extensions: bool,
    centers: &[Point],
    opts: &DetectOptions,
) -> (Vec<Candidate>, Vec<String>) {
    let (outcome, _) = operation_a(prep, cut, extensions, opts);
    match outcome {
        OpAOutcome::Candidates(cands) => {
            let done = cands.into_iter().map(|c| operation_b(prep, c, centers, opts)).collect();
            (done, Vec::new())
        }
        OpAOutcome::Discarded { cut, reason } => (Vec::new(), vec![format!("cut {cut}: discarded: {reason}")]),
        OpAOutcome::Inconclusive { cut, reason } => (Vec::new(), vec![format!("cut {cut}: inconclusive: {reason}")]),
    }
}

/// Keeps one candidate per partition and status class, preferring the
/// smallest cut, then sorts verified candidates first and by arm count.
pub fn finalize(mut cands: Vec<Candidate>) -> Vec<Candidate> {
    cands.sort_by(|a, b| {
        a.status
            .rank()
            .cmp(&b.status.rank())
            .then(a.arms().cmp(&b.arms()))
            .then_with(|| a.cut.encoding().cmp(&b.cut.encoding()))
    });
    let mut seen: BTreeSet<(u8, Vec<Vec<usize>>)> = BTreeSet::new();
    cands.retain(|c| !c.status.is_verified() || seen.insert((c.status.rank(), c.components.clone())));
    cands
}

struct Round {
    candidates: Vec<Candidate>,
    diagnostics: Vec<String>,
    inconclusive: bool,
}

fn run_round(prep: &Prepared, extensions: bool, centers: &[Point], opts: &DetectOptions) -> Round {
    let cuts = subsets(prep.dg.len());
    let results: Vec<(Vec<Candidate>, Vec<String>)> = cuts
        .par_iter()
        .map(|ids| evaluate(prep, &CutSet::dg(ids.iter().copied()), extensions, centers, opts))
        .collect();
    let mut candidates = Vec::new();
    let mut diagnostics = Vec::new();
    let mut inconclusive = false;
    for (c, d) in results {
        inconclusive |= d.iter().any(|l| l.contains(": inconclusive:"));
        candidates.extend(c);
        diagnostics.extend(d);
    }
    inconclusive |= candidates.iter().any(|c| matches!(c.status, Status::Inconclusive(_)));
    Round {
        candidates: finalize(candidates),
        diagnostics,
        inconclusive,
    }
}

/// Full search: precheck, all nonempty cuts over the segmental classes,
/// thread verification, sorting.
pub fn detect_spiral(patch: &Patch, opts: &DetectOptions) -> Result<AnalysisReport, DetectError> {
    let prep = Prepared::new(patch, mode_for(patch, opts))?;
    detect_prepared(&prep, opts)
}

pub fn detect_prepared(prep: &Prepared, opts: &DetectOptions) -> Result<AnalysisReport, DetectError> {
    let mut diagnostics = Vec::new();
    if let Some(w) = border_warning(&prep.patch, &prep.border) {
        diagnostics.push(format!("warning: {w}"));
    }
    let mut report = AnalysisReport {
        verdict: Verdict::NoSpiral,
        mode: prep.mode,
        graph_kind_used: GraphKind::Dg,
        segmental_classes: prep.dg.len(),
        pointwise_classes: prep.cg.len(),
        candidates: Vec::new(),
        diagnostics: Vec::new(),
    };
    let diversity = orientation_diversity(&prep.patch, &prep.translations);
    if diversity < 3 {
        diagnostics.push("precheck: fewer than 3 orientations".into());
        diagnostics.push(format!(
            "largest congruence class spans {diversity} translation class(es)"
        ));
        report.diagnostics = diagnostics;
        return Ok(report);
    }
    if prep.dg.len() > opts.max_classes {
        return Err(DetectError::TooManyClasses {
            kind: "segmental",
            count: prep.dg.len(),
            limit: opts.max_classes,
        });
    }
    let extensions_possible = opts.policy != GraphPolicy::DgOnly;
    if extensions_possible && prep.cg.len() > opts.max_classes {
        return Err(DetectError::TooManyClasses {
            kind: "pointwise",
            count: prep.cg.len(),
            limit: opts.max_classes,
        });
    }
    let centers = center_candidates(prep, opts);
    let rounds: Vec<bool> = match opts.policy {
        GraphPolicy::DgOnly => vec![false],
        GraphPolicy::DgFirst => vec![false, true],
        GraphPolicy::CgAlways => vec![true],
    };
    let mut round = None;
    for extensions in rounds {
        let r = run_pool(opts.workers, || run_round(prep, extensions, &centers, opts));
        let found = r.candidates.iter().any(|c| c.status.is_verified());
        report.graph_kind_used = if extensions { GraphKind::DgCg } else { GraphKind::Dg };
        if extensions {
            diagnostics.push("round 2: pointwise contacts enabled".into());
        }
        diagnostics.extend(r.diagnostics.iter().cloned());
        round = Some(r);
        if found {
            break;
        }
    }
    let round = round.expect("at least one round");
    report.verdict = if round.candidates.iter().any(|c| c.status.is_verified()) {
        Verdict::Spiral
    } else if round.inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::NoSpiral
    };
    report.candidates = round.candidates.iter().map(|c| candidate_report(prep, c)).collect();
    if round.candidates.is_empty() {
        diagnostics.push("no cut survived Operation A".into());
    }
    report.diagnostics = diagnostics;
    Ok(report)
}

/// Result of checking one user-chosen cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuidedReport {
    pub verdict: Verdict,
    pub candidates: Vec<CandidateReport>,
    pub diagnostics: Vec<String>,
}

/// Runs Operations A and B for exactly one cut, explaining every check.
pub fn guided_verify(
    patch: &Patch,
    dg_classes: &[usize],
    cg_classes: Option<&[usize]>,
    opts: &DetectOptions,
) -> Result<GuidedReport, DetectError> {
    let prep = Prepared::new(patch, mode_for(patch, opts))?;
    guided_prepared(&prep, dg_classes, cg_classes, opts)
}

pub fn guided_prepared(
    prep: &Prepared,
    dg_classes: &[usize],
    cg_classes: Option<&[usize]>,
    opts: &DetectOptions,
) -> Result<GuidedReport, DetectError> {
    if dg_classes.is_empty() {
        return Err(DetectError::EmptyCut);
    }
    for &id in dg_classes {
        if id == 0 || id > prep.dg.len() {
            return Err(DetectError::UnknownClassId { kind: "segmental", id });
        }
    }
    for &id in cg_classes.unwrap_or(&[]) {
        if id == 0 || id > prep.cg.len() {
            return Err(DetectError::UnknownClassId { kind: "pointwise", id });
        }
    }
    let mut diagnostics = Vec::new();
    let diversity = orientation_diversity(&prep.patch, &prep.translations);
    diagnostics.push(format!(
        "precheck: largest congruence class spans {diversity} translation class(es){}",
        if diversity < 3 {
            " (fewer than 3 orientations)"
        } else {
            ""
        }
    ));
    let base = CutSet::dg(dg_classes.iter().copied());
    let (outcome, trace) = match cg_classes {
        Some(x) => operation::operation_a_extension(prep, &base.extend(x.iter().copied()), opts),
        None => operation_a(prep, &base, false, opts),
    };
    diagnostics.extend(trace);
    let centers = center_candidates(prep, opts);
    let mut candidates = Vec::new();
    let mut inconclusive = false;
    match outcome {
        OpAOutcome::Candidates(cs) => {
            for c in cs {
                let c = operation_b(prep, c, &centers, opts);
                match &c.status {
                    Status::Verified => diagnostics.push(format!("cut {}: verified with {} arm(s)", c.cut, c.arms())),
                    Status::Discarded(r) => diagnostics.push(format!("cut {}: thread check failed: {r}", c.cut)),
                    Status::Inconclusive(r) => {
                        inconclusive = true;
                        diagnostics.push(format!("cut {}: inconclusive: {r}", c.cut))
                    }
                    Status::PendingThread => {}
                }
                candidates.push(c);
            }
        }
        OpAOutcome::Discarded { cut, reason } => {
            diagnostics.push(format!("cut {cut}: discarded: {reason}"));
        }
        OpAOutcome::Inconclusive { cut, reason } => {
            inconclusive = true;
            diagnostics.push(format!("cut {cut}: inconclusive: {reason}"));
        }
    }
    let candidates = finalize(candidates);
    let verdict = if candidates.iter().any(|c| c.status.is_verified()) {
        Verdict::Spiral
    } else if inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::NoSpiral
    };
    Ok(GuidedReport {
        verdict,
        candidates: candidates.iter().map(|c| candidate_report(prep, c)).collect(),
        diagnostics,
    })
}
