//! Edge classes of neighboring tile pairs up to orientation-preserving
//! congruence (or similarity), and translation classes of single tiles.
//!
//! Pairs are compared through pose-normalized forms: the pair is moved so
//! that one boundary edge of its first tile starts at the origin and points
//! along +x (in similarity mode that edge is also scaled to unit length).
//! Two pairs are congruent iff some normalized form of one matches the
//! reference form of the other vertex for vertex up to a cyclic shift, within
//! the shape tolerance.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::geometry::{ContactKind, Point, ToleranceContext};
use crate::patch::{ContactGraph, Patch};

/// Which maps relate equivalent pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassMode {
    Isometry,
    Similarity,
}

#[derive(Debug, Clone, PartialEq)]
struct PairForm {
    first: Vec<Point>,
    second: Vec<Point>,
    anchor_len: f64,
}

/// Pose-normalized description of an unordered tile pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSignature {
    forms: Vec<PairForm>,
    key: String,
}

impl PairSignature {
    /// Quantized canonical text of the pair, for display and reports.
    pub fn key(&self) -> &str {
        &self.key
    }

    /// True iff the two pairs are related by a map of the signature's mode.
    pub fn matches(&self, other: &PairSignature, ctx: &ToleranceContext) -> bool {
        let reference = &other.forms[0];
        self.forms.iter().any(|f| forms_match(f, reference, ctx))
    }
}

fn normalize(points: &[Point], origin: Point, angle: f64, scale: f64) -> Vec<Point> {
    points.iter().map(|&p| (p - origin).rotate(-angle) * scale).collect()
}

/// True iff `b` equals `a` after some cyclic shift, vertex by vertex within `tol`.
fn cyclic_match(a: &[Point], b: &[Point], tol: f64) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    (0..n).any(|s| b[s].dist(a[0]) <= tol && (1..n).all(|i| a[i].dist(b[(i + s) % n]) <= tol))
}

fn forms_match(x: &PairForm, y: &PairForm, ctx: &ToleranceContext) -> bool {
    let tol = ctx.shape_tol() / y.anchor_len.min(x.anchor_len);
    cyclic_match(&x.first, &y.first, tol) && cyclic_match(&x.second, &y.second, tol)
}

fn pair_forms(a: &[Point], b: &[Point], mode: ClassMode) -> Vec<PairForm> {
    let mut forms = Vec::with_capacity(a.len() + b.len());
    for (first, second) in [(a, b), (b, a)] {
        let n = first.len();
        for i in 0..n {
            let (p, q) = (first[i], first[(i + 1) % n]);
            let len = p.dist(q);
            let (scale, anchor_len) = match mode {
                ClassMode::Isometry => (1.0, 1.0),
                ClassMode::Similarity => (1.0 / len, len),
            };
            let angle = (q - p).angle();
            forms.push(PairForm {
                first: normalize(first, p, angle, scale),
                second: normalize(second, p, angle, scale),
                anchor_len,
            });
        }
    }
    forms
}

fn quantized(points: &[Point]) -> Vec<(i64, i64)> {
    let q = |v: f64| {
        let r = (v * 1e6).round() as i64;
        if r == 0 {
            0
        } else {
            r
        }
    };
    let mut out: Vec<(i64, i64)> = points.iter().map(|p| (q(p.x), q(p.y))).collect();
    let start = (0..out.len()).min_by_key(|&i| out[i]).unwrap_or(0);
    out.rotate_left(start);
    out
}

fn key_of(forms: &[PairForm]) -> String {
    let best = forms
        .iter()
        .map(|f| (quantized(&f.first), quantized(&f.second)))
        .min()
        .unwrap_or_default();
    let mut s = String::new();
    for (i, part) in [best.0, best.1].iter().enumerate() {
        if i > 0 {
            s.push('|');
        }
        for (k, (x, y)) in part.iter().enumerate() {
            if k > 0 {
                s.push(';');
            }
            let _ = write!(s, "{x},{y}");
        }
    }
    s
}

/// Signature of the unordered pair of polygons with corner lists `a`, `b`.
pub fn pair_signature(a: &[Point], b: &[Point], mode: ClassMode) -> PairSignature {
    let forms = pair_forms(a, b, mode);
    let key = key_of(&forms);
    PairSignature { forms, key }
}

/// Corner lists of all tiles, with straight-angle vertices removed.
pub fn tile_corners(p: &Patch) -> Vec<Vec<Point>> {
    p.tiles().iter().map(|t| t.shape.corners(p.ctx.angle_eps)).collect()
}

#[derive(Debug, Clone)]
pub struct EdgeClass {
    /// 1-based class id.
    pub id: usize,
    pub signature: PairSignature,
    /// Contact graph edge indices E(k), ascending.
    pub edges: Vec<usize>,
}

/// Partition of the edges of one contact kind into pair classes.
#[derive(Debug, Clone)]
pub struct EdgeClassTable {
    pub kind: ContactKind,
    pub mode: ClassMode,
    pub classes: Vec<EdgeClass>,
    class_of: BTreeMap<usize, usize>,
}

impl EdgeClassTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, edge: usize) -> Option<usize> {
        self.class_of.get(&edge).copied()
    }

    pub fn class(&self, id: usize) -> &EdgeClass {
        &self.classes[id - 1]
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> {
        1..=self.classes.len()
    }
}

/// Groups the edges of `kind` into classes. Class ids follow the first
/// occurrence of each class in edge order.
pub fn build_edge_classes(p: &Patch, g: &ContactGraph, kind: ContactKind, mode: ClassMode) -> EdgeClassTable {
    let corners = tile_corners(p);
    let mut classes: Vec<EdgeClass> = Vec::new();
    let mut class_of = BTreeMap::new();
    for e in g.edges_of(kind) {
        let edge = g.edge(e);
        let (ca, cb) = (&corners[edge.a], &corners[edge.b]);
        let sig = pair_signature(ca, cb, mode);
        let sizes = sorted_pair(ca.len(), cb.len());
        let found = classes.iter_mut().find(|c| {
            let rep = &c.signature.forms[0];
            sorted_pair(rep.first.len(), rep.second.len()) == sizes && sig.matches(&c.signature, &p.ctx)
        });
        let id = match found {
            Some(c) => {
                c.edges.push(e);
                c.id
            }
            None => {
                let id = classes.len() + 1;
                classes.push(EdgeClass {
                    id,
                    signature: sig,
                    edges: vec![e],
                });
                id
            }
        };
        class_of.insert(e, id);
    }
    EdgeClassTable {
        kind,
        mode,
        classes,
        class_of,
    }
}

fn sorted_pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Partition of tiles into classes of pure translates.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationClassTable {
    pub classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl TranslationClassTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, tile: usize) -> usize {
        self.class_of[tile]
    }

    /// Number of distinct translation classes among `tiles`.
    pub fn distinct(&self, tiles: impl IntoIterator<Item = usize>) -> usize {
        let mut seen = vec![false; self.classes.len()];
        let mut n = 0;
        for t in tiles {
            let c = self.class_of[t];
            if !seen[c] {
                seen[c] = true;
                n += 1;
            }
        }
        n
    }
}

fn is_translate(a: &[Point], b: &[Point], tol: f64) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    (0..n).any(|s| {
        let off = b[s] - a[0];
        (1..n).all(|i| (a[i] + off).dist(b[(i + s) % n]) <= tol)
    })
}

pub fn translation_classes(p: &Patch) -> TranslationClassTable {
    let corners = tile_corners(p);
    let tol = p.ctx.shape_tol();
    group(corners.len(), |a, b| is_translate(&corners[a], &corners[b], tol))
}

/// Greedy partition of `0..n`; each item joins the first class whose first
/// member is `same` as it.
fn group(n: usize, same: impl Fn(usize, usize) -> bool) -> TranslationClassTable {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = Vec::with_capacity(n);
    for i in 0..n {
        match classes.iter().position(|cl| same(cl[0], i)) {
            Some(k) => {
                classes[k].push(i);
                class_of.push(k);
            }
            None => {
                class_of.push(classes.len());
                classes.push(vec![i]);
            }
        }
    }
    TranslationClassTable { classes, class_of }
}

fn single_forms(corners: &[Point], reflections: bool) -> Vec<Vec<Point>> {
    let mut variants = vec![corners.to_vec()];
    if reflections {
        variants.push(corners.iter().rev().map(|p| Point::new(p.x, -p.y)).collect());
    }
    let mut out = Vec::new();
    for v in variants {
        let n = v.len();
        for i in 0..n {
            let (p, q) = (v[i], v[(i + 1) % n]);
            out.push(normalize(&v, p, (q - p).angle(), 1.0));
        }
    }
    out
}

/// Classes of tiles congruent under isometries including reflections.
pub fn congruence_classes(p: &Patch) -> TranslationClassTable {
    let corners = tile_corners(p);
    let tol = p.ctx.shape_tol();
    let forms: Vec<Vec<Vec<Point>>> = corners.iter().map(|c| single_forms(c, true)).collect();
    group(corners.len(), |a, b| {
        forms[b].iter().any(|f| cyclic_match(f, &forms[a][0], tol))
    })
}

/// Largest number of translation classes found inside one congruence class.
pub fn orientation_diversity(p: &Patch, tt: &TranslationClassTable) -> usize {
    congruence_classes(p)
        .classes
        .iter()
        .map(|cl| tt.distinct(cl.iter().copied()))
        .max()
        .unwrap_or(0)
}

/// True iff at least three congruent tiles differ in orientation or
/// reflection, that is, some congruence class spans three translation classes.
pub fn orientation_precheck(p: &Patch, tt: &TranslationClassTable) -> bool {
    orientation_diversity(p, tt) >= 3
}
