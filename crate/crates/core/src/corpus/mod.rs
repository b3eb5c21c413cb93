//! Synthetic patches with known structure: generators and shipped fixtures.

mod fixtures;

pub use fixtures::{fixture_names, load_fixture, Fixture};

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{build_edge_classes, ClassMode};
use crate::geometry::{ContactKind, Point, Polygon};
use crate::patch::{build_contact_graph, Patch, PatchError, Tile};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("{0}")]
    BadParameter(String),
    #[error(transparent)]
    Patch(#[from] PatchError),
}

/// Which generator to run, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    SquareGrid { n: usize },
    RectSpiral { turns: usize },
    AnnulusRings { rings: usize, sectors: usize },
}

impl GeneratorSpec {
    pub fn generate(self) -> Result<Generated, CorpusError> {
        match self {
            GeneratorSpec::SquareGrid { n } => gen_square_grid(n),
            GeneratorSpec::RectSpiral { turns } => gen_rect_spiral(turns),
            GeneratorSpec::AnnulusRings { rings, sectors } => gen_annulus_rings(rings, sectors),
        }
    }
}

/// What the generator built the patch to contain.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GroundTruth {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Point>,
    /// Tile ids per spiral arm, from the center outwards.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arms: Vec<Vec<String>>,
    /// Tile ids per ring, innermost first.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rings: Vec<Vec<String>>,
    /// Segmental class ids (isometry mode) separating the parts.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cut_classes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub patch: Patch,
    pub truth: GroundTruth,
}

impl Generated {
    /// Patch file text with the ground truth as its annotation block.
    pub fn to_json(&self) -> String {
        let mut file = self.patch.to_file();
        file.expected = Some(serde_json::to_value(&self.truth).expect("truth serializes"));
        serde_json::to_string_pretty(&file).expect("patch serializes")
    }
}

/// `n`×`n` unit squares.
pub fn gen_square_grid(n: usize) -> Result<Generated, CorpusError> {
    if !(2..=64).contains(&n) {
        return Err(CorpusError::BadParameter(format!("grid size {n} outside 2..=64")));
    }
    let mut tiles = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let (x, y) = (c as f64, r as f64);
            tiles.push(Tile::new(
                format!("r{r:02}c{c:02}"),
                Polygon::rect(x, y, x + 1.0, y + 1.0),
            ));
        }
    }
    Ok(Generated {
        patch: Patch::new(tiles, None),
        truth: GroundTruth::default(),
    })
}

type Cell = (i64, i64);

fn left(d: Cell) -> Cell {
    (-d.1, d.0)
}

fn step(a: Cell, d: Cell, k: i64) -> Cell {
    (a.0 + k * d.0, a.1 + k * d.1)
}

/// A 1×2 rung across an arm: the outer cell, and the direction the arm runs.
/// The inner cell is the outer cell moved one step to the left.
#[derive(Debug, Clone, Copy)]
struct Rung {
    outer: Cell,
    fwd: Cell,
}

/// Length of the first straight run of rungs.
const FIRST_RUN: i64 = 2;
/// Fixed point of the half-turn taking one arm onto the other.
const SPIRAL_PIVOT: Point = Point { x: 0.0, y: 3.0 };

/// Rungs of one arm, from the center outwards.
///
/// Straight runs turn left; the first rung after a turn lies beyond the end
/// of the previous run in its inner lane, so the two touch along half a long
/// edge and leave a notch on the outer side. A single rung in front of the
/// first run starts the arm next to the center.
fn spiral_arm(runs: usize) -> Vec<Rung> {
    let mut out = vec![Rung {
        outer: (-2, 1),
        fwd: (0, -1),
    }];
    let mut o: Cell = (0, 0);
    let mut d: Cell = (1, 0);
    for k in 0..runs as i64 {
        let len = if k == 0 { FIRST_RUN } else { FIRST_RUN + 1 + 2 * k };
        for i in 0..len {
            out.push(Rung {
                outer: step(o, d, i),
                fwd: d,
            });
        }
        o = step(step(o, d, len + 1), left(d), 1);
        d = left(d);
    }
    out
}

/// Rung outline: a 1×2 rectangle with a tab on the front long edge and a
/// matching notch on the back one, both beside the outer cell.
fn rung_polygon(r: Rung) -> Polygon {
    let f = Point::new(r.fwd.0 as f64, r.fwd.1 as f64);
    let l = f.perp();
    let center = Point::new(r.outer.0 as f64 + 0.5, r.outer.1 as f64 + 0.5);
    let origin = center - f * 0.5 - l * 0.5;
    let local = [
        (0.0, 0.0),
        (1.0, 0.0),
        (1.0, 0.25),
        (1.25, 0.25),
        (1.25, 0.6),
        (1.0, 0.6),
        (1.0, 2.0),
        (0.0, 2.0),
        (0.0, 0.6),
        (0.25, 0.6),
        (0.25, 0.25),
        (0.0, 0.25),
    ];
    Polygon::from_ccw(local.iter().map(|&(u, v)| origin + f * u + l * v).collect())
}

/// Two congruent arms of tabbed 1×2 rungs winding `turns` half-turns around
/// the origin, each the half-turn of the other.
///
/// Arms meet along short edges only, so the short-edge class is the cut. The
/// rung notches leave small holes, so the patch is emitted in singular mode
/// where hole boundaries count as border.
pub fn gen_rect_spiral(turns: usize) -> Result<Generated, CorpusError> {
    if !(1..=12).contains(&turns) {
        return Err(CorpusError::BadParameter(format!("turns {turns} outside 1..=12")));
    }
    let arm = spiral_arm(2 * turns);
    let mut tiles = Vec::with_capacity(2 * arm.len());
    let mut arms = vec![Vec::new(), Vec::new()];
    for (i, &r) in arm.iter().enumerate() {
        let shape = rung_polygon(r);
        let a = Polygon::from_ccw(shape.vertices().iter().map(|&p| p - SPIRAL_PIVOT).collect());
        let b = Polygon::from_ccw(shape.vertices().iter().map(|&p| SPIRAL_PIVOT - p).collect());
        for (k, poly) in [a, b].into_iter().enumerate() {
            let id = format!("{}{i:03}", ['a', 'b'][k]);
            arms[k].push(id.clone());
            tiles.push(Tile::new(id, poly));
        }
    }
    let patch = Patch::new(tiles, None).with_singular_mode(true);
    let cut_classes = separating_classes(&patch, &arms)?;
    Ok(Generated {
        patch,
        truth: GroundTruth {
            center: Some(Point::new(0.0, 0.0)),
            arms,
            rings: Vec::new(),
            cut_classes,
        },
    })
}

/// Radius ratio between consecutive rings.
const RING_GROWTH: f64 = 1.5;
/// Chords per sector arc.
const ARC_STEPS: usize = 3;

/// `rings` rings of `sectors` annular sectors around the origin. Ring `i`
/// spans radii `g^i..g^(i+1)`, so sectors of different rings are similar but
/// not congruent.
pub fn gen_annulus_rings(rings: usize, sectors: usize) -> Result<Generated, CorpusError> {
    if rings < 2 || sectors < 6 || rings > 16 || sectors > 64 {
        return Err(CorpusError::BadParameter(format!(
            "{rings} rings of {sectors} sectors; need 2..=16 rings and 6..=64 sectors"
        )));
    }
    let arc = |radius: f64, j: usize| -> Vec<Point> {
        (0..=ARC_STEPS)
            .map(|s| {
                let a = TAU * (j as f64 + s as f64 / ARC_STEPS as f64) / sectors as f64;
                Point::new(radius * a.cos(), radius * a.sin())
            })
            .collect()
    };
    let mut tiles = Vec::new();
    let mut ring_ids = Vec::new();
    for i in 0..rings {
        let (r0, r1) = (RING_GROWTH.powi(i as i32), RING_GROWTH.powi(i as i32 + 1));
        let mut ids = Vec::new();
        for j in 0..sectors {
            let mut pts = arc(r0, j);
            pts.extend(arc(r1, j).into_iter().rev());
            let id = format!("ring{i}-s{j:02}");
            ids.push(id.clone());
            tiles.push(Tile::new(id, Polygon::from_ccw(pts)));
        }
        ring_ids.push(ids);
    }
    let patch = Patch::new(tiles, None);
    let cut_classes = separating_classes(&patch, &ring_ids)?;
    Ok(Generated {
        patch,
        truth: GroundTruth {
            center: Some(Point::new(0.0, 0.0)),
            arms: Vec::new(),
            rings: ring_ids,
            cut_classes,
        },
    })
}

/// Segmental classes (isometry mode) holding a contact between different parts.
fn separating_classes(patch: &Patch, parts: &[Vec<String>]) -> Result<Vec<usize>, CorpusError> {
    let mut part_of = vec![usize::MAX; patch.len()];
    for (k, ids) in parts.iter().enumerate() {
        for id in ids {
            if let Some(i) = patch.index_of(id) {
                part_of[i] = k;
            }
        }
    }
    let g = build_contact_graph(patch)?;
    let table = build_edge_classes(patch, &g, ContactKind::Segmental, ClassMode::Isometry);
    let mut out: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind == ContactKind::Segmental && part_of[e.a] != part_of[e.b])
        .filter_map(|(i, _)| table.class_of(i))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
