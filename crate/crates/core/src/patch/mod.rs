//! The finite tile set under analysis: ingestion, validation, contact graphs
//! and border extraction.

mod boundary;
mod graph;

pub use boundary::{compute_border, outer_boundary, BoundaryCycle, BoundaryCycles};
pub use graph::{build_contact_graph, ContactEdge, ContactGraph};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    boundary_intersection, contact_kind, ContactKind, GeometryError, Point, PointIndex, Polygon, PolygonDefect,
    ToleranceContext,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub id: String,
    pub label: Option<String>,
    pub shape: Polygon,
}

impl Tile {
    pub fn new(id: impl Into<String>, shape: Polygon) -> Self {
        Self {
            id: id.into(),
            label: None,
            shape,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// A finite portion of a tiling. Tiles are kept sorted by id and indexed by
/// position in that order everywhere else in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    tiles: Vec<Tile>,
    pub ctx: ToleranceContext,
    pub declared_center: Option<Point>,
    pub singular_mode: bool,
}

#[derive(Debug, Error)]
pub enum PatchError {
    #[error("malformed patch file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("tiles {0} and {1} have overlapping interiors")]
    Overlap(String, String),
    #[error("eps must be a positive finite number")]
    BadEps,
}

/// A problem found by [`validate_patch`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PatchDefect {
    TooFewTiles(usize),
    DuplicateId(String),
    InvalidTile { id: String, defect: PolygonDefect },
    OverlappingInteriors(String, String),
    DisconnectedUnion,
}

impl fmt::Display for PatchDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatchDefect::TooFewTiles(n) => write!(f, "patch has {n} tiles, at least 2 required"),
            PatchDefect::DuplicateId(id) => write!(f, "duplicate tile id {id}"),
            PatchDefect::InvalidTile { id, defect } => write!(f, "tile {id}: {defect}"),
            PatchDefect::OverlappingInteriors(a, b) => {
                write!(f, "tiles {a} and {b} have overlapping interiors")
            }
            PatchDefect::DisconnectedUnion => write!(f, "union of tiles is not connected"),
        }
    }
}

/// On-disk patch format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatchFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Point>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub singular_mode: bool,
    pub tiles: Vec<TileRecord>,
    /// Ground-truth annotations carried by fixtures; ignored by the analysis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<serde_json::Value>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TileRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub vertices: Vec<Point>,
}

impl Patch {
    /// Builds a patch, sorting tiles by id and snapping vertices that lie
    /// within eps of each other onto one representative. Without an explicit
    /// tolerance, eps is derived from the patch diameter.
    pub fn new(mut tiles: Vec<Tile>, eps: Option<f64>) -> Self {
        tiles.sort_by(|a, b| a.id.cmp(&b.id));
        let ctx = match eps {
            Some(e) => ToleranceContext::new(e, ToleranceContext::DEFAULT_ANGLE_EPS),
            None => ToleranceContext::for_diameter(bbox_diagonal(&tiles).max(1e-300)),
        };
        let mut index = PointIndex::new(ctx.eps);
        for t in &mut tiles {
            let snapped: Vec<Point> = t
                .shape
                .vertices()
                .iter()
                .map(|&v| {
                    let id = index.insert(v);
                    index.point(id)
                })
                .collect();
            t.shape = Polygon::new(snapped);
        }
        Patch {
            tiles,
            ctx,
            declared_center: None,
            singular_mode: false,
        }
    }

    pub fn with_center(mut self, center: Option<Point>) -> Self {
        self.declared_center = center;
        self
    }

    pub fn with_singular_mode(mut self, on: bool) -> Self {
        self.singular_mode = on;
        self
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn shape(&self, i: usize) -> &Polygon {
        &self.tiles[i].shape
    }

    pub fn id(&self, i: usize) -> &str {
        &self.tiles[i].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.tiles.binary_search_by(|t| t.id.as_str().cmp(id)).ok()
    }

    pub fn diameter(&self) -> f64 {
        bbox_diagonal(&self.tiles)
    }

    /// Area-weighted centroid of the union of tiles.
    pub fn centroid(&self) -> Point {
        let mut acc = Point::ORIGIN;
        let mut area = 0.0;
        for t in &self.tiles {
            let a = t.shape.area();
            acc = acc + t.shape.centroid() * a;
            area += a;
        }
        acc * (1.0 / area)
    }

    /// Applies `f` to every vertex, keeping ids, tolerance and flags.
    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Patch {
        let tiles = self
            .tiles
            .iter()
            .map(|t| Tile {
                id: t.id.clone(),
                label: t.label.clone(),
                shape: Polygon::new(t.shape.vertices().iter().map(|&p| f(p)).collect()),
            })
            .collect();
        let mut p = Patch::new(tiles, Some(self.ctx.eps));
        p.ctx.angle_eps = self.ctx.angle_eps;
        p.declared_center = self.declared_center.map(f);
        p.singular_mode = self.singular_mode;
        p
    }

    pub fn from_file(file: PatchFile) -> Result<Patch, PatchError> {
        if let Some(e) = file.eps {
            if !(e > 0.0 && e.is_finite()) {
                return Err(PatchError::BadEps);
            }
        }
        let tiles = file
            .tiles
            .into_iter()
            .map(|r| Tile {
                id: r.id,
                label: r.label,
                shape: Polygon::new(r.vertices),
            })
            .collect();
        Ok(Patch::new(tiles, file.eps)
            .with_center(file.center)
            .with_singular_mode(file.singular_mode))
    }

    pub fn to_file(&self) -> PatchFile {
        PatchFile {
            eps: Some(self.ctx.eps),
            center: self.declared_center,
            singular_mode: self.singular_mode,
            tiles: self
                .tiles
                .iter()
                .map(|t| TileRecord {
                    id: t.id.clone(),
                    label: t.label.clone(),
                    vertices: t.shape.vertices().to_vec(),
                })
                .collect(),
            expected: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Patch, PatchError> {
        Patch::from_file(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("patch serializes")
    }
}

fn bbox_diagonal(tiles: &[Tile]) -> f64 {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for t in tiles {
        let (a, b) = t.shape.bbox();
        lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
        hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
    }
    if tiles.is_empty() {
        0.0
    } else {
        lo.dist(hi)
    }
}

/// Lists every violated patch invariant; empty means the patch is valid.
pub fn validate_patch(p: &Patch) -> Vec<PatchDefect> {
    let mut defects = Vec::new();
    if p.len() < 2 {
        defects.push(PatchDefect::TooFewTiles(p.len()));
    }
    let mut seen = BTreeSet::new();
    for t in p.tiles() {
        if !seen.insert(t.id.as_str()) {
            defects.push(PatchDefect::DuplicateId(t.id.clone()));
        }
    }
    let mut valid = vec![true; p.len()];
    for (i, t) in p.tiles().iter().enumerate() {
        if let Err(defect) = t.shape.validate(&p.ctx) {
            valid[i] = false;
            defects.push(PatchDefect::InvalidTile {
                id: t.id.clone(),
                defect,
            });
        }
    }
    let mut parent: Vec<usize> = (0..p.len()).collect();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if !(valid[i] && valid[j]) {
                continue;
            }
            match boundary_intersection(p.shape(i), p.shape(j), &p.ctx) {
                Err(GeometryError::OverlappingInteriors) => {
                    defects.push(PatchDefect::OverlappingInteriors(
                        p.id(i).to_string(),
                        p.id(j).to_string(),
                    ));
                }
                Err(_) => continue,
                Ok(s) if contact_kind(&s) == ContactKind::None => continue,
                Ok(_) => {}
            }
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        }
    }
    let roots: BTreeSet<usize> = (0..p.len()).map(|i| find(&mut parent, i)).collect();
    if roots.len() > 1 {
        defects.push(PatchDefect::DisconnectedUnion);
    }
    defects
}

pub(crate) fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Fraction of tiles above which the border is flagged as suspiciously large.
pub const BORDER_WARNING_FRACTION: f64 = 0.6;

/// Warning text when the border covers most of the patch, which suggests the
/// patch is too thin to represent the tiling around its interior.
pub fn border_warning(p: &Patch, border: &BTreeSet<usize>) -> Option<String> {
    let frac = border.len() as f64 / p.len() as f64;
    (frac > BORDER_WARNING_FRACTION).then(|| {
        format!(
            "border holds {} of {} tiles ({:.0}%); the patch may be too small",
            border.len(),
            p.len(),
            100.0 * frac
        )
    })
}

/// Tile ids grouped per component, for reports.
pub fn ids_of(p: &Patch, tiles: &[usize]) -> Vec<String> {
    tiles.iter().map(|&i| p.id(i).to_string()).collect()
}

/// Map from tile id to index, for resolving user input.
pub fn id_map(p: &Patch) -> BTreeMap<&str, usize> {
    p.tiles().iter().enumerate().map(|(i, t)| (t.id.as_str(), i)).collect()
}
