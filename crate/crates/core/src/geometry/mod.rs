//! Tolerance-aware planar primitives.
//!
//! Every coordinate comparison in the crate goes through a single
//! [`ToleranceContext`]. Tiles are simple polygons stored counterclockwise.

mod intersect;
mod point;
mod polygon;
mod polyline;
mod route;
mod transform;

pub use intersect::{
    boundary_intersection, contact_kind, intersect_segments, ContactKind, IntersectionSet, SegmentHit,
};
pub use point::{Point, PointIndex};
pub use polygon::{Location, Polygon, PolygonDefect};
pub use polyline::{
    closed_polyline_is_simple, polyline_distance, polyline_is_simple, segment_distance, unwrapped_angle, winding_number,
};
pub use route::{representative_point, route_inside, segment_inside};
pub use transform::{DirectIsometry, PlaneMap, SimilarityMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("polygon interiors overlap")]
    OverlappingInteriors,
    #[error("curve vertex {index} lies on the center")]
    CenterOnCurve { index: usize },
    #[error("no interior route between {from} and {to}")]
    NoRoute { from: Point, to: Point },
}

/// Absolute length and angle tolerances shared by one analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceContext {
    pub eps: f64,
    pub angle_eps: f64,
}

impl ToleranceContext {
    pub const DEFAULT_ANGLE_EPS: f64 = 1e-6;
    /// Relative factor applied to the patch diameter when no eps is given.
    pub const RELATIVE_EPS: f64 = 1e-9;

    pub fn new(eps: f64, angle_eps: f64) -> Self {
        assert!(eps > 0.0 && eps.is_finite(), "eps must be positive");
        assert!(angle_eps > 0.0 && angle_eps.is_finite(), "angle_eps must be positive");
        Self { eps, angle_eps }
    }

    pub fn for_diameter(diameter: f64) -> Self {
        let eps = (diameter * Self::RELATIVE_EPS).max(f64::MIN_POSITIVE * 1e6);
        Self::new(eps, Self::DEFAULT_ANGLE_EPS)
    }

    /// Comparison tolerance for pose-normalized pair forms.
    pub fn shape_tol(&self) -> f64 {
        10.0 * self.eps
    }
}

impl Default for ToleranceContext {
    fn default() -> Self {
        Self::new(1e-9, Self::DEFAULT_ANGLE_EPS)
    }
}
