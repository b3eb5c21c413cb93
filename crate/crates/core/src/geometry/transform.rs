use super::{Point, Polygon};

/// A map of the plane applied pointwise to polygons.
pub trait PlaneMap {
    fn map_point(&self, p: Point) -> Point;

    fn apply(&self, poly: &Polygon) -> Polygon {
        Polygon::from_ccw(poly.vertices().iter().map(|&p| self.map_point(p)).collect())
    }
}

/// Orientation-preserving isometry: rotation about the origin, then translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectIsometry {
    pub rotation: f64,
    pub translation: Point,
}

impl DirectIsometry {
    pub const IDENTITY: DirectIsometry = DirectIsometry {
        rotation: 0.0,
        translation: Point::ORIGIN,
    };

    pub fn new(rotation: f64, translation: Point) -> Self {
        Self { rotation, translation }
    }

    /// Rotation by `angle` about `center`.
    pub fn rotation_about(center: Point, angle: f64) -> Self {
        Self::new(angle, center - center.rotate(angle))
    }
}

impl PlaneMap for DirectIsometry {
    fn map_point(&self, p: Point) -> Point {
        p.rotate(self.rotation) + self.translation
    }
}

/// Rotation and positive scaling about the origin, then translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityMap {
    pub rotation: f64,
    pub scale: f64,
    pub translation: Point,
}

impl SimilarityMap {
    pub fn new(rotation: f64, scale: f64, translation: Point) -> Self {
        assert!(scale > 0.0, "similarity scale must be positive");
        Self {
            rotation,
            scale,
            translation,
        }
    }
}

impl PlaneMap for SimilarityMap {
    fn map_point(&self, p: Point) -> Point {
        p.rotate(self.rotation) * self.scale + self.translation
    }
}

impl From<DirectIsometry> for SimilarityMap {
    fn from(m: DirectIsometry) -> Self {
        SimilarityMap::new(m.rotation, 1.0, m.translation)
    }
}
