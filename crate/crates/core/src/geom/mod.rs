//! Exact plane arithmetic: scalars, points, isometries and polygons.

pub mod isometry;
pub mod point;
pub mod polygon;
pub mod rational;
pub mod scalar;

pub use isometry::{Isometry, UnitRotation};
pub use point::{orient, Point};
pub use polygon::{congruences, hausdorff_distance, polygon_area, BBox, FloatPolygon, Overlap, Polygon};
pub use rational::Rational;
pub use scalar::{set_tolerance, tolerance, Mode, Scalar, Surd, DEFAULT_TOLERANCE};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("operands use different arithmetic modes")]
    ModeMismatch,
    #[error("rotation is not a unit complex number (|u|^2 = {norm_sq})")]
    NotUnitRotation { norm_sq: f64 },
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} repeats its successor")]
    RepeatedVertex(usize),
    #[error("edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
    #[error("vertices are clockwise")]
    NotCounterClockwise,
    #[error("polygon has zero area")]
    DegenerateGeometry,
}
