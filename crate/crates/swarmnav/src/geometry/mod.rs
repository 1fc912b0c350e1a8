//! Exact planar primitives for polygonal scenes.
//!
//! Everything here is a pure function of its inputs. Coordinates are `f64`
//! scene units; boundary points are addressed either as Cartesian [`Point`]s
//! or as [`ArcPosition`]s (arc length along a counterclockwise boundary).
//!
//! Predicates are exact up to the tolerances in [`Tolerances`]: coincidence
//! within `eps_geom` and angular alignment within `eps_angle` are treated as
//! degenerate and reported as errors rather than silently perturbed.

mod intersect;
mod point;
mod polygon;
mod query;
mod visibility;

pub use intersect::{first_hit, seg_cross, segment_free, SegCross};
pub use point::Point;
pub use polygon::{ArcPosition, Hit, Polygon};
pub use query::{
    arc_distance, boundary_argmin_distance, boundary_point_at, convex_hull,
    direction_to_target_free, is_out_obstacle, m_line_crossings, perimeter_split_fractions,
    point_in_convex_hull, WalkDir,
};
pub use visibility::shortest_path_length;

use thiserror::Error;

/// Geometric failure modes. Scenes in general position never produce the
/// tangency/degeneracy variants; hitting one means the input violates the
/// preconditions of the operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("non-finite coordinate at polygon vertex {0}")]
    NonFiniteCoordinate(usize),
    #[error("zero-length edge at polygon vertex {0}")]
    DegenerateEdge(usize),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon boundary self-intersects (edges {0} and {1})")]
    SelfIntersecting(usize, usize),
    #[error("segment grazes a vertex or runs tangent to an edge near ({x}, {y})")]
    AmbiguousTangency { x: f64, y: f64 },
    #[error("arc positions lie on different obstacles: {0} vs {1}")]
    MixedObstacles(usize, usize),
    #[error("obstacle id {0} out of range (scene has {1} obstacles)")]
    BadObstacleId(usize, usize),
    #[error("general position violated on obstacle {obstacle}: {reason}")]
    GeneralPositionViolation { obstacle: usize, reason: String },
    #[error("operation needs exactly 2 crossings, obstacle {obstacle} has {found}")]
    UnsupportedTopology { obstacle: usize, found: usize },
}

/// Coincidence and tangency tolerances, normally derived from the scene
/// diameter so that they scale with the coordinates in play.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Distance below which two points coincide (scene units).
    pub eps_geom: f64,
    /// Angle below which two directions are collinear (radians).
    pub eps_angle: f64,
}

impl Tolerances {
    /// Tolerances for a scene whose bounding-box diagonal is `diameter`.
    pub fn for_diameter(diameter: f64) -> Self {
        let scale = if diameter.is_finite() && diameter > 0.0 {
            diameter
        } else {
            1.0
        };
        Tolerances {
            eps_geom: 1e-9 * scale,
            eps_angle: 1e-9,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::for_diameter(1.0)
    }
}
