//! Scene data model, validation, JSON file format, and generators for the
//! constructed benchmark scenes plus a seeded random-scene generator.

mod generators;

pub use generators::{
    comb_min_distance, gen_com_trap, gen_comb, gen_doubleback, gen_long_wall, gen_random,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    self, m_line_crossings, segment_free, shortest_path_length, GeometryError, Point, Polygon,
    SegCross, Tolerances,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("geometry error: {0}")]
    Geometry(#[from] GeometryError),
    #[error("obstacles {0} and {1} overlap")]
    OverlappingObstacles(usize, usize),
    #[error("no free path from start to target")]
    NoFreePath,
    #[error("{which} point lies inside obstacle {obstacle}")]
    StartInsideObstacle { which: Endpoint, obstacle: usize },
    #[error("general position violated by obstacle {obstacle}: {reason}")]
    GeneralPositionViolation { obstacle: usize, reason: String },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("scene generation exhausted after {0} attempts")]
    GenerationExhausted(u32),
    #[error("scene file is not valid: {0}")]
    Parse(String),
}

/// Which query point an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Start,
    Target,
}

impl std::fmt::Display for Endpoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Endpoint::Start => f.write_str("start"),
            Endpoint::Target => f.write_str("target"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SceneFlags {
    #[serde(default)]
    pub target_on_boundary: bool,
}

/// A navigation problem: start point, target point, and polygonal obstacles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub name: String,
    pub start: Point,
    pub target: Point,
    pub obstacles: Vec<Polygon>,
    #[serde(default)]
    pub flags: SceneFlags,
}

/// Summary quantities of a scene: straight-line distance, per-obstacle
/// perimeters and crossing counts, the maximum perimeter, and the perimeter
/// sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneMetrics {
    pub d: f64,
    pub perimeters: Vec<f64>,
    pub p_bar: f64,
    pub m: Vec<usize>,
    pub sum_p: f64,
}

impl SceneMetrics {
    /// Measures a scene without enforcing the full validity invariants:
    /// crossing counts may be odd and reachability is not checked. Used by
    /// the simulators, which must be able to run on degenerate inputs (e.g.
    /// a sealed-off target) and report the outcome rather than refuse.
    pub fn measure(scene: &Scene) -> Result<SceneMetrics, SceneError> {
        let tol = scene.tolerances();
        let d = scene.start.dist(scene.target);
        let mut perimeters = Vec::with_capacity(scene.obstacles.len());
        let mut m = Vec::with_capacity(scene.obstacles.len());
        for (i, poly) in scene.obstacles.iter().enumerate() {
            perimeters.push(poly.perimeter());
            let crossings =
                m_line_crossings(scene.start, scene.target, &scene.obstacles, i, &tol)
                    .map_err(|e| lift_geometry(e, i))?;
            m.push(crossings.len());
        }
        let p_bar = perimeters.iter().cloned().fold(0.0, f64::max);
        // fold, not sum(): an empty std sum is -0.0, which would leak a
        // negative zero into serialized metrics.
        let sum_p = perimeters.iter().fold(0.0, |acc, p| acc + p);
        Ok(SceneMetrics {
            d,
            perimeters,
            p_bar,
            m,
            sum_p,
        })
    }
}

fn lift_geometry(e: GeometryError, obstacle: usize) -> SceneError {
    match e {
        GeometryError::GeneralPositionViolation { reason, .. } => {
            SceneError::GeneralPositionViolation { obstacle, reason }
        }
        GeometryError::AmbiguousTangency { x, y } => SceneError::GeneralPositionViolation {
            obstacle,
            reason: format!("tangential contact near ({x}, {y})"),
        },
        other => SceneError::Geometry(other),
    }
}

impl Scene {
    pub fn new(name: impl Into<String>, start: Point, target: Point, obstacles: Vec<Polygon>) -> Scene {
        Scene {
            name: name.into(),
            start,
            target,
            obstacles,
            flags: SceneFlags::default(),
        }
    }

    /// Parses a scene from its JSON representation, normalizing vertex order
    /// to counterclockwise and rejecting invalid polygons.
    pub fn from_json(text: &str) -> Result<Scene, SceneError> {
        serde_json::from_str(text).map_err(|e| SceneError::Parse(e.to_string()))
    }

    /// Serializes the scene as pretty-printed JSON. Numbers use the shortest
    /// representation that round-trips, so save/load/save is byte-stable.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("scene serialization");
        out.push('\n');
        out
    }

    /// Diagonal of the bounding box around all obstacle vertices plus the
    /// start and target points. Falls back to 1 for a fully degenerate scene
    /// so tolerance scales stay positive.
    pub fn diameter(&self) -> f64 {
        let mut lo = self.start;
        let mut hi = self.start;
        let mut grow = |p: Point| {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        };
        grow(self.target);
        for poly in &self.obstacles {
            for &v in poly.vertices() {
                grow(v);
            }
        }
        let diag = (hi - lo).norm();
        if diag > 0.0 {
            diag
        } else {
            1.0
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances::for_diameter(self.diameter())
    }

    /// Checks every scene invariant and returns the measured metrics:
    /// polygons pairwise disjoint, start and target in free space (target on
    /// a boundary only when flagged), general position along the start-target
    /// segment, even crossing counts, and a free path from start to target.
    pub fn validate(&self) -> Result<SceneMetrics, SceneError> {
        let tol = self.tolerances();
        self.check_disjoint(&tol)?;
        self.check_endpoints_free(&tol)?;
        let metrics = SceneMetrics::measure(self)?;
        for (i, &mi) in metrics.m.iter().enumerate() {
            if mi % 2 != 0 && !self.flags.target_on_boundary {
                return Err(SceneError::GeneralPositionViolation {
                    obstacle: i,
                    reason: format!("odd crossing count {mi} on the start-target segment"),
                });
            }
        }
        if shortest_path_length(self.start, self.target, &self.obstacles, &tol).is_none() {
            return Err(SceneError::NoFreePath);
        }
        Ok(metrics)
    }

    fn check_disjoint(&self, tol: &Tolerances) -> Result<(), SceneError> {
        for i in 0..self.obstacles.len() {
            for j in (i + 1)..self.obstacles.len() {
                let (a, b) = (&self.obstacles[i], &self.obstacles[j]);
                for ea in 0..a.vertex_count() {
                    let (a0, a1) = a.edge(ea);
                    let len_a = a.edge_len(ea);
                    for eb in 0..b.vertex_count() {
                        let (b0, b1) = b.edge(eb);
                        match geometry::seg_cross(a0, a1, b0, b1, tol.eps_geom) {
                            SegCross::None => {}
                            SegCross::Collinear => {
                                return Err(SceneError::GeneralPositionViolation {
                                    obstacle: j,
                                    reason: format!(
                                        "edge overlaps collinearly with obstacle {i}"
                                    ),
                                });
                            }
                            SegCross::At { t, u, .. } => {
                                let et = tol.eps_geom / len_a;
                                let eu = tol.eps_geom / b.edge_len(eb);
                                let proper = t > et && t < 1.0 - et && u > eu && u < 1.0 - eu;
                                if proper {
                                    return Err(SceneError::OverlappingObstacles(i, j));
                                }
                                return Err(SceneError::GeneralPositionViolation {
                                    obstacle: j,
                                    reason: format!("boundary touches obstacle {i}"),
                                });
                            }
                        }
                    }
                }
                // No edge contact: containment is all-or-nothing.
                if a.contains(b.vertices()[0]) || b.contains(a.vertices()[0]) {
                    return Err(SceneError::OverlappingObstacles(i, j));
                }
            }
        }
        Ok(())
    }

    fn check_endpoints_free(&self, tol: &Tolerances) -> Result<(), SceneError> {
        for (i, poly) in self.obstacles.iter().enumerate() {
            let s_dist = poly.distance_to_boundary(self.start);
            if poly.contains(self.start) || s_dist <= tol.eps_geom {
                return Err(SceneError::StartInsideObstacle {
                    which: Endpoint::Start,
                    obstacle: i,
                });
            }
            let t_dist = poly.distance_to_boundary(self.target);
            if self.flags.target_on_boundary {
                // On the boundary is fine; strictly inside is not.
                if poly.contains(self.target) && t_dist > tol.eps_geom {
                    return Err(SceneError::StartInsideObstacle {
                        which: Endpoint::Target,
                        obstacle: i,
                    });
                }
            } else if poly.contains(self.target) || t_dist <= tol.eps_geom {
                return Err(SceneError::StartInsideObstacle {
                    which: Endpoint::Target,
                    obstacle: i,
                });
            }
        }
        Ok(())
    }
}

/// Free-space check between two points, at scene tolerances.
pub fn scene_segment_free(scene: &Scene, a: Point, b: Point) -> bool {
    segment_free(a, b, &scene.obstacles, &scene.tolerances())
}
