use serde::{Deserialize, Serialize};

use super::intersect::{seg_cross, SegCross};
use super::{ArcPosition, GeometryError, Point, Polygon, Tolerances};

/// Direction of travel along an obstacle boundary. `Ccw` is the direction of
/// increasing arc length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkDir {
    Cw,
    Ccw,
}

impl WalkDir {
    pub fn reversed(self) -> WalkDir {
        match self {
            WalkDir::Cw => WalkDir::Ccw,
            WalkDir::Ccw => WalkDir::Cw,
        }
    }

    /// +1 for `Ccw`, -1 for `Cw`: the sign of ds/dt while walking.
    pub fn sign(self) -> f64 {
        match self {
            WalkDir::Cw => -1.0,
            WalkDir::Ccw => 1.0,
        }
    }
}

fn poly_at<'a>(
    obstacles: &'a [Polygon],
    obstacle_id: usize,
) -> Result<&'a Polygon, GeometryError> {
    obstacles
        .get(obstacle_id)
        .ok_or(GeometryError::BadObstacleId(obstacle_id, obstacles.len()))
}

/// Cartesian point for a boundary position.
pub fn boundary_point_at(
    pos: ArcPosition,
    obstacles: &[Polygon],
) -> Result<Point, GeometryError> {
    Ok(poly_at(obstacles, pos.obstacle_id)?.point_at_arc(pos.s))
}

/// Boundary distance from `a` to `b` walking in direction `dir`. Both
/// positions must lie on the same obstacle.
pub fn arc_distance(
    a: ArcPosition,
    b: ArcPosition,
    dir: WalkDir,
    obstacles: &[Polygon],
) -> Result<f64, GeometryError> {
    if a.obstacle_id != b.obstacle_id {
        return Err(GeometryError::MixedObstacles(a.obstacle_id, b.obstacle_id));
    }
    let poly = poly_at(obstacles, a.obstacle_id)?;
    let delta = match dir {
        WalkDir::Ccw => b.s - a.s,
        WalkDir::Cw => a.s - b.s,
    };
    if delta == 0.0 {
        return Ok(0.0);
    }
    Ok(poly.wrap_arc(delta))
}

/// Whether a unit standing at `pos` may leave the boundary straight toward
/// `target` without immediately re-entering this obstacle.
///
/// On an edge interior the test is a side-of-edge check; at a vertex the
/// departure direction must fall outside the interior wedge spanned by the
/// two incident edges.
///
/// # Errors
/// [`GeometryError::AmbiguousTangency`] when the direction is within the
/// angular tolerance of an edge line or a wedge boundary, or when `target`
/// coincides with the standing point.
pub fn direction_to_target_free(
    pos: ArcPosition,
    target: Point,
    obstacles: &[Polygon],
    tol: &Tolerances,
) -> Result<bool, GeometryError> {
    let poly = poly_at(obstacles, pos.obstacle_id)?;
    let here = poly.point_at_arc(pos.s);
    let d = target - here;
    if d.norm() <= tol.eps_geom {
        return Err(GeometryError::AmbiguousTangency {
            x: here.x,
            y: here.y,
        });
    }
    if let Some(vi) = poly.vertex_near_arc(pos.s, tol.eps_geom) {
        let n = poly.vertex_count();
        let v = poly.vertices()[vi];
        let to_next = poly.vertices()[(vi + 1) % n] - v;
        let to_prev = poly.vertices()[(vi + n - 1) % n] - v;
        // The interior wedge at a CCW vertex sweeps counterclockwise from
        // the direction toward the next vertex to the direction toward the
        // previous one.
        let tau = std::f64::consts::TAU;
        let start = to_next.angle();
        let span = (to_prev.angle() - start).rem_euclid(tau);
        let offset = (d.angle() - start).rem_euclid(tau);
        let near_start = offset.min(tau - offset) <= tol.eps_angle;
        let near_end = (offset - span).abs() <= tol.eps_angle;
        if near_start || near_end {
            return Err(GeometryError::AmbiguousTangency { x: v.x, y: v.y });
        }
        Ok(offset > span)
    } else {
        let (i, _) = poly.locate_arc(pos.s);
        let (a, b) = poly.edge(i);
        let e = b - a;
        let sin_theta = e.cross(d) / (e.norm() * d.norm());
        if sin_theta.abs() <= tol.eps_angle {
            return Err(GeometryError::AmbiguousTangency {
                x: here.x,
                y: here.y,
            });
        }
        // Interior lies left of a CCW edge; free departure points right.
        Ok(sin_theta < 0.0)
    }
}

/// Boundary position of `obstacle_id` closest to `target` in straight-line
/// distance. Ties resolve to the smallest arc coordinate.
pub fn boundary_argmin_distance(
    obstacle_id: usize,
    target: Point,
    obstacles: &[Polygon],
) -> Result<ArcPosition, GeometryError> {
    let poly = poly_at(obstacles, obstacle_id)?;
    let (s, _) = poly.closest_boundary_point(target);
    Ok(ArcPosition { obstacle_id, s })
}

/// Transversal crossings of the segment `start -> target` with one
/// obstacle's boundary, ordered by distance from `start`.
///
/// # Errors
/// [`GeometryError::GeneralPositionViolation`] when a vertex lies on the
/// segment or an edge runs collinear with it — these make the crossing
/// count ill-defined.
pub fn m_line_crossings(
    start: Point,
    target: Point,
    obstacles: &[Polygon],
    obstacle_id: usize,
    tol: &Tolerances,
) -> Result<Vec<ArcPosition>, GeometryError> {
    let poly = poly_at(obstacles, obstacle_id)?;
    let len = (target - start).norm();
    if len <= tol.eps_geom {
        return Ok(Vec::new());
    }
    let eps_t = tol.eps_geom / len;
    let mut found: Vec<(f64, f64)> = Vec::new(); // (t, s)
    for ei in 0..poly.vertex_count() {
        let (a, b) = poly.edge(ei);
        match seg_cross(start, target, a, b, tol.eps_geom) {
            SegCross::None => {}
            SegCross::Collinear => {
                return Err(GeometryError::GeneralPositionViolation {
                    obstacle: obstacle_id,
                    reason: format!("edge {ei} runs collinear with the start-target segment"),
                });
            }
            SegCross::At { t, u, .. } => {
                // Contact at the segment endpoints is arrival/departure,
                // not a crossing.
                if t < eps_t || t > 1.0 - eps_t {
                    continue;
                }
                let eps_u = tol.eps_geom / poly.edge_len(ei);
                if u < eps_u || u > 1.0 - eps_u {
                    return Err(GeometryError::GeneralPositionViolation {
                        obstacle: obstacle_id,
                        reason: format!("vertex of edge {ei} lies on the start-target segment"),
                    });
                }
                let s = poly.wrap_arc(poly.vertex_arc(ei) + u * poly.edge_len(ei));
                found.push((t, s));
            }
        }
    }
    found.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(found
        .into_iter()
        .map(|(_, s)| ArcPosition { obstacle_id, s })
        .collect())
}

/// Whether `obstacle_id` is an out-obstacle for the pair `(start, target)`:
/// neither endpoint lies inside or on its convex hull.
pub fn is_out_obstacle(
    start: Point,
    target: Point,
    obstacles: &[Polygon],
    obstacle_id: usize,
) -> Result<bool, GeometryError> {
    let poly = poly_at(obstacles, obstacle_id)?;
    let hull = convex_hull(poly.vertices());
    Ok(!point_in_convex_hull(start, &hull) && !point_in_convex_hull(target, &hull))
}

/// Fractions of the obstacle perimeter strictly left and strictly right of
/// the directed line `start -> target`, for an obstacle whose boundary
/// crosses the segment exactly twice. The two fractions sum to 1.
///
/// # Errors
/// [`GeometryError::UnsupportedTopology`] when the crossing count is not 2.
pub fn perimeter_split_fractions(
    start: Point,
    target: Point,
    obstacles: &[Polygon],
    obstacle_id: usize,
    tol: &Tolerances,
) -> Result<(f64, f64), GeometryError> {
    let crossings = m_line_crossings(start, target, obstacles, obstacle_id, tol)?;
    if crossings.len() != 2 {
        return Err(GeometryError::UnsupportedTopology {
            obstacle: obstacle_id,
            found: crossings.len(),
        });
    }
    let poly = poly_at(obstacles, obstacle_id)?;
    let p = poly.perimeter();
    let s1 = crossings[0].s;
    let s2 = crossings[1].s;
    let arc_fwd = poly.wrap_arc(s2 - s1); // ccw from first to second crossing
    let mid = poly.point_at_arc(s1 + 0.5 * arc_fwd);
    let side = (target - start).cross(mid - start);
    if side == 0.0 {
        return Err(GeometryError::GeneralPositionViolation {
            obstacle: obstacle_id,
            reason: "arc midpoint falls on the start-target line".to_string(),
        });
    }
    let left = if side > 0.0 { arc_fwd } else { p - arc_fwd };
    Ok((left / p, (p - left) / p))
}

/// Convex hull in CCW order (monotone chain); collinear boundary points are
/// dropped. Requires at least three non-collinear input points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether `p` lies inside or on the boundary of a CCW convex hull.
pub fn point_in_convex_hull(p: Point, hull: &[Point]) -> bool {
    if hull.len() < 3 {
        return false;
    }
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        if (b - a).cross(p - a) < 0.0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
        Polygon::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
        .unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::for_diameter(10.0)
    }

    #[test]
    fn arc_distances_complement_to_perimeter() {
        let obs = vec![square(0.0, 0.0, 1.0, 1.0)];
        let a = ArcPosition {
            obstacle_id: 0,
            s: 0.5,
        };
        let b = ArcPosition {
            obstacle_id: 0,
            s: 3.0,
        };
        let ccw = arc_distance(a, b, WalkDir::Ccw, &obs).unwrap();
        let cw = arc_distance(a, b, WalkDir::Cw, &obs).unwrap();
        assert!((ccw - 2.5).abs() < 1e-12);
        assert!((cw - 1.5).abs() < 1e-12);
        assert!((ccw + cw - 4.0).abs() < 1e-12);
        assert_eq!(arc_distance(a, a, WalkDir::Cw, &obs).unwrap(), 0.0);
    }

    #[test]
    fn mixed_obstacles_rejected() {
        let obs = vec![square(0.0, 0.0, 1.0, 1.0), square(2.0, 0.0, 3.0, 1.0)];
        let a = ArcPosition {
            obstacle_id: 0,
            s: 0.0,
        };
        let b = ArcPosition {
            obstacle_id: 1,
            s: 0.0,
        };
        assert!(matches!(
            arc_distance(a, b, WalkDir::Ccw, &obs),
            Err(GeometryError::MixedObstacles(0, 1))
        ));
    }

    #[test]
    fn edge_departure_side_test() {
        let obs = vec![square(0.0, 0.0, 1.0, 1.0)];
        // Mid-bottom edge: target below is free, above is blocked.
        let pos = ArcPosition {
            obstacle_id: 0,
            s: 0.5,
        };
        assert!(direction_to_target_free(pos, Point::new(0.5, -2.0), &obs, &tol()).unwrap());
        assert!(!direction_to_target_free(pos, Point::new(0.5, 2.0), &obs, &tol()).unwrap());
        // Along the edge: tangent, ambiguous.
        assert!(matches!(
            direction_to_target_free(pos, Point::new(3.0, 0.0), &obs, &tol()),
            Err(GeometryError::AmbiguousTangency { .. })
        ));
    }

    #[test]
    fn vertex_departure_wedge_test() {
        let obs = vec![square(0.0, 0.0, 1.0, 1.0)];
        // Corner (1,1) at arc 2.0.
        let pos = ArcPosition {
            obstacle_id: 0,
            s: 2.0,
        };
        // Up-and-right of the corner: free.
        assert!(direction_to_target_free(pos, Point::new(2.0, 3.0), &obs, &tol()).unwrap());
        // Up-and-left, past the top edge's extension: still free.
        assert!(direction_to_target_free(pos, Point::new(0.0, 2.0), &obs, &tol()).unwrap());
        // Straight up, continuing the right edge's line away from the
        // square: free, not a graze.
        assert!(direction_to_target_free(pos, Point::new(1.0, 5.0), &obs, &tol()).unwrap());
        // Into the square: blocked.
        assert!(!direction_to_target_free(pos, Point::new(0.25, 0.25), &obs, &tol()).unwrap());
        // Sliding along an incident edge (toward the corner below): ambiguous.
        assert!(matches!(
            direction_to_target_free(pos, Point::new(1.0, -5.0), &obs, &tol()),
            Err(GeometryError::AmbiguousTangency { .. })
        ));
    }

    #[test]
    fn argmin_on_square_faces_and_ties() {
        let obs = vec![square(0.0, 0.0, 1.0, 1.0)];
        let near_right = boundary_argmin_distance(0, Point::new(2.0, 0.5), &obs).unwrap();
        assert!((near_right.s - 1.5).abs() < 1e-12);
        let below = boundary_argmin_distance(0, Point::new(0.5, -5.0), &obs).unwrap();
        assert!((below.s - 0.5).abs() < 1e-12);
        let above = boundary_argmin_distance(0, Point::new(0.5, 2.0), &obs).unwrap();
        assert!((above.s - 2.5).abs() < 1e-12);
        // Center is equidistant from all faces; smallest arc wins.
        let center = boundary_argmin_distance(0, Point::new(0.5, 0.5), &obs).unwrap();
        assert!((center.s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn m_line_crossing_count_and_order() {
        let obs = vec![square(1.0, -1.0, 2.0, 1.0)];
        let xs = m_line_crossings(Point::new(0.0, 0.0), Point::new(3.0, 0.0), &obs, 0, &tol())
            .unwrap();
        assert_eq!(xs.len(), 2);
        let p0 = boundary_point_at(xs[0], &obs).unwrap();
        let p1 = boundary_point_at(xs[1], &obs).unwrap();
        assert!((p0.x - 1.0).abs() < 1e-12);
        assert!((p1.x - 2.0).abs() < 1e-12);
        // Segment ends before the obstacle: no crossings.
        let none = m_line_crossings(Point::new(0.0, 0.0), Point::new(0.5, 0.0), &obs, 0, &tol())
            .unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn m_line_through_vertex_is_a_violation() {
        let obs = vec![square(1.0, 0.0, 2.0, 1.0)];
        let result = m_line_crossings(Point::new(0.0, 0.0), Point::new(3.0, 0.0), &obs, 0, &tol());
        assert!(matches!(
            result,
            Err(GeometryError::GeneralPositionViolation { .. })
        ));
    }

    #[test]
    fn out_obstacle_classification() {
        let obs = vec![square(1.0, 1.0, 2.0, 2.0)];
        // Segment passes well away from the hull.
        assert!(is_out_obstacle(Point::new(0.0, 0.0), Point::new(3.0, 0.0), &obs, 0).unwrap());
        // Target on the hull boundary counts as belonging to it.
        assert!(!is_out_obstacle(Point::new(0.0, 0.0), Point::new(1.0, 1.5), &obs, 0).unwrap());
        // Target inside.
        assert!(!is_out_obstacle(Point::new(0.0, 0.0), Point::new(1.5, 1.5), &obs, 0).unwrap());
    }

    #[test]
    fn split_fractions_for_offset_crossing() {
        // Square of perimeter 4 crossed along y = 0.25: arc above (left of
        // the eastbound line) is 2.5, below is 1.5.
        let obs = vec![square(0.0, 0.0, 1.0, 1.0)];
        let (l, r) = perimeter_split_fractions(
            Point::new(-1.0, 0.25),
            Point::new(2.0, 0.25),
            &obs,
            0,
            &tol(),
        )
        .unwrap();
        assert!((l - 0.625).abs() < 1e-12);
        assert!((r - 0.375).abs() < 1e-12);
        assert!((l + r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn split_fractions_require_two_crossings() {
        let obs = vec![square(0.0, 0.0, 1.0, 1.0)];
        let result = perimeter_split_fractions(
            Point::new(-1.0, 5.0),
            Point::new(2.0, 5.0),
            &obs,
            0,
            &tol(),
        );
        assert!(matches!(
            result,
            Err(GeometryError::UnsupportedTopology {
                obstacle: 0,
                found: 0
            })
        ));
    }

    #[test]
    fn hull_of_concave_polygon() {
        // An arrowhead: hull drops the notch vertex.
        let poly = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(1.0, 0.5),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        let hull = convex_hull(poly.vertices());
        assert_eq!(hull.len(), 4);
        assert!(point_in_convex_hull(Point::new(1.0, 0.5), &hull));
        assert!(point_in_convex_hull(Point::new(1.0, 1.2), &hull));
        assert!(!point_in_convex_hull(Point::new(3.0, 1.0), &hull));
    }
}
