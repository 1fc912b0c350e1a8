use serde::{Deserialize, Serialize};

use super::{GeometryError, Point};

/// A simple polygon with counterclockwise vertex order, so the interior lies
/// to the left of every directed edge. The last vertex connects implicitly
/// back to the first.
///
/// Construction normalizes clockwise input to counterclockwise and rejects
/// degenerate input (fewer than 3 vertices, zero-length edges, zero area,
/// self-intersection, non-finite coordinates).
///
/// Serialized as a plain vertex list `[[x, y], ...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Polygon {
    vertices: Vec<Point>,
    /// cum[i] = arc length from vertex 0 to vertex i along the boundary;
    /// cum[n] = perimeter.
    cum: Vec<f64>,
}

/// A point on an obstacle boundary addressed by obstacle id and arc length
/// from vertex 0 along the counterclockwise boundary. `s` wraps modulo the
/// perimeter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcPosition {
    pub obstacle_id: usize,
    pub s: f64,
}

/// Result of a ray/segment contact with an obstacle boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub position: ArcPosition,
    pub point: Point,
    pub distance_traveled: f64,
}

impl Polygon {
    /// Builds a polygon from a vertex loop, reversing clockwise input.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(GeometryError::NonFiniteCoordinate(i));
            }
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            if a == b {
                return Err(GeometryError::DegenerateEdge(i));
            }
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(GeometryError::ZeroArea);
        }
        if area < 0.0 {
            vertices.reverse();
        }
        check_simple(&vertices)?;

        let mut cum = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        for i in 0..n {
            acc += vertices[i].dist(vertices[(i + 1) % n]);
            cum.push(acc);
        }
        Ok(Polygon { vertices, cum })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Sum of Euclidean edge lengths; strictly positive.
    pub fn perimeter(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// Directed edge `i`: from vertex `i` to vertex `i + 1 (mod n)`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edge_len(&self, i: usize) -> f64 {
        self.cum[i + 1] - self.cum[i]
    }

    /// Arc length from vertex 0 to vertex `i`.
    pub fn vertex_arc(&self, i: usize) -> f64 {
        self.cum[i % self.vertices.len()]
    }

    /// Normalizes an arc length into `[0, perimeter)`.
    pub fn wrap_arc(&self, s: f64) -> f64 {
        let p = self.perimeter();
        let r = s.rem_euclid(p);
        // rem_euclid can return exactly p for tiny negative inputs.
        if r >= p {
            0.0
        } else {
            r
        }
    }

    /// The edge containing arc position `s`, and the distance along it.
    /// At a vertex the following edge is reported (distance 0).
    pub fn locate_arc(&self, s: f64) -> (usize, f64) {
        let s = self.wrap_arc(s);
        // cum is sorted; find the last index with cum[i] <= s.
        let mut i = match self
            .cum
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        if i >= self.vertices.len() {
            i = self.vertices.len() - 1;
        }
        (i, s - self.cum[i])
    }

    /// The boundary point at arc length `s` (mod perimeter) from vertex 0.
    pub fn point_at_arc(&self, s: f64) -> Point {
        let (i, d) = self.locate_arc(s);
        let (a, b) = self.edge(i);
        let len = self.edge_len(i);
        a.lerp(b, d / len)
    }

    /// Vertex index nearest to arc position `s`, if `s` lies within
    /// `eps` of that vertex along the boundary.
    pub fn vertex_near_arc(&self, s: f64, eps: f64) -> Option<usize> {
        let s = self.wrap_arc(s);
        let p = self.perimeter();
        let n = self.vertices.len();
        for i in 0..n {
            let d = (s - self.cum[i]).abs();
            if d <= eps || (p - d) <= eps {
                return Some(i);
            }
        }
        None
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Even-odd containment test. Points on the boundary are not reliably
    /// classified; use [`Polygon::distance_to_boundary`] to detect those.
    pub fn contains(&self, p: Point) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[j];
            if (a.y > p.y) != (b.y > p.y) {
                let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// Euclidean distance from `p` to the nearest boundary point.
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        self.closest_boundary_point(p).1
    }

    /// Closest boundary point to `p` as (arc position, distance).
    /// Ties are broken toward the smallest arc position.
    pub fn closest_boundary_point(&self, p: Point) -> (f64, f64) {
        let n = self.vertices.len();
        let mut best_s = 0.0;
        let mut best_d = f64::INFINITY;
        for i in 0..n {
            let (a, b) = self.edge(i);
            let e = b - a;
            let len = self.edge_len(i);
            let t = ((p - a).dot(e) / e.norm_sq()).clamp(0.0, 1.0);
            let q = a.lerp(b, t);
            let d = p.dist(q);
            let s = self.wrap_arc(self.cum[i] + t * len);
            if d < best_d || (d == best_d && s < best_s) {
                best_d = d;
                best_s = s;
            }
        }
        (best_s, best_d)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            if (b - a).cross(c - b) < 0.0 {
                return false;
            }
        }
        true
    }

    /// Axis-aligned bounding box as (min, max) corners.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }
}

impl TryFrom<Vec<Point>> for Polygon {
    type Error = GeometryError;
    fn try_from(vertices: Vec<Point>) -> Result<Self, Self::Error> {
        Polygon::new(vertices)
    }
}

impl From<Polygon> for Vec<Point> {
    fn from(poly: Polygon) -> Self {
        poly.vertices
    }
}

fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        acc += a.cross(b);
    }
    acc / 2.0
}

/// Rejects any contact between non-adjacent edges and any improper contact
/// between adjacent ones (exact arithmetic; a shared endpoint is the only
/// contact adjacent edges may have).
fn check_simple(vertices: &[Point]) -> Result<(), GeometryError> {
    let n = vertices.len();
    for i in 0..n {
        let (a1, a2) = (vertices[i], vertices[(i + 1) % n]);
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (b1, b2) = (vertices[j], vertices[(j + 1) % n]);
            if adjacent {
                // Shared endpoint aside, adjacent edges must not touch:
                // the far endpoint of one may not lie on the other.
                let (shared, a_far, b_far) = if j == i + 1 {
                    (a2, a1, b2)
                } else {
                    (a1, a2, b1)
                };
                if point_on_segment(a_far, b1, b2) && a_far != shared {
                    return Err(GeometryError::SelfIntersecting(i, j));
                }
                if point_on_segment(b_far, a1, a2) && b_far != shared {
                    return Err(GeometryError::SelfIntersecting(i, j));
                }
            } else if segments_touch(a1, a2, b1, b2) {
                return Err(GeometryError::SelfIntersecting(i, j));
            }
        }
    }
    Ok(())
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn point_on_segment(p: Point, a: Point, b: Point) -> bool {
    if orient(a, b, p) != 0.0 {
        return false;
    }
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Whether closed segments [a1,a2] and [b1,b2] share any point.
fn segments_touch(a1: Point, a2: Point, b1: Point, b2: Point) -> bool {
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && point_on_segment(a1, b1, b2))
        || (d2 == 0.0 && point_on_segment(a2, b1, b2))
        || (d3 == 0.0 && point_on_segment(b1, a1, a2))
        || (d4 == 0.0 && point_on_segment(b2, a1, a2))
}
