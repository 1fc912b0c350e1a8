//! Shared boundary-walk plumbing: one-lap itineraries of vertices (and
//! optional extra waypoints) ordered by walking distance, plus arc
//! arithmetic in a chosen direction.

use crate::geometry::{Polygon, WalkDir};

/// A waypoint on a one-lap walk, measured by arc distance from the walk
/// start in the walk direction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LapStop {
    pub arc: f64,
    pub kind: StopKind,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum StopKind {
    Vertex(usize),
    /// Extra waypoint (e.g. a start-target-line crossing), carrying its
    /// arc coordinate on the polygon.
    Waypoint(f64),
}

/// Arc distance covered when walking from coordinate `from` to `to` in
/// direction `dir`; a zero offset stays zero (no full-lap wrap).
pub(crate) fn arc_along(poly: &Polygon, from: f64, to: f64, dir: WalkDir) -> f64 {
    let delta = match dir {
        WalkDir::Ccw => to - from,
        WalkDir::Cw => from - to,
    };
    if delta == 0.0 {
        0.0
    } else {
        poly.wrap_arc(delta)
    }
}

/// Shorter-way boundary distance between two arc coordinates.
pub(crate) fn min_arc(poly: &Polygon, a: f64, b: f64) -> f64 {
    let fwd = arc_along(poly, a, b, WalkDir::Ccw);
    fwd.min(poly.perimeter() - fwd).max(0.0)
}

/// Arc coordinate reached after walking `arc` from `from` in `dir`.
pub(crate) fn arc_after(poly: &Polygon, from: f64, arc: f64, dir: WalkDir) -> f64 {
    match dir {
        WalkDir::Ccw => poly.wrap_arc(from + arc),
        WalkDir::Cw => poly.wrap_arc(from - arc),
    }
}

/// Builds the itinerary for one full lap starting at arc coordinate
/// `s_from`: every vertex once, plus every waypoint in `extra` (given as
/// arc coordinates), sorted by walking distance. Stops closer than `eps`
/// to the start appear at the far end of the lap instead (distance `p`),
/// so the walk never begins with a zero-length hop.
pub(crate) fn lap_stops(poly: &Polygon, s_from: f64, dir: WalkDir, extra: &[f64], eps: f64) -> Vec<LapStop> {
    let p = poly.perimeter();
    let mut stops: Vec<LapStop> = Vec::with_capacity(poly.vertex_count() + extra.len());
    let place = |s: f64| -> f64 {
        let a = arc_along(poly, s_from, s, dir);
        if a <= eps {
            p
        } else {
            a
        }
    };
    for vi in 0..poly.vertex_count() {
        stops.push(LapStop {
            arc: place(poly.vertex_arc(vi)),
            kind: StopKind::Vertex(vi),
        });
    }
    for &s in extra {
        stops.push(LapStop {
            arc: place(s),
            kind: StopKind::Waypoint(s),
        });
    }
    stops.sort_by(|a, b| a.arc.total_cmp(&b.arc));
    stops
}
