use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::intersect::segment_free;
use super::{Point, Polygon, Tolerances};

/// Heap entry ordered by smallest estimate first.
struct QueueItem {
    est: f64,
    node: usize,
}

impl PartialEq for QueueItem {
    fn eq(&self, other: &Self) -> bool {
        self.est == other.est && self.node == other.node
    }
}
impl Eq for QueueItem {}
impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed so the max-heap pops the smallest estimate; estimates are
        // finite by construction. Ties break on the node index so the pop
        // order is deterministic.
        other
            .est
            .partial_cmp(&self.est)
            .unwrap()
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Length of the shortest obstacle-avoiding path from `start` to `target`,
/// or `None` when no such path exists.
///
/// The search runs A* over the visibility graph spanned by `start`,
/// `target`, and the convex obstacle vertices (a taut path never turns at a
/// reflex vertex, so dropping those preserves both length and
/// reachability). Edges are discovered lazily when a node is expanded,
/// which keeps large scenes cheap: only nodes actually reached pay for
/// visibility tests.
pub fn shortest_path_length(
    start: Point,
    target: Point,
    obstacles: &[Polygon],
    tol: &Tolerances,
) -> Option<f64> {
    if segment_free(start, target, obstacles, tol) {
        return Some(start.dist(target));
    }
    let mut nodes: Vec<Point> = Vec::with_capacity(
        2 + obstacles.iter().map(|p| p.vertex_count()).sum::<usize>(),
    );
    nodes.push(start);
    nodes.push(target);
    for poly in obstacles {
        let vs = poly.vertices();
        let n = vs.len();
        for i in 0..n {
            let prev = vs[(i + n - 1) % n];
            let next = vs[(i + 1) % n];
            // Vertices are stored counter-clockwise, so a left turn means
            // the obstacle is locally convex there.
            if (vs[i] - prev).cross(next - vs[i]) > 0.0 {
                nodes.push(vs[i]);
            }
        }
    }
    let n = nodes.len();
    let mut best = vec![f64::INFINITY; n];
    let mut expanded = vec![false; n];
    best[0] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(QueueItem {
        est: start.dist(target),
        node: 0,
    });
    while let Some(QueueItem { node, .. }) = heap.pop() {
        if expanded[node] {
            continue;
        }
        expanded[node] = true;
        if node == 1 {
            return Some(best[1]);
        }
        for next in 0..n {
            if expanded[next] || next == node {
                continue;
            }
            let w = nodes[node].dist(nodes[next]);
            let cand = best[node] + w;
            if cand >= best[next] {
                continue;
            }
            if segment_free(nodes[node], nodes[next], obstacles, tol) {
                best[next] = cand;
                heap.push(QueueItem {
                    est: cand + nodes[next].dist(target),
                    node: next,
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::for_diameter(20.0)
    }

    #[test]
    fn empty_scene_is_straight_line() {
        let d = shortest_path_length(Point::new(0.0, 0.0), Point::new(3.0, 4.0), &[], &tol());
        assert_eq!(d, Some(5.0));
    }

    #[test]
    fn detour_around_a_square() {
        // Unit-height wall centered on the straight line: the shortest path
        // goes through a corner.
        let wall = Polygon::new(vec![
            Point::new(1.0, -1.0),
            Point::new(2.0, -1.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
        ])
        .unwrap();
        let d = shortest_path_length(
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            &[wall],
            &tol(),
        )
        .unwrap();
        // Through (1,1) and (2,1): sqrt(2) + 1 + sqrt(2).
        let expect = 1.0 + 2.0 * 2.0_f64.sqrt();
        assert!((d - expect).abs() < 1e-12, "got {d}, want {expect}");
    }

    #[test]
    fn reflex_pocket_does_not_shorten_the_path() {
        // A U-shaped pocket opening away from the route: the reflex mouth
        // corners must not be treated as path corners, and the answer must
        // match the hull detour.
        let pocket = Polygon::new(vec![
            Point::new(1.0, -1.0),
            Point::new(2.0, -1.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.4),
            Point::new(1.6, 0.4),
            Point::new(1.6, -0.4),
            Point::new(1.0, -0.4),
        ])
        .unwrap();
        let d = shortest_path_length(
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            &[pocket],
            &tol(),
        )
        .unwrap();
        let expect = 1.0 + 2.0 * 2.0_f64.sqrt();
        assert!((d - expect).abs() < 1e-12, "got {d}, want {expect}");
    }

    #[test]
    fn sealed_target_is_unreachable() {
        let box_around_target = Polygon::new(vec![
            Point::new(4.0, -2.0),
            Point::new(8.0, -2.0),
            Point::new(8.0, 2.0),
            Point::new(4.0, 2.0),
        ])
        .unwrap();
        let d = shortest_path_length(
            Point::new(0.0, 0.0),
            Point::new(6.0, 0.0),
            &[box_around_target],
            &tol(),
        );
        assert_eq!(d, None);
    }
}
