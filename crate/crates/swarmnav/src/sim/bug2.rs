//! Line-guided navigation: agents commit to the straight line from start
//! to target, follow obstacle boundaries when blocked, and rejoin the line
//! only at crossings strictly closer to the target than where they hit.
//! The swarm variant splits in two at every contact (clockwise half takes
//! the lowest ids); a swarm of at least 2^(half the total crossing count)
//! agents never leaves a lone agent facing a direction choice.

use std::collections::BTreeMap;

use crate::geometry::{
    direction_to_target_free, first_hit, m_line_crossings, ArcPosition, WalkDir,
};
use crate::scene::Scene;

use super::walk::{lap_stops, StopKind};
use super::{EventKind, RunCtx, SimConfig, SimError, SimResult, SimStatus, Trace, EVENT_CAP};

/// Runs the line-guided strategy for a single agent (boundary walks always
/// counterclockwise).
pub fn run_bug2(scene: &Scene, cfg: &SimConfig) -> Result<SimResult, SimError> {
    if cfg.n != 1 {
        return Err(SimError::InvalidAgentCount(format!(
            "the single-agent line-guided runner takes n = 1, got {}",
            cfg.n
        )));
    }
    run_tree(scene, cfg, false)
}

/// Runs the line-guided strategy for a swarm that splits at every contact.
///
/// Requires `n >= 2^(total boundary crossings of the start-target line / 2)`
/// so that every direction choice is covered by a real split; smaller
/// swarms are rejected unless `cfg.allow_undersized` is set, in which case
/// lone agents default to counterclockwise and a warning is recorded.
pub fn run_swarm_bug2(scene: &Scene, cfg: &SimConfig) -> Result<SimResult, SimError> {
    let metrics = crate::scene::SceneMetrics::measure(scene)?;
    let half_crossings: u32 = metrics.m.iter().map(|&m| (m as u32) / 2).sum();
    let required = 1u128.checked_shl(half_crossings).unwrap_or(u128::MAX);
    if (cfg.n as u128) < required && !cfg.allow_undersized {
        return Err(SimError::SwarmTooSmall {
            required,
            provided: cfg.n,
        });
    }
    run_tree(scene, cfg, true)
}

struct TreeRun<'a> {
    ctx: RunCtx<'a>,
    /// Arc coordinates where the start-target segment crosses each
    /// obstacle boundary, computed once per obstacle on first contact.
    crossings: BTreeMap<usize, Vec<f64>>,
    traces: Vec<Trace>,
    first_arrival: Option<f64>,
    last_arrival: Option<f64>,
    all_arrived: bool,
    saw_budget: bool,
    saw_unreachable: bool,
    warned_lone_agent: bool,
    events: usize,
    swarm: bool,
}

fn run_tree(scene: &Scene, cfg: &SimConfig, swarm: bool) -> Result<SimResult, SimError> {
    let mut run = TreeRun {
        ctx: RunCtx::new(scene, cfg)?,
        crossings: BTreeMap::new(),
        traces: Vec::new(),
        first_arrival: None,
        last_arrival: None,
        all_arrived: true,
        saw_budget: false,
        saw_unreachable: false,
        warned_lone_agent: false,
        events: 0,
        swarm,
    };
    let root = Node {
        id: "g".to_string(),
        size: cfg.n,
        t: 0.0,
        pos: scene.start,
    };
    let mut trace = Trace::new(root.id.clone());
    trace.sample(0.0, scene.start);
    drive_node(&mut run, root, trace)?;
    let status = if run.saw_budget {
        SimStatus::BudgetExceeded
    } else if run.saw_unreachable {
        SimStatus::TargetUnreachable
    } else {
        SimStatus::AllArrived
    };
    let t_l = if run.all_arrived && status == SimStatus::AllArrived {
        run.last_arrival
    } else {
        None
    };
    let mut warnings = Vec::new();
    if run.warned_lone_agent {
        warnings.push(
            "a lone agent had to pick a boundary direction (swarm too small to split); \
             it defaulted to counterclockwise"
                .to_string(),
        );
    }
    Ok(SimResult {
        status,
        t_f: run.first_arrival,
        t_l,
        traces: run.traces,
        metrics: run.ctx.metrics.clone(),
        warnings,
    })
}

struct Node {
    id: String,
    size: usize,
    t: f64,
    pos: crate::geometry::Point,
}

/// Simulates one group until it arrives, fails, or splits (recursing on
/// the children, clockwise first).
fn drive_node(run: &mut TreeRun, mut node: Node, mut trace: Trace) -> Result<(), SimError> {
    loop {
        if run.events >= EVENT_CAP {
            run.saw_budget = true;
            run.all_arrived = false;
            break;
        }
        let to_target = run.ctx.scene.target.dist(node.pos);
        let hit = first_hit(
            node.pos,
            run.ctx.scene.target,
            &run.ctx.scene.obstacles,
            &run.ctx.tol,
        )?
        .filter(|h| h.distance_traveled < to_target - run.ctx.tol.eps_geom);
        let Some(hit) = hit else {
            let t_arr = node.t + to_target;
            if t_arr > run.ctx.budget {
                run.saw_budget = true;
                run.all_arrived = false;
                break;
            }
            trace.sample(t_arr, run.ctx.scene.target);
            trace.event(t_arr, EventKind::Arrive, run.ctx.scene.target, None);
            run.events += 1;
            run.first_arrival = Some(run.first_arrival.map_or(t_arr, |v| v.min(t_arr)));
            run.last_arrival = Some(run.last_arrival.map_or(t_arr, |v| v.max(t_arr)));
            break;
        };
        let t_hit = node.t + hit.distance_traveled;
        if t_hit > run.ctx.budget {
            run.saw_budget = true;
            run.all_arrived = false;
            break;
        }
        let oid = hit.position.obstacle_id;
        trace.sample(t_hit, hit.point);
        trace.event(t_hit, EventKind::Hit, hit.point, Some(oid));
        run.events += 1;
        if !run.crossings.contains_key(&oid) {
            let xs = m_line_crossings(
                run.ctx.scene.start,
                run.ctx.scene.target,
                &run.ctx.scene.obstacles,
                oid,
                &run.ctx.tol,
            )?;
            run.crossings.insert(oid, xs.into_iter().map(|x| x.s).collect());
        }
        if node.size >= 2 && run.swarm {
            trace.event(t_hit, EventKind::Split, hit.point, Some(oid));
            run.events += 1;
            run.traces.push(trace);
            let cw_size = node.size / 2 + node.size % 2;
            let children = [
                (WalkDir::Cw, cw_size, format!("{}c", node.id)),
                (WalkDir::Ccw, node.size - cw_size, format!("{}w", node.id)),
            ];
            for (dir, size, id) in children {
                let mut child = Node {
                    id,
                    size,
                    t: t_hit,
                    pos: hit.point,
                };
                let mut child_trace = Trace::new(child.id.clone());
                child_trace.sample(t_hit, hit.point);
                match walk_to_crossing(run, hit.position, hit.point, t_hit, dir, &mut child_trace)?
                {
                    WalkEnd::Leave { t, point } => {
                        child.t = t;
                        child.pos = point;
                        drive_node(run, child, child_trace)?;
                    }
                    WalkEnd::Failed => run.traces.push(child_trace),
                }
            }
            return Ok(());
        }
        // A lone agent cannot split; it always walks counterclockwise.
        if run.swarm && node.size == 1 {
            run.warned_lone_agent = true;
        }
        match walk_to_crossing(run, hit.position, hit.point, t_hit, WalkDir::Ccw, &mut trace)? {
            WalkEnd::Leave { t, point } => {
                node.t = t;
                node.pos = point;
            }
            WalkEnd::Failed => break,
        }
    }
    run.traces.push(trace);
    Ok(())
}

enum WalkEnd {
    Leave { t: f64, point: crate::geometry::Point },
    /// Budget ran out or the lap closed without a usable crossing; the
    /// failure kind has already been recorded on the run.
    Failed,
}

/// Walks the boundary from the hit until reaching a start-target-line
/// crossing that is strictly closer to the target than the hit was and
/// from which the target direction is locally free.
fn walk_to_crossing(
    run: &mut TreeRun,
    from: ArcPosition,
    hit_point: crate::geometry::Point,
    t_hit: f64,
    dir: WalkDir,
    trace: &mut Trace,
) -> Result<WalkEnd, SimError> {
    let poly = &run.ctx.scene.obstacles[from.obstacle_id];
    let hit_dist = hit_point.dist(run.ctx.scene.target);
    let waypoints = run.crossings.get(&from.obstacle_id).cloned().unwrap_or_default();
    for stop in lap_stops(poly, from.s, dir, &waypoints, run.ctx.tol.eps_geom) {
        let t = t_hit + stop.arc;
        if t > run.ctx.budget {
            run.saw_budget = true;
            run.all_arrived = false;
            return Ok(WalkEnd::Failed);
        }
        match stop.kind {
            StopKind::Vertex(vi) => trace.sample(t, poly.vertices()[vi]),
            StopKind::Waypoint(s) => {
                let point = poly.point_at_arc(s);
                if point.dist(run.ctx.scene.target) >= hit_dist - run.ctx.tol.eps_geom {
                    continue;
                }
                let pos = ArcPosition {
                    obstacle_id: from.obstacle_id,
                    s,
                };
                if !direction_to_target_free(
                    pos,
                    run.ctx.scene.target,
                    &run.ctx.scene.obstacles,
                    &run.ctx.tol,
                )? {
                    continue;
                }
                trace.sample(t, point);
                trace.event(t, EventKind::Leave, point, Some(from.obstacle_id));
                run.events += 1;
                return Ok(WalkEnd::Leave { t, point });
            }
        }
    }
    // Full lap with no usable crossing: no route to the target exists
    // along this strategy.
    run.saw_unreachable = true;
    run.all_arrived = false;
    Ok(WalkEnd::Failed)
}
