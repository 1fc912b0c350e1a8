//! Split-at-hit navigation with local leave points: groups head straight
//! for the target, split in two at every obstacle contact, follow the
//! boundary until the target direction stops being blocked by the current
//! obstacle, and repeat. No memory beyond the cycle-detection history, so
//! the strategy can loop forever; a revisited hit state ends the run with
//! a non-halting verdict.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{direction_to_target_free, first_hit, ArcPosition, Point, WalkDir};
use crate::scene::Scene;

use super::walk::{lap_stops, StopKind};
use super::{EventKind, RunCtx, SimConfig, SimError, SimResult, SimStatus, Trace, EVENT_CAP};

/// Single-agent variant: exactly [`run_swarm_com`] with one agent.
pub fn run_com(scene: &Scene, cfg: &SimConfig) -> Result<SimResult, SimError> {
    if cfg.n != 1 {
        return Err(SimError::InvalidAgentCount(format!(
            "the single-agent runner takes n = 1, got {}",
            cfg.n
        )));
    }
    run_swarm_com(scene, cfg)
}

/// Runs the split-at-hit strategy for `cfg.n` agents.
pub fn run_swarm_com(scene: &Scene, cfg: &SimConfig) -> Result<SimResult, SimError> {
    let ctx = RunCtx::new(scene, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut out = Outcome::default();
    let root = GroupTask {
        id: "g".to_string(),
        size: cfg.n,
        t: 0.0,
        pos: scene.start,
        history: Vec::new(),
    };
    let mut trace = Trace::new(root.id.clone());
    trace.sample(0.0, scene.start);
    drive_group(&ctx, root, trace, &mut rng, &mut out)?;
    let status = if out.saw_cycle {
        SimStatus::NonhaltingCycle
    } else if out.saw_budget {
        SimStatus::BudgetExceeded
    } else {
        SimStatus::AllArrived
    };
    let t_l = if status == SimStatus::AllArrived {
        out.last_arrival
    } else {
        None
    };
    Ok(SimResult {
        status,
        t_f: out.first_arrival,
        t_l,
        traces: out.traces,
        metrics: ctx.metrics.clone(),
        warnings: Vec::new(),
    })
}

#[derive(Default)]
struct Outcome {
    traces: Vec<Trace>,
    first_arrival: Option<f64>,
    last_arrival: Option<f64>,
    saw_cycle: bool,
    saw_budget: bool,
    events: usize,
}

impl Outcome {
    fn arrived(&mut self, t: f64) {
        self.first_arrival = Some(self.first_arrival.map_or(t, |v| v.min(t)));
        self.last_arrival = Some(self.last_arrival.map_or(t, |v| v.max(t)));
    }
}

/// A hit state: revisiting one of these with the same approach direction
/// proves the group is in a loop.
#[derive(Clone, Copy)]
struct HitRecord {
    obstacle: usize,
    point: Point,
    dir: Point,
}

#[derive(Clone)]
struct GroupTask {
    id: String,
    size: usize,
    t: f64,
    pos: Point,
    /// Hit states of this lineage, inherited across splits.
    history: Vec<HitRecord>,
}

/// Simulates one group to termination, recursing at splits. The clockwise
/// child runs first, so singleton direction draws happen in a fixed
/// depth-first order regardless of timing.
fn drive_group(
    ctx: &RunCtx,
    mut task: GroupTask,
    mut trace: Trace,
    rng: &mut ChaCha8Rng,
    out: &mut Outcome,
) -> Result<(), SimError> {
    loop {
        if out.events >= EVENT_CAP {
            out.saw_budget = true;
            break;
        }
        let to_target = ctx.scene.target.dist(task.pos);
        let hit = first_hit(task.pos, ctx.scene.target, &ctx.scene.obstacles, &ctx.tol)?
            // Contact at (or numerically past) the target means the target
            // itself sits on that boundary; the flight still arrives.
            .filter(|h| h.distance_traveled < to_target - ctx.tol.eps_geom);
        let Some(hit) = hit else {
            let t_arr = task.t + to_target;
            if t_arr > ctx.budget {
                out.saw_budget = true;
                break;
            }
            trace.sample(t_arr, ctx.scene.target);
            trace.event(t_arr, EventKind::Arrive, ctx.scene.target, None);
            out.events += 1;
            out.arrived(t_arr);
            break;
        };
        let t_hit = task.t + hit.distance_traveled;
        if t_hit > ctx.budget {
            out.saw_budget = true;
            break;
        }
        let oid = hit.position.obstacle_id;
        trace.sample(t_hit, hit.point);
        trace.event(t_hit, EventKind::Hit, hit.point, Some(oid));
        out.events += 1;
        let dir = (ctx.scene.target - task.pos).normalized();
        let repeat = task.history.iter().any(|r| {
            r.obstacle == oid
                && r.point.dist(hit.point) <= ctx.tol.eps_geom
                && r.dir.cross(dir).abs() <= 1e-9
                && r.dir.dot(dir) > 0.0
        });
        if repeat {
            out.saw_cycle = true;
            break;
        }
        task.history.push(HitRecord {
            obstacle: oid,
            point: hit.point,
            dir,
        });
        task.t = t_hit;
        if task.size == 1 {
            // A singleton cannot split; it draws its walking direction.
            let walk_dir = if rng.gen::<bool>() {
                WalkDir::Cw
            } else {
                WalkDir::Ccw
            };
            match walk_until_free(ctx, hit.position, t_hit, walk_dir, &mut trace, out)? {
                WalkEnd::Leave { t, point } => {
                    task.t = t;
                    task.pos = point;
                    continue;
                }
                WalkEnd::Stuck => {
                    out.saw_budget = true;
                    break;
                }
            }
        }
        // Split: lowest agent ids go clockwise, sizes ceil/floor.
        trace.event(t_hit, EventKind::Split, hit.point, Some(oid));
        out.events += 1;
        out.traces.push(trace);
        let cw_size = task.size / 2 + task.size % 2;
        let children = [
            (WalkDir::Cw, cw_size, format!("{}c", task.id)),
            (WalkDir::Ccw, task.size - cw_size, format!("{}w", task.id)),
        ];
        for (walk_dir, size, id) in children {
            let mut child = GroupTask {
                id,
                size,
                t: t_hit,
                pos: hit.point,
                history: task.history.clone(),
            };
            let mut child_trace = Trace::new(child.id.clone());
            child_trace.sample(t_hit, hit.point);
            match walk_until_free(ctx, hit.position, t_hit, walk_dir, &mut child_trace, out)? {
                WalkEnd::Leave { t, point } => {
                    child.t = t;
                    child.pos = point;
                    drive_group(ctx, child, child_trace, rng, out)?;
                }
                WalkEnd::Stuck => {
                    out.saw_budget = true;
                    out.traces.push(child_trace);
                }
            }
        }
        return Ok(());
    }
    out.traces.push(trace);
    Ok(())
}

enum WalkEnd {
    Leave { t: f64, point: Point },
    /// No leave before the lap closed or the budget ran out: the group
    /// would circle this boundary forever.
    Stuck,
}

/// Walks the boundary from the hit position until the straight direction
/// to the target stops being blocked by this obstacle. Freeness only
/// changes at vertices (along an edge the target stays on one fixed side
/// of the edge line), so vertices are the only leave candidates.
fn walk_until_free(
    ctx: &RunCtx,
    from: ArcPosition,
    t_hit: f64,
    dir: WalkDir,
    trace: &mut Trace,
    out: &mut Outcome,
) -> Result<WalkEnd, SimError> {
    let poly = &ctx.scene.obstacles[from.obstacle_id];
    for stop in lap_stops(poly, from.s, dir, &[], ctx.tol.eps_geom) {
        let StopKind::Vertex(vi) = stop.kind else {
            continue;
        };
        let t = t_hit + stop.arc;
        let v_point = poly.vertices()[vi];
        if t > ctx.budget {
            return Ok(WalkEnd::Stuck);
        }
        trace.sample(t, v_point);
        let pos = ArcPosition {
            obstacle_id: from.obstacle_id,
            s: poly.vertex_arc(vi),
        };
        if direction_to_target_free(pos, ctx.scene.target, &ctx.scene.obstacles, &ctx.tol)? {
            trace.event(t, EventKind::Leave, v_point, Some(from.obstacle_id));
            out.events += 1;
            return Ok(WalkEnd::Leave { t, point: v_point });
        }
    }
    Ok(WalkEnd::Stuck)
}
