//! Single-agent navigation with full boundary survey: on contact the agent
//! walks one complete counterclockwise lap, notes the boundary point
//! closest to the target, returns to it along the shorter arc, and leaves
//! from there. Guaranteed to terminate: either the closest point admits a
//! free direction to the target, or no path exists at all.

use crate::geometry::{
    boundary_argmin_distance, direction_to_target_free, first_hit, WalkDir,
};
use crate::scene::Scene;

use super::walk::{arc_along, lap_stops, StopKind};
use super::{EventKind, RunCtx, SimConfig, SimError, SimResult, SimStatus, Trace, EVENT_CAP};

/// Runs the full-survey strategy for a single agent.
pub fn run_bug1(scene: &Scene, cfg: &SimConfig) -> Result<SimResult, SimError> {
    if cfg.n != 1 {
        return Err(SimError::InvalidAgentCount(format!(
            "the full-survey runner is single-agent only, got n = {}",
            cfg.n
        )));
    }
    let ctx = RunCtx::new(scene, cfg)?;
    let mut trace = Trace::new("g".to_string());
    trace.sample(0.0, scene.start);
    let mut t = 0.0_f64;
    let mut pos = scene.start;
    let mut events = 0usize;
    let mut status = SimStatus::AllArrived;
    let mut arrival = None;
    loop {
        if events >= EVENT_CAP {
            status = SimStatus::BudgetExceeded;
            break;
        }
        let to_target = ctx.scene.target.dist(pos);
        let hit = first_hit(pos, ctx.scene.target, &ctx.scene.obstacles, &ctx.tol)?
            .filter(|h| h.distance_traveled < to_target - ctx.tol.eps_geom);
        let Some(hit) = hit else {
            let t_arr = t + to_target;
            if t_arr > ctx.budget {
                status = SimStatus::BudgetExceeded;
                break;
            }
            trace.sample(t_arr, ctx.scene.target);
            trace.event(t_arr, EventKind::Arrive, ctx.scene.target, None);
            arrival = Some(t_arr);
            break;
        };
        let t_hit = t + hit.distance_traveled;
        if t_hit > ctx.budget {
            status = SimStatus::BudgetExceeded;
            break;
        }
        let oid = hit.position.obstacle_id;
        let poly = &ctx.scene.obstacles[oid];
        let p = poly.perimeter();
        trace.sample(t_hit, hit.point);
        trace.event(t_hit, EventKind::Hit, hit.point, Some(oid));
        events += 1;
        // Survey lap: a full counterclockwise circuit back to the hit point.
        if t_hit + p > ctx.budget {
            status = SimStatus::BudgetExceeded;
            break;
        }
        for stop in lap_stops(poly, hit.position.s, WalkDir::Ccw, &[], ctx.tol.eps_geom) {
            if let StopKind::Vertex(vi) = stop.kind {
                trace.sample(t_hit + stop.arc, poly.vertices()[vi]);
            }
        }
        let t_back = t_hit + p;
        trace.sample(t_back, hit.point);
        // Return to the closest point along the shorter arc (ties go
        // counterclockwise so reruns are deterministic).
        let best = boundary_argmin_distance(oid, ctx.scene.target, &ctx.scene.obstacles)?;
        let ccw_arc = arc_along(poly, hit.position.s, best.s, WalkDir::Ccw);
        let ret_dir = if ccw_arc <= p - ccw_arc {
            WalkDir::Ccw
        } else {
            WalkDir::Cw
        };
        let ret_len = match ret_dir {
            WalkDir::Ccw => ccw_arc,
            WalkDir::Cw => p - ccw_arc,
        };
        let t_leave = t_back + ret_len;
        if t_leave > ctx.budget {
            status = SimStatus::BudgetExceeded;
            break;
        }
        for stop in lap_stops(poly, hit.position.s, ret_dir, &[], ctx.tol.eps_geom) {
            if stop.arc >= ret_len - ctx.tol.eps_geom {
                break;
            }
            if let StopKind::Vertex(vi) = stop.kind {
                trace.sample(t_back + stop.arc, poly.vertices()[vi]);
            }
        }
        let leave_point = poly.point_at_arc(best.s);
        trace.sample(t_leave, leave_point);
        if !direction_to_target_free(best, ctx.scene.target, &ctx.scene.obstacles, &ctx.tol)? {
            // Even the globally closest boundary point is blocked: the
            // target cannot be reached from anywhere on this boundary.
            status = SimStatus::TargetUnreachable;
            break;
        }
        trace.event(t_leave, EventKind::Leave, leave_point, Some(oid));
        events += 1;
        t = t_leave;
        pos = leave_point;
    }
    let traces = vec![trace];
    let (t_f, t_l) = match arrival {
        Some(a) => (Some(a), Some(a)),
        None => (None, None),
    };
    Ok(SimResult {
        status,
        t_f,
        t_l,
        traces,
        metrics: ctx.metrics.clone(),
        warnings: Vec::new(),
    })
}
