//! Swarm navigation with a full-survey front: the leading pair's two
//! agents explore each blocking obstacle in opposite directions while the
//! remaining pairs spread out along the boundary behind them, so that when
//! the explorers meet, some pair is already close to the best leave point.
//! The pair that reaches the leave point first becomes the new front.
//!
//! Timing model: flights, boundary walks, and explorer motion are exact;
//! only the follower-spreading phase is advanced with a fixed time step,
//! so measured times can differ from the ideal protocol by a bounded
//! multiple of the step size per event.

use crate::geometry::{
    boundary_argmin_distance, direction_to_target_free, first_hit, WalkDir,
};
use crate::scene::Scene;

use super::walk::{arc_after, lap_stops, min_arc, StopKind};
use super::{EventKind, RunCtx, SimConfig, SimError, SimResult, SimStatus, Trace, EVENT_CAP};

/// Runs the spread-and-survey swarm strategy. Agents operate in pairs, so
/// `cfg.n` must be even (and at least 2).
pub fn run_swarm_bug1(scene: &Scene, cfg: &SimConfig) -> Result<SimResult, SimError> {
    if cfg.n % 2 != 0 || cfg.n == 0 {
        return Err(SimError::OddSwarmSize(cfg.n));
    }
    let ctx = RunCtx::new(scene, cfg)?;
    let pairs = cfg.n / 2;
    // lag[k]: how far behind the front pair k runs, in time units. The
    // front pair itself always has lag zero.
    let mut lag = vec![0.0_f64; pairs];
    let mut front = 0usize;
    let mut t_front = 0.0_f64;
    let mut pos = scene.start;
    let mut pair_traces: Vec<Trace> = (0..pairs)
        .map(|k| {
            let mut tr = Trace::new(format!("p{k}"));
            tr.sample(0.0, scene.start);
            tr
        })
        .collect();
    let mut explorer_traces: Vec<Trace> = Vec::new();
    let mut events = 0usize;
    let mut visit = 0usize;
    let mut status = SimStatus::AllArrived;
    let mut t_f = None;
    let mut t_l = None;
    loop {
        if events >= EVENT_CAP {
            status = SimStatus::BudgetExceeded;
            break;
        }
        let to_target = ctx.scene.target.dist(pos);
        let hit = first_hit(pos, ctx.scene.target, &ctx.scene.obstacles, &ctx.tol)?
            .filter(|h| h.distance_traveled < to_target - ctx.tol.eps_geom);
        let Some(hit) = hit else {
            // Clear flight: pair k reaches the target `lag[k]` after the front.
            let t_arr = t_front + to_target;
            let max_lag = lag.iter().cloned().fold(0.0, f64::max);
            if t_arr + max_lag > ctx.budget {
                status = SimStatus::BudgetExceeded;
                if t_arr <= ctx.budget {
                    t_f = Some(t_arr);
                }
                break;
            }
            for (k, tr) in pair_traces.iter_mut().enumerate() {
                let t_k = t_arr + lag[k];
                tr.sample(t_k, ctx.scene.target);
                tr.event(t_k, EventKind::Arrive, ctx.scene.target, None);
            }
            t_f = Some(t_arr);
            t_l = Some(t_arr + max_lag);
            break;
        };
        let t_hit = t_front + hit.distance_traveled;
        if t_hit > ctx.budget {
            status = SimStatus::BudgetExceeded;
            break;
        }
        let oid = hit.position.obstacle_id;
        let poly = &ctx.scene.obstacles[oid];
        let p = poly.perimeter();
        let t_m = t_hit + p / 2.0;
        if t_m > ctx.budget {
            status = SimStatus::BudgetExceeded;
            break;
        }
        pair_traces[front].sample(t_hit, hit.point);
        pair_traces[front].event(t_hit, EventKind::Hit, hit.point, Some(oid));
        pair_traces[front].event(t_hit, EventKind::Split, hit.point, Some(oid));
        events += 2;
        // The front pair's agents survey opposite halves and meet at the
        // antipodal boundary point.
        let s_h = hit.position.s;
        let s_m = arc_after(poly, s_h, p / 2.0, WalkDir::Ccw);
        let m_pt = poly.point_at_arc(s_m);
        for dir in [WalkDir::Cw, WalkDir::Ccw] {
            let suffix = match dir {
                WalkDir::Cw => 'c',
                WalkDir::Ccw => 'w',
            };
            let mut tr = Trace::new(format!("e{visit}{suffix}"));
            tr.sample(t_hit, hit.point);
            for stop in lap_stops(poly, s_h, dir, &[], ctx.tol.eps_geom) {
                if stop.arc >= p / 2.0 - ctx.tol.eps_geom {
                    break;
                }
                if let StopKind::Vertex(vi) = stop.kind {
                    tr.sample(t_hit + stop.arc, poly.vertices()[vi]);
                }
            }
            tr.sample(t_m, m_pt);
            explorer_traces.push(tr);
        }
        pair_traces[front].event(t_m, EventKind::Meet, m_pt, Some(oid));
        events += 1;
        // Followers fly the same leg `lag` behind the front, then spread
        // out along the boundary until the explorers meet.
        let followers = follower_order(&lag, front);
        let spread = spread_followers(&ctx, &followers, &lag, t_hit, t_m, p);
        // Everyone reroutes to the boundary point closest to the target.
        let best = boundary_argmin_distance(oid, ctx.scene.target, &ctx.scene.obstacles)?;
        let l_pt = poly.point_at_arc(best.s);
        let h_arr: Vec<f64> = lag.iter().map(|l| t_hit + l).collect();
        let mut arrival = vec![0.0_f64; pairs];
        for k in 0..pairs {
            if k == front {
                arrival[k] = t_m + min_arc(poly, s_m, best.s);
                pair_traces[k].sample(t_m, m_pt);
            } else if h_arr[k] <= t_m {
                let side = followers.iter().find(|f| f.pair == k).expect("follower");
                let arc = spread[&k];
                let s_k = arc_after(poly, s_h, arc, side.dir);
                arrival[k] = t_m + min_arc(poly, s_k, best.s);
                pair_traces[k].sample(h_arr[k], hit.point);
                pair_traces[k].sample(t_m, poly.point_at_arc(s_k));
            } else {
                // Still in transit when the explorers meet: finish the
                // flight to the hit point, then take the shorter arc.
                arrival[k] = h_arr[k] + min_arc(poly, s_h, best.s);
                pair_traces[k].sample(h_arr[k], hit.point);
            }
        }
        if !direction_to_target_free(best, ctx.scene.target, &ctx.scene.obstacles, &ctx.tol)? {
            // Even the closest boundary point has no free shot at the
            // target, so no leave point exists anywhere on this boundary.
            for (k, tr) in pair_traces.iter_mut().enumerate() {
                if k != front && h_arr[k] > t_m {
                    continue;
                }
                tr.sample(arrival[k], l_pt);
            }
            status = SimStatus::TargetUnreachable;
            break;
        }
        let mut new_front = 0usize;
        for k in 1..pairs {
            if arrival[k] < arrival[new_front] {
                new_front = k;
            }
        }
        let t_leave = arrival[new_front];
        if t_leave > ctx.budget {
            status = SimStatus::BudgetExceeded;
            break;
        }
        for k in 0..pairs {
            pair_traces[k].sample(arrival[k], l_pt);
            lag[k] = arrival[k] - t_leave;
        }
        pair_traces[new_front].event(t_leave, EventKind::Leave, l_pt, Some(oid));
        events += 1;
        front = new_front;
        t_front = t_leave;
        pos = l_pt;
        visit += 1;
    }
    let mut traces = pair_traces;
    traces.extend(explorer_traces);
    Ok(SimResult {
        status,
        t_f,
        t_l,
        traces,
        metrics: ctx.metrics.clone(),
        warnings: Vec::new(),
    })
}

struct Follower {
    pair: usize,
    dir: WalkDir,
}

/// Follower pairs in arrival order (earliest first, ties by index),
/// assigned alternating boundary sides: first clockwise, second
/// counterclockwise, and so on.
fn follower_order(lag: &[f64], front: usize) -> Vec<Follower> {
    let mut order: Vec<usize> = (0..lag.len()).filter(|&k| k != front).collect();
    order.sort_by(|&a, &b| lag[a].total_cmp(&lag[b]).then(a.cmp(&b)));
    order
        .into_iter()
        .enumerate()
        .map(|(i, pair)| Follower {
            pair,
            dir: if i % 2 == 0 { WalkDir::Cw } else { WalkDir::Ccw },
        })
        .collect()
}

/// Advances the follower pairs from the hit time to the explorers' meet
/// time and returns each arrived pair's final arc distance from the hit
/// point along its own side.
///
/// Two regimes, switched once the last pair has reached the obstacle
/// (`t_all`): before it, arrived pairs chase their side's predecessor at
/// full speed; after it, a pair drives only while the gap to its
/// predecessor is at least the target spacing `2x/n` (where `x` is the
/// combined arc the two explorers have covered), standing still otherwise
/// so that the gaps open up to the target. Gaps never shrink, and the
/// explorers themselves move exactly.
fn spread_followers(
    ctx: &RunCtx,
    followers: &[Follower],
    lag: &[f64],
    t_hit: f64,
    t_m: f64,
    p: f64,
) -> std::collections::BTreeMap<usize, f64> {
    let n = lag.len() * 2; // agents
    let t_all = t_hit + lag.iter().cloned().fold(0.0, f64::max);
    // Chains per side, front-to-back (arrival order is preserved).
    let cw: Vec<&Follower> = followers.iter().filter(|f| f.dir == WalkDir::Cw).collect();
    let ccw: Vec<&Follower> = followers.iter().filter(|f| f.dir == WalkDir::Ccw).collect();
    let mut arc: std::collections::BTreeMap<usize, f64> =
        followers.iter().map(|f| (f.pair, 0.0)).collect();
    let mut t = t_hit;
    while t < t_m {
        let h = ctx.step.min(t_m - t);
        let t_next = t + h;
        let explorer_pos = (t_next - t_hit).min(p / 2.0);
        let target_gap = if t >= t_all {
            Some(4.0 * (t - t_hit) / n as f64)
        } else {
            None
        };
        for chain in [&cw, &ccw] {
            let mut pred_old = (t - t_hit).min(p / 2.0);
            let mut pred_new = explorer_pos;
            for f in chain.iter() {
                let cur = arc[&f.pair];
                let t_arr = t_hit + lag[f.pair];
                let drive_time = if t_arr >= t_next {
                    0.0
                } else {
                    let available = t_next - t_arr.max(t);
                    match target_gap {
                        // Spreading regime: stand still until the gap to
                        // the predecessor reaches the target spacing.
                        Some(g) => {
                            if pred_old - cur >= g - 1e-12 {
                                available
                            } else {
                                0.0
                            }
                        }
                        None => available,
                    }
                };
                let new = (cur + drive_time).min(pred_new);
                pred_old = cur;
                pred_new = new;
                arc.insert(f.pair, new);
            }
        }
        t = t_next;
    }
    arc
}
