//! Acceptance suite: ten end-to-end checks, one test (and one pass/fail
//! line) per criterion.
//!
//! The criteria pin the worst-case travel-time floors and ceilings on the
//! constructed scenes, the non-halting trap, the randomized bound sweeps,
//! the visit-each-obstacle-once property, the convergence of the paired
//! swarm's bound toward the half-perimeter limit, the geometry oracle
//! agreement, and byte determinism of repeated runs.
//!
//! Expensive run batches are shared between criteria through lazily
//! initialized statics; each batch records its own wall-clock cost so the
//! owning criterion can assert its runtime budget no matter which test
//! touched the static first.

mod support;

use std::collections::BTreeMap;
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use swarmnav::bounds::{
    self, comb_scene_lower, min_agents_swarmbug2, out_obstacle_upper, swarmbug1_last_slack,
    swarmbug1_upper, swarmbug2_slowest_upper, universal_lower, SLACK_PER_EVENT,
};
use swarmnav::scene::{
    gen_com_trap, gen_comb, gen_doubleback, gen_long_wall, gen_random, Scene,
};
use swarmnav::sim::{Algorithm, EventKind, SimConfig, SimResult, SimStatus};

/// Discretization slack for one run — the same formula the verifier uses:
/// `10 * step * event count`, with the step defaulting to a thousandth of
/// the scene diameter.
fn slack_for(scene: &Scene, cfg: &SimConfig, res: &SimResult) -> f64 {
    let step = cfg.step_h.unwrap_or(1e-3 * scene.diameter());
    SLACK_PER_EVENT * step * res.event_count() as f64
}

fn run(scene: &Scene, alg: Algorithm, cfg: &SimConfig) -> SimResult {
    alg.run(scene, cfg)
        .unwrap_or_else(|e| panic!("{alg} on {} (n={}) failed: {e}", scene.name, cfg.n))
}

fn run_arrived(scene: &Scene, alg: Algorithm, cfg: &SimConfig) -> SimResult {
    let res = run(scene, alg, cfg);
    assert_eq!(
        res.status,
        SimStatus::AllArrived,
        "{alg} on {} (n={}) ended {:?} instead of arriving",
        scene.name,
        cfg.n,
        res.status
    );
    res
}

/// Hit-event count per obstacle across all groups of one run.
fn hits_per_obstacle(res: &SimResult) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for trace in &res.traces {
        for ev in &trace.events {
            if ev.kind == EventKind::Hit {
                let oid = ev.obstacle.expect("hit events carry an obstacle id");
                *counts.entry(oid).or_insert(0usize) += 1;
            }
        }
    }
    counts
}

// ---------------------------------------------------------------------
// Shared run batches.
// ---------------------------------------------------------------------

struct GridRun {
    scene_name: String,
    n: usize,
    t_f: f64,
    t_l: f64,
    upper: f64,
    gap_allowance: f64,
    slack: f64,
    hit_events: usize,
    max_hits_on_one_obstacle: usize,
}

struct Batch<T> {
    runs: T,
    elapsed: Duration,
}

/// 200 random scenes (seeds 0-199, 1 to 5 obstacles, alternating convex
/// and star-shaped) x agent counts {2, 4, 10, 50}, run with the paired
/// swarm. Shared by the upper-bound criterion and the visit-once criterion.
static PAIRED_GRID: LazyLock<Batch<Vec<GridRun>>> = LazyLock::new(|| {
    let start = Instant::now();
    let mut runs = Vec::with_capacity(800);
    for seed in 0..=199u64 {
        let count = (seed % 5 + 1) as usize;
        let convex = seed % 2 == 0;
        let scene = gen_random(seed, count, convex, support::BBOX)
            .unwrap_or_else(|e| panic!("seed {seed}: generation failed: {e}"));
        let metrics = scene.validate().expect("generated scenes validate");
        for n in [2usize, 4, 10, 50] {
            let cfg = SimConfig::new(n);
            let res = run_arrived(&scene, Algorithm::SwarmBug1, &cfg);
            let hits = hits_per_obstacle(&res);
            runs.push(GridRun {
                scene_name: scene.name.clone(),
                n,
                t_f: res.t_f.expect("arrived runs have a first arrival"),
                t_l: res.t_l.expect("arrived runs have a last arrival"),
                upper: swarmbug1_upper(&metrics, n).expect("even n"),
                gap_allowance: swarmbug1_last_slack(&metrics),
                slack: slack_for(&scene, &cfg, &res),
                hit_events: hits.values().sum(),
                max_hits_on_one_obstacle: hits.values().copied().max().unwrap_or(0),
            });
        }
    }
    Batch {
        runs,
        elapsed: start.elapsed(),
    }
});

struct CombRuns {
    floor: f64,
    slowest_upper: f64,
    b2_t_f: f64,
    b2_t_l: f64,
    b2_slack: f64,
    b1_t_f: f64,
    b1_upper: f64,
    b1_slack: f64,
    elapsed: Duration,
}

/// The 9-finger comb scene with nominal perimeter 100, run with both swarm
/// strategies at n = 512. Shared by the separation criterion and the
/// slowest-group criterion.
static COMB: LazyLock<CombRuns> = LazyLock::new(|| {
    let start = Instant::now();
    let scene = gen_comb(9, 100.0, None).expect("comb construction");
    let metrics = scene.validate().expect("comb validates");
    let cfg = SimConfig::new(512);
    let b2 = run_arrived(&scene, Algorithm::SwarmBug2, &cfg);
    let b1 = run_arrived(&scene, Algorithm::SwarmBug1, &cfg);
    CombRuns {
        // The floor takes the comb's nominal perimeter parameter, not the
        // measured boundary length (walls and teeth make that longer).
        floor: comb_scene_lower(metrics.d, 100.0, 9).expect("k >= 2"),
        slowest_upper: swarmbug2_slowest_upper(&metrics),
        b2_t_f: b2.t_f.unwrap(),
        b2_t_l: b2.t_l.unwrap(),
        b2_slack: slack_for(&scene, &cfg, &b2),
        b1_t_f: b1.t_f.unwrap(),
        b1_upper: swarmbug1_upper(&metrics, 512).expect("even n"),
        b1_slack: slack_for(&scene, &cfg, &b1),
        elapsed: start.elapsed(),
    }
});

struct ConvexRun {
    scene_name: String,
    d: f64,
    sum_p: f64,
    t_f: f64,
    t_l: f64,
    slack: f64,
    slowest_upper: f64,
    out_upper: Option<f64>,
}

/// 100 random convex-only scenes run with the line-guided swarm at the
/// smallest sufficient agent count. Shared by the convex-bound criterion
/// and the slowest-group criterion.
static CONVEX_RUNS: LazyLock<Batch<Vec<ConvexRun>>> = LazyLock::new(|| {
    let start = Instant::now();
    let mut runs = Vec::with_capacity(100);
    let mut seed = 1000u64;
    while runs.len() < 100 {
        let count = (seed % 5 + 1) as usize;
        let scene = match gen_random(seed, count, true, support::BBOX) {
            Ok(s) => s,
            Err(_) => {
                seed += 1;
                continue;
            }
        };
        seed += 1;
        let metrics = scene.validate().expect("generated scenes validate");
        let needed = min_agents_swarmbug2(&metrics);
        assert!(needed <= 1 << 12, "unexpectedly deep splitting: {needed}");
        let cfg = SimConfig::new((needed as usize).max(2));
        let res = run_arrived(&scene, Algorithm::SwarmBug2, &cfg);
        runs.push(ConvexRun {
            scene_name: scene.name.clone(),
            d: metrics.d,
            sum_p: metrics.sum_p,
            t_f: res.t_f.unwrap(),
            t_l: res.t_l.unwrap(),
            slack: slack_for(&scene, &cfg, &res),
            slowest_upper: swarmbug2_slowest_upper(&metrics),
            out_upper: out_obstacle_upper(&metrics, &scene).expect("scene is valid"),
        });
    }
    Batch {
        runs,
        elapsed: start.elapsed(),
    }
});

// ---------------------------------------------------------------------
// Criteria.
// ---------------------------------------------------------------------

/// On the long thin wall (d=10, half-length 100, width 0.01), the first
/// agent of each swarm needs at least `d + half the total perimeter`
/// minus a 9.6 margin, up to discretization slack of at most 0.1.
#[test]
fn criterion_01_long_wall_first_arrival_floor() {
    let start = Instant::now();
    let scene = gen_long_wall(10.0, 100.0, 0.01).expect("wall construction");
    let metrics = scene.validate().expect("wall validates");
    let floor = universal_lower(&metrics, 9.6);
    for (alg, n) in [
        (Algorithm::SwarmBug1, 2usize),
        (Algorithm::SwarmBug1, 8),
        (Algorithm::SwarmBug2, 2),
    ] {
        let mut cfg = SimConfig::new(n);
        // The default step (a thousandth of the ~200-unit diameter) would
        // put the slack near 12; a millisecond step keeps it under 0.1.
        cfg.step_h = Some(1e-3);
        let res = run_arrived(&scene, alg, &cfg);
        let slack = slack_for(&scene, &cfg, &res);
        let t_f = res.t_f.unwrap();
        assert!(slack <= 0.1, "{alg} n={n}: slack {slack} exceeds 0.1");
        assert!(
            t_f >= floor - slack,
            "{alg} n={n}: first arrival {t_f} beats the floor {floor} - {slack}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!("criterion 01 long-wall first-arrival floor: PASS ({elapsed:?})");
}

/// The split-at-hit swarm oscillates forever inside the trap scene and the
/// runner detects the cycle within the 10x time budget, for 1, 2, and 4
/// agents.
#[test]
fn criterion_02_trap_scene_never_halts() {
    let scene = gen_com_trap();
    scene.validate().expect("trap validates");
    for n in [1usize, 2, 4] {
        let mut cfg = SimConfig::new(n);
        cfg.budget_factor = 10.0;
        let res = run(&scene, Algorithm::SwarmCom, &cfg);
        assert_eq!(
            res.status,
            SimStatus::NonhaltingCycle,
            "n={n}: expected a detected cycle, got {:?}",
            res.status
        );
        assert_eq!(res.t_f, None, "n={n}: no agent may arrive");
    }
    println!("criterion 02 trap scene never halts: PASS");
}

/// Across 800 paired-swarm runs on random scenes, the first arrival never
/// exceeds its formula ceiling and the first-to-last spread never exceeds
/// half the mean perimeter, up to slack.
#[test]
fn criterion_03_paired_swarm_ceilings_hold_on_random_scenes() {
    let batch = &*PAIRED_GRID;
    assert_eq!(batch.runs.len(), 800);
    let mut runs_with_contact = 0usize;
    for r in &batch.runs {
        assert!(
            r.t_f <= r.upper + r.slack,
            "{} n={}: t_f {} exceeds ceiling {} + {}",
            r.scene_name,
            r.n,
            r.t_f,
            r.upper,
            r.slack
        );
        let gap = (r.t_l - r.t_f).abs();
        assert!(
            gap <= r.gap_allowance + r.slack,
            "{} n={}: spread {} exceeds {} + {}",
            r.scene_name,
            r.n,
            gap,
            r.gap_allowance,
            r.slack
        );
        if r.hit_events > 0 {
            runs_with_contact += 1;
        }
    }
    assert!(
        runs_with_contact >= 50,
        "only {runs_with_contact} of 800 runs touched an obstacle; grid is vacuous"
    );
    assert!(
        batch.elapsed < Duration::from_secs(300),
        "took {:?}",
        batch.elapsed
    );
    println!(
        "criterion 03 paired-swarm ceilings on random scenes: PASS \
         (800 runs, {} with contact, {:?})",
        runs_with_contact, batch.elapsed
    );
}

/// In every run of the random grid, no obstacle is hit more than once: the
/// swarm never returns to an obstacle it has left.
#[test]
fn criterion_04_each_obstacle_is_hit_at_most_once() {
    let batch = &*PAIRED_GRID;
    for r in &batch.runs {
        assert!(
            r.max_hits_on_one_obstacle <= 1,
            "{} n={}: an obstacle was hit {} times",
            r.scene_name,
            r.n,
            r.max_hits_on_one_obstacle
        );
    }
    println!("criterion 04 each obstacle hit at most once: PASS");
}

/// On the comb scene the line-guided swarm is forced above the comb floor
/// while the paired swarm's ceiling sits strictly below it: the paired
/// strategy provably outperforms there.
#[test]
fn criterion_05_comb_scene_separates_the_two_swarm_strategies() {
    let comb = &*COMB;
    assert!(
        comb.b2_t_f >= comb.floor - comb.b2_slack,
        "line-guided first arrival {} beats the floor {} - {}",
        comb.b2_t_f,
        comb.floor,
        comb.b2_slack
    );
    assert!(
        comb.b1_t_f <= comb.b1_upper + comb.b1_slack,
        "paired first arrival {} exceeds its ceiling {} + {}",
        comb.b1_t_f,
        comb.b1_upper,
        comb.b1_slack
    );
    assert!(
        comb.b1_upper < comb.floor,
        "no separation: paired ceiling {} is not below the floor {}",
        comb.b1_upper,
        comb.floor
    );
    assert!(
        comb.elapsed < Duration::from_secs(30),
        "took {:?}",
        comb.elapsed
    );
    println!(
        "criterion 05 comb separates the strategies: PASS \
         (ceiling {:.2} < floor {:.2} <= measured {:.2}, {:?})",
        comb.b1_upper, comb.floor, comb.b2_t_f, comb.elapsed
    );
}

/// Over 100 convex-only random scenes the line-guided swarm's first
/// arrival stays within `d + half the total perimeter`, the last arrival
/// within another half-perimeter after it; and since every convex obstacle
/// here contains neither endpoint, the out-obstacle ceiling evaluates to
/// the same value and passes identically.
#[test]
fn criterion_06_line_guided_swarm_ceilings_hold_on_convex_scenes() {
    let batch = &*CONVEX_RUNS;
    assert_eq!(batch.runs.len(), 100);
    for r in &batch.runs {
        let ceiling = r.d + 0.5 * r.sum_p;
        assert!(
            r.t_f <= ceiling + r.slack,
            "{}: t_f {} exceeds {} + {}",
            r.scene_name,
            r.t_f,
            ceiling,
            r.slack
        );
        assert!(
            r.t_l <= r.t_f + 0.5 * r.sum_p + r.slack,
            "{}: t_l {} exceeds t_f {} + {} + {}",
            r.scene_name,
            r.t_l,
            r.t_f,
            0.5 * r.sum_p,
            r.slack
        );
        let out = r.out_upper.unwrap_or_else(|| {
            panic!(
                "{}: convex obstacles with clear endpoints must all be out-obstacles",
                r.scene_name
            )
        });
        assert!(
            (out - ceiling).abs() <= 1e-9 * ceiling,
            "{}: out-obstacle ceiling {} differs from {}",
            r.scene_name,
            out,
            ceiling
        );
        assert!(r.t_f <= out + r.slack, "{}: out-obstacle ceiling fails", r.scene_name);
    }
    println!(
        "criterion 06 line-guided ceilings on convex scenes: PASS (100 scenes, {:?})",
        batch.elapsed
    );
}

/// Every line-guided run above also respects the slowest-group ceiling
/// `d + half of (crossings x perimeter) summed`; and on the doubling-back
/// scene (fraction 0.9) the last agent really does pay the double
/// traversal: `t_l >= d + 1.8 p` up to slack.
#[test]
fn criterion_07_slowest_group_ceiling_and_doubleback_floor() {
    let comb = &*COMB;
    assert!(
        comb.b2_t_l <= comb.slowest_upper + comb.b2_slack,
        "comb: t_l {} exceeds the slowest-group ceiling {} + {}",
        comb.b2_t_l,
        comb.slowest_upper,
        comb.b2_slack
    );
    for r in &CONVEX_RUNS.runs {
        assert!(
            r.t_l <= r.slowest_upper + r.slack,
            "{}: t_l {} exceeds the slowest-group ceiling {} + {}",
            r.scene_name,
            r.t_l,
            r.slowest_upper,
            r.slack
        );
    }

    let scene = gen_doubleback(0.9).expect("doubleback construction");
    let metrics = scene.validate().expect("doubleback validates");
    assert_eq!(metrics.m, vec![4], "the bracket must cross the line four times");
    assert_eq!(min_agents_swarmbug2(&metrics), 4);
    let cfg = SimConfig::new(4);
    let res = run_arrived(&scene, Algorithm::SwarmBug2, &cfg);
    let slack = slack_for(&scene, &cfg, &res);
    let t_l = res.t_l.unwrap();
    let p = metrics.sum_p; // single obstacle
    let floor = metrics.d + 2.0 * 0.9 * p;
    assert!(
        t_l >= floor - slack,
        "doubleback: t_l {t_l} under the floor {floor} - {slack}"
    );
    assert!(
        t_l <= swarmbug2_slowest_upper(&metrics) + slack,
        "doubleback: t_l {t_l} exceeds its own slowest-group ceiling"
    );
    println!(
        "criterion 07 slowest-group ceiling and doubleback floor: PASS \
         (doubleback t_l {t_l:.1} >= {floor:.1})"
    );
}

/// On a fixed single-obstacle scene, doubling the swarm from 2 to 1024
/// drives the paired ceiling monotonically down toward `d + half the
/// perimeter`, ending less than `mean perimeter / 512` above it, with the
/// measured first arrival below the ceiling at every size.
#[test]
fn criterion_08_paired_ceiling_converges_to_the_half_perimeter_limit() {
    // Seed 0 with one star-shaped obstacle straddles the start-target line
    // (checked below), so the runs genuinely interact with the obstacle.
    let scene = gen_random(0, 1, false, support::BBOX).expect("scene generation");
    let metrics = scene.validate().expect("scene validates");
    assert_eq!(metrics.m, vec![2], "the fixed scene must cross the line twice");
    let limit = metrics.d + 0.5 * metrics.sum_p;
    let mut prev_gap = f64::INFINITY;
    let mut last_gap = f64::INFINITY;
    for exp in 1..=10u32 {
        let n = 1usize << exp; // 2, 4, ..., 1024
        let ceiling = swarmbug1_upper(&metrics, n).expect("even n");
        let gap = ceiling - limit;
        assert!(gap > 0.0, "n={n}: ceiling fell to the limit itself");
        assert!(
            gap < prev_gap,
            "n={n}: gap {gap} did not decrease (previous {prev_gap})"
        );
        let res = run_arrived(&scene, Algorithm::SwarmBug1, &SimConfig::new(n));
        let t_f = res.t_f.unwrap();
        assert!(
            t_f <= ceiling,
            "n={n}: measured first arrival {t_f} is not below the ceiling {ceiling}"
        );
        prev_gap = gap;
        last_gap = gap;
    }
    let tail = metrics.p_bar / 512.0;
    assert!(
        last_gap < tail,
        "final gap {last_gap} has not converged under {tail}"
    );
    println!(
        "criterion 08 paired ceiling converges: PASS (final gap {last_gap:.5} < {tail:.5})"
    );
}

/// The geometry queries agree with brute-force oracles on 1000 randomized
/// cases each, and 1000 generated scenes cross the start-target line an
/// even number of times per obstacle.
#[test]
fn criterion_09_geometry_queries_match_brute_force_oracles() {
    let (hits, misses) = support::check_first_hit_cases(1000);
    assert!(hits >= 100 && misses >= 100, "ray batch is lopsided: {hits}/{misses}");
    support::check_argmin_cases(1000);
    let (free, blocked) = support::check_direction_cases(1000);
    assert!(free >= 100 && blocked >= 100, "direction batch is lopsided: {free}/{blocked}");
    let crossing = support::check_even_crossings(1000);
    assert!(crossing >= 100, "only {crossing} obstacles cross the line");
    println!(
        "criterion 09 geometry oracles: PASS \
         (1000 rays: {hits} hits; 1000 directions: {free} free; 1000 scenes even)"
    );
}

/// Serialized traces, run summaries, and bound reports from a repeated run
/// are byte-identical, across every scene family and algorithm used above.
#[test]
fn criterion_10_repeated_runs_are_byte_identical() {
    fn artifacts(scene: &Scene, alg: Algorithm, cfg: &SimConfig, delta: Option<f64>) -> String {
        let res = run(scene, alg, cfg);
        let trace_json = serde_json::to_string(&res.traces).expect("traces serialize");
        let summary_json = serde_json::to_string(&serde_json::json!({
            "status": res.status,
            "t_f": res.t_f,
            "t_l": res.t_l,
            "warnings": res.warnings,
            "events": res.event_count(),
        }))
        .expect("summary serializes");
        let mut results = BTreeMap::new();
        results.insert(alg, res);
        let report = bounds::verify(scene, cfg, &results, delta).expect("verify succeeds");
        format!("{trace_json}\n{summary_json}\n{}", report.to_json())
    }

    let check = |make_scene: &dyn Fn() -> Scene, alg: Algorithm, cfg: &SimConfig, delta| {
        let scene_a = make_scene();
        let scene_b = make_scene();
        assert_eq!(
            scene_a.to_json(),
            scene_b.to_json(),
            "{}: regenerated scene bytes differ",
            scene_a.name
        );
        let first = artifacts(&scene_a, alg, cfg, delta);
        let second = artifacts(&scene_b, alg, cfg, delta);
        assert_eq!(
            first, second,
            "{alg} on {}: repeated artifacts differ",
            scene_a.name
        );
    };

    let mut wall_cfg = SimConfig::new(8);
    wall_cfg.step_h = Some(1e-3);
    check(
        &|| gen_long_wall(10.0, 100.0, 0.01).unwrap(),
        Algorithm::SwarmBug1,
        &wall_cfg,
        Some(9.6),
    );
    check(
        &|| gen_random(7, 3, false, support::BBOX).unwrap(),
        Algorithm::SwarmBug1,
        &SimConfig::new(10),
        None,
    );
    check(
        &|| gen_comb(9, 100.0, None).unwrap(),
        Algorithm::SwarmBug2,
        &SimConfig::new(512),
        None,
    );
    check(
        &|| gen_doubleback(0.9).unwrap(),
        Algorithm::SwarmBug2,
        &SimConfig::new(4),
        None,
    );
    check(&gen_com_trap, Algorithm::SwarmCom, &SimConfig::new(2), None);
    println!("criterion 10 repeated runs byte-identical: PASS");
}
