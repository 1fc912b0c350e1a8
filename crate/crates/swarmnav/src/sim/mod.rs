//! Deterministic kinematic execution of the six navigation strategies over
//! a scene: straight-line motion resolved by exact segment intersection,
//! boundary walks resolved vertex to vertex, and (for the paired-swarm
//! boundary exploration) a fixed-step integration of the spreading
//! protocol. Speed is normalized to 1, so travel time equals path length.

mod bug1;
mod bug2;
mod com;
mod swarm_bug1;
mod walk;

pub use bug1::run_bug1;
pub use bug2::{run_bug2, run_swarm_bug2};
pub use com::{run_com, run_swarm_com};
pub use swarm_bug1::run_swarm_bug1;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, Point, Tolerances};
use crate::scene::{Scene, SceneError, SceneMetrics};

/// Failures that prevent a run from starting or proceeding. Outcomes of a
/// completed run (non-halting, budget, unreachable target) are reported in
/// [`SimResult::status`], not here.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("paired-swarm runs need an even agent count of at least 2, got {0}")]
    OddSwarmSize(usize),
    #[error("swarm of {provided} agents is below the {required} required by this scene")]
    SwarmTooSmall { required: u128, provided: usize },
    #[error("invalid agent count: {0}")]
    InvalidAgentCount(String),
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

impl From<GeometryError> for SimError {
    fn from(e: GeometryError) -> Self {
        SimError::Scene(SceneError::Geometry(e))
    }
}

/// Run parameters shared by all algorithms. `step_h`, `eps_geom`, and
/// `eps_angle` default to scene-diameter-proportional values when `None`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    /// Number of agents.
    pub n: usize,
    /// Integration step for the coupled spreading phase (time units).
    /// Defaults to `1e-3 *` scene diameter.
    #[serde(default)]
    pub step_h: Option<f64>,
    /// The run is cut off at time `d + budget_factor * sum of perimeters`.
    #[serde(default = "default_budget_factor")]
    pub budget_factor: f64,
    /// Seed for the only stochastic choice in any algorithm: the direction
    /// a singleton group picks when it cannot split.
    #[serde(default)]
    pub rng_seed: u64,
    /// Override for the coincidence tolerance (scene units).
    #[serde(default)]
    pub eps_geom: Option<f64>,
    /// Override for the tangency tolerance (radians).
    #[serde(default)]
    pub eps_angle: Option<f64>,
    /// Let undersized split-at-hit swarms continue: a singleton that would
    /// split goes counterclockwise instead and a warning is recorded.
    #[serde(default)]
    pub allow_undersized: bool,
}

fn default_budget_factor() -> f64 {
    10.0
}

impl SimConfig {
    pub fn new(n: usize) -> SimConfig {
        SimConfig {
            n,
            step_h: None,
            budget_factor: default_budget_factor(),
            rng_seed: 0,
            eps_geom: None,
            eps_angle: None,
            allow_undersized: false,
        }
    }
}

/// The six navigation strategies, as selectable units (e.g. on the command
/// line or as verifier map keys). Kebab-case in serialized form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Single-agent split-at-hit rule (random boundary direction).
    Com,
    /// Swarm split-at-hit rule.
    SwarmCom,
    /// Single-agent full-boundary survey.
    Bug1,
    /// Paired swarm with explorer survey and boundary spreading.
    SwarmBug1,
    /// Single-agent start-target-line guidance (always counterclockwise).
    Bug2,
    /// Swarm start-target-line guidance, splitting at every contact.
    SwarmBug2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Com,
        Algorithm::SwarmCom,
        Algorithm::Bug1,
        Algorithm::SwarmBug1,
        Algorithm::Bug2,
        Algorithm::SwarmBug2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Com => "com",
            Algorithm::SwarmCom => "swarm-com",
            Algorithm::Bug1 => "bug1",
            Algorithm::SwarmBug1 => "swarm-bug1",
            Algorithm::Bug2 => "bug2",
            Algorithm::SwarmBug2 => "swarm-bug2",
        }
    }

    /// Runs this strategy on the scene.
    pub fn run(self, scene: &Scene, cfg: &SimConfig) -> Result<SimResult, SimError> {
        match self {
            Algorithm::Com => run_com(scene, cfg),
            Algorithm::SwarmCom => run_swarm_com(scene, cfg),
            Algorithm::Bug1 => run_bug1(scene, cfg),
            Algorithm::SwarmBug1 => run_swarm_bug1(scene, cfg),
            Algorithm::Bug2 => run_bug2(scene, cfg),
            Algorithm::SwarmBug2 => run_swarm_bug2(scene, cfg),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown algorithm {s:?}; expected one of: {}",
                    Algorithm::ALL.map(|a| a.name()).join(", ")
                )
            })
    }
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimStatus {
    /// Every agent reached the target.
    AllArrived,
    /// Some group revisited a (hit point, obstacle, incoming direction)
    /// state and will repeat forever.
    NonhaltingCycle,
    /// The time budget `d + K * sum of perimeters` (or the internal event
    /// cap) was exhausted before every agent arrived.
    BudgetExceeded,
    /// Some group established that no leave point leads to the target.
    TargetUnreachable,
}

/// What happened at a trace event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Hit,
    Leave,
    Meet,
    Split,
    Arrive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceEvent {
    pub t: f64,
    pub kind: EventKind,
    pub point: Point,
    /// Obstacle involved, absent for arrive events.
    pub obstacle: Option<usize>,
}

/// Timestamped polyline for one group lineage, plus its events. Sample
/// times are strictly increasing and the implied speed between consecutive
/// samples never exceeds 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trace {
    pub group: String,
    pub samples: Vec<(f64, Point)>,
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub(crate) fn new(group: impl Into<String>) -> Trace {
        Trace {
            group: group.into(),
            samples: Vec::new(),
            events: Vec::new(),
        }
    }

    /// Appends a sample, dropping exact duplicates of the previous one.
    pub(crate) fn sample(&mut self, t: f64, point: Point) {
        if let Some(&(lt, lp)) = self.samples.last() {
            if t <= lt {
                debug_assert!(point.dist(lp) <= 1e-9, "teleport at t={t}");
                return;
            }
        }
        self.samples.push((t, point));
    }

    pub(crate) fn event(&mut self, t: f64, kind: EventKind, point: Point, obstacle: Option<usize>) {
        self.events.push(TraceEvent {
            t,
            kind,
            point,
            obstacle,
        });
    }
}

/// Outcome of one run: arrival times, termination status, and the full
/// per-group traces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimResult {
    pub status: SimStatus,
    /// Arrival time of the first agent; `None` when no agent arrived.
    pub t_f: Option<f64>,
    /// Arrival time of the last agent; `None` unless every agent arrived.
    pub t_l: Option<f64>,
    pub traces: Vec<Trace>,
    pub metrics: SceneMetrics,
    pub warnings: Vec<String>,
}

impl SimResult {
    /// Total number of events across all traces; the discretization slack
    /// used when bounds are checked is proportional to this count.
    pub fn event_count(&self) -> usize {
        self.traces.iter().map(|t| t.events.len()).sum()
    }
}

/// Hard cap on total events per run, guarding against pathological scenes
/// where progress per event is tiny; hitting it reports budget exhaustion.
pub(crate) const EVENT_CAP: usize = 100_000;

/// Resolved per-run context shared by the engines.
pub(crate) struct RunCtx<'a> {
    pub scene: &'a Scene,
    pub metrics: SceneMetrics,
    pub tol: Tolerances,
    pub step: f64,
    pub budget: f64,
}

impl<'a> RunCtx<'a> {
    pub(crate) fn new(scene: &'a Scene, cfg: &SimConfig) -> Result<RunCtx<'a>, SimError> {
        if cfg.n == 0 {
            return Err(SimError::InvalidAgentCount(
                "at least one agent is required".into(),
            ));
        }
        if cfg.budget_factor < 1.0 || !cfg.budget_factor.is_finite() {
            return Err(SimError::InvalidConfig(format!(
                "budget_factor must be finite and at least 1, got {}",
                cfg.budget_factor
            )));
        }
        let metrics = SceneMetrics::measure(scene)?;
        let mut tol = scene.tolerances();
        if let Some(e) = cfg.eps_geom {
            if !(e.is_finite() && e > 0.0) {
                return Err(SimError::InvalidConfig(format!("eps_geom = {e}")));
            }
            tol.eps_geom = e;
        }
        if let Some(e) = cfg.eps_angle {
            if !(e.is_finite() && e > 0.0) {
                return Err(SimError::InvalidConfig(format!("eps_angle = {e}")));
            }
            tol.eps_angle = e;
        }
        let step = match cfg.step_h {
            Some(h) if h.is_finite() && h > 0.0 => h,
            Some(h) => {
                return Err(SimError::InvalidConfig(format!(
                    "step_h must be positive, got {h}"
                )))
            }
            None => 1e-3 * scene.diameter(),
        };
        let budget = metrics.d + cfg.budget_factor * metrics.sum_p;
        Ok(RunCtx {
            scene,
            metrics,
            tol,
            step,
            budget,
        })
    }
}
