//! Swarm navigation among polygonal obstacles.
//!
//! The crate simulates point agents that travel at unit speed through a 2D
//! scene of simple polygonal obstacles, steering with bug-style rules: move
//! straight toward the target, follow an obstacle boundary after contact,
//! and leave the boundary according to an algorithm-specific rule. Six
//! algorithms are provided (`com`, `bug1`, `bug2` and their swarm variants),
//! together with worst-case travel-time bound evaluators and a verifier that
//! compares bounds against measured runs.
//!
//! Layout:
//! - [`geometry`]: exact planar primitives (ray casting, arc-length
//!   parameterization of boundaries, free-direction tests, crossings).
//! - [`scene`]: the scene data model, validation, JSON file format, and
//!   constructors for adversarial and random scenes.
//! - [`sim`]: deterministic kinematic execution of the algorithms,
//!   producing timestamped traces and arrival times.
//! - [`bounds`]: closed-form bound evaluators and the pass/fail verifier.

pub mod bounds;
pub mod geometry;
pub mod scene;
pub mod sim;
