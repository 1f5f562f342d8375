//! Cellular-automaton crowd evacuation simulator.
//!
//! Agents with heterogeneous desired speeds (derived from personal
//! attributes through a fuzzy membership pipeline) evacuate a rasterized
//! floor plan by descending per-exit distance fields. Runs are fully
//! deterministic for a fixed `(scenario, seed)` pair.
//!
//! Pipeline: [`scenario`] (parse + validate) → [`field`] (rasterize +
//! distance fields) → [`fuzzy`] (desired speeds) → [`engine`] (tick loop)
//! → [`metrics`] (run summaries and multi-seed aggregates).

pub mod engine;
pub mod field;
pub mod fuzzy;
pub mod metrics;
pub mod presets;
pub mod scenario;
