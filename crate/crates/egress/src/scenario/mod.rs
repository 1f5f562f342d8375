//! Declarative scenario model: floor geometry, agent roster, simulation
//! parameters. A scenario file is a single UTF-8 JSON document; unknown
//! keys are rejected so typos surface as parse errors, not silent defaults.

mod roster;
mod validate;

pub use roster::{generate_roster, RosterError};
pub use validate::{validate_scenario, ValidationReport, Violation};

use serde::{Deserialize, Serialize};

use crate::fuzzy::FuzzyConfig;

/// Axis-aligned rectangle in meters, lower-left origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width_m: f64,
    pub length_m: f64,
}

impl Rect {
    pub fn contains(&self, px: f64, py: f64) -> bool {
        px >= self.x && px < self.x + self.width_m && py >= self.y && py < self.y + self.length_m
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.x < other.x + other.width_m
            && other.x < self.x + self.width_m
            && self.y < other.y + other.length_m
            && other.y < self.y + self.length_m
    }
}

/// Continuous floor geometry before rasterization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FloorPlan {
    pub width_m: f64,
    pub length_m: f64,
    pub regions: Vec<Region>,
    pub main_exits: Vec<Aperture>,
    #[serde(default)]
    pub obstacles: Vec<ObstacleRect>,
}

impl FloorPlan {
    /// Every aperture on the plan: room exits first (in region order),
    /// then main exits.
    pub fn apertures(&self) -> impl Iterator<Item = &Aperture> {
        self.regions
            .iter()
            .flat_map(|r| r.exits.iter())
            .chain(self.main_exits.iter())
    }

    pub fn bounds(&self) -> Rect {
        Rect { x: 0.0, y: 0.0, width_m: self.width_m, length_m: self.length_m }
    }
}

/// A walled sub-area of the floor (e.g. the students' area). Space not
/// covered by any region is open hall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub name: String,
    pub origin: [f64; 2],
    pub width_m: f64,
    pub length_m: f64,
    pub exits: Vec<Aperture>,
}

impl Region {
    pub fn rect(&self) -> Rect {
        Rect {
            x: self.origin[0],
            y: self.origin[1],
            width_m: self.width_m,
            length_m: self.length_m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApertureKind {
    RoomExit,
    MainExit,
}

/// A door opening in a wall. `center` lies on the wall segment the door
/// punches through; `width_m` is the clear opening along that wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Aperture {
    pub id: String,
    pub center: [f64; 2],
    pub width_m: f64,
    pub kind: ApertureKind,
}

/// A blocking rectangle (table, counter, fixture).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleRect {
    pub origin: [f64; 2],
    pub width_m: f64,
    pub length_m: f64,
}

impl ObstacleRect {
    pub fn rect(&self) -> Rect {
        Rect {
            x: self.origin[0],
            y: self.origin[1],
            width_m: self.width_m,
            length_m: self.length_m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
}

/// Which emergency behaviors an agent is willing to perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropensitySet {
    pub wait: bool,
    pub aside: bool,
    pub jump_over: bool,
    pub help: bool,
    pub wait_for_fallen: bool,
}

/// Immutable personal attributes of one agent. Disease, shock and
/// collaboration are crisp intensities on [0, 100].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentProfile {
    pub id: String,
    pub gender: Gender,
    pub age: f64,
    pub weight_kg: f64,
    pub disease: f64,
    pub shock: f64,
    pub collaboration: f64,
    pub familiar: bool,
    pub propensities: PropensitySet,
}

/// How agents are placed on the grid at tick zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Placement {
    /// Distinct walkable cells sampled uniformly inside `spawn_rect`.
    RandomInRect { spawn_rect: Rect },
    /// Explicit `[col, row]` cell per agent, in roster order.
    Manual { cells: Vec<[u32; 2]> },
}

/// Simulation parameters. All randomness in a run flows from `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimParams {
    #[serde(default = "default_tick_s")]
    pub tick_s: f64,
    /// Speed multiplier for the emergency situation (>= 1).
    #[serde(default = "default_emergency_coeff")]
    pub emergency_coeff: f64,
    /// Gender factor applied to female agents' desired speed.
    #[serde(default = "default_female_factor")]
    pub female_factor: f64,
    /// Probability that an agent falls when it collides with another agent.
    #[serde(default = "default_fall_prob")]
    pub fall_prob: f64,
    #[serde(default = "default_fall_duration_s")]
    pub fall_duration_s: f64,
    #[serde(default = "default_max_sim_s")]
    pub max_sim_s: f64,
    #[serde(default)]
    pub seed: u64,
    pub placement: Placement,
}

fn default_tick_s() -> f64 {
    0.1
}
fn default_emergency_coeff() -> f64 {
    1.25
}
fn default_female_factor() -> f64 {
    0.5
}
fn default_fall_prob() -> f64 {
    0.05
}
fn default_fall_duration_s() -> f64 {
    2.0
}
fn default_max_sim_s() -> f64 {
    600.0
}

/// Per-gender sampling recipe for synthetic rosters: attribute ranges,
/// five-level frequency weights for the emotional intensities, and
/// Bernoulli rates for the behavior propensities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RosterSpec {
    pub groups: Vec<RosterGroup>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RosterGroup {
    pub gender: Gender,
    pub count: u32,
    /// Inclusive integer range of ages in years.
    pub age_range: [f64; 2],
    /// Inclusive integer range of weights in kilograms.
    pub weight_range: [f64; 2],
    /// Frequency weights for the five intensity levels, V.Low .. V.High.
    pub disease_weights: [f64; 5],
    pub shock_weights: [f64; 5],
    pub collaboration_weights: [f64; 5],
    pub propensity_rates: PropensityRates,
    #[serde(default)]
    pub familiar: bool,
}

/// Bernoulli probabilities for each behavior propensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropensityRates {
    pub wait: f64,
    pub aside: f64,
    pub jump_over: f64,
    pub help: f64,
    pub wait_for_fallen: f64,
}

/// Supports of the five ordinal intensity levels on the [0, 100] scale.
/// The last level is closed at 100.
pub const LEVEL_SUPPORTS: [(f64, f64); 5] =
    [(0.0, 20.0), (20.0, 40.0), (40.0, 60.0), (60.0, 80.0), (80.0, 100.0)];

/// One self-contained experiment: geometry, roster (explicit or sampled),
/// parameters, and optional fuzzy-pipeline overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub floor: FloorPlan,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roster: Option<Vec<AgentProfile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roster_spec: Option<RosterSpec>,
    pub params: SimParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuzzy: Option<FuzzyConfig>,
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("scenario is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scenario is not valid UTF-8")]
    Utf8,
}

impl Scenario {
    /// Parse a scenario from a JSON string. Structural problems (bad JSON,
    /// unknown keys, wrong types) surface here; semantic problems are the
    /// business of [`validate_scenario`].
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Parse from raw bytes (file contents, fuzz input).
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ParseError> {
        let text = std::str::from_utf8(bytes).map_err(|_| ParseError::Utf8)?;
        Self::from_json(text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// The effective roster: explicit `roster` as-is, otherwise generated
    /// from `roster_spec` with the given seed.
    pub fn materialize_roster(&self, seed: u64) -> Result<Vec<AgentProfile>, RosterError> {
        match (&self.roster, &self.roster_spec) {
            (Some(r), _) => Ok(r.clone()),
            (None, Some(spec)) => generate_roster(spec, seed),
            (None, None) => Err(RosterError::EmptyRoster),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_scenario_json() -> String {
        r#"{
            "name": "tiny",
            "floor": {
                "width_m": 4.0,
                "length_m": 4.0,
                "regions": [],
                "main_exits": [
                    {"id": "M1", "center": [2.0, 4.0], "width_m": 2.0, "kind": "main-exit"}
                ],
                "obstacles": []
            },
            "roster": [
                {"id": "a1", "gender": "male", "age": 30.0, "weight_kg": 70.0,
                 "disease": 5.0, "shock": 5.0, "collaboration": 5.0, "familiar": true,
                 "propensities": {"wait": true, "aside": true, "jump_over": false,
                                  "help": false, "wait_for_fallen": false}}
            ],
            "params": {
                "seed": 7,
                "placement": {"mode": "random-in-rect",
                              "spawn_rect": {"x": 0.5, "y": 0.5, "width_m": 3.0, "length_m": 3.0}}
            }
        }"#
        .to_string()
    }

    #[test]
    fn parses_minimal_scenario_with_defaults() {
        let s = Scenario::from_json(&tiny_scenario_json()).unwrap();
        assert_eq!(s.name, "tiny");
        assert_eq!(s.params.tick_s, 0.1);
        assert_eq!(s.params.emergency_coeff, 1.25);
        assert_eq!(s.params.female_factor, 0.5);
        assert_eq!(s.params.seed, 7);
        assert_eq!(s.roster.as_ref().unwrap().len(), 1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = tiny_scenario_json().replace("\"name\": \"tiny\",", "\"name\": \"tiny\", \"nme\": 1,");
        assert!(matches!(Scenario::from_json(&text), Err(ParseError::Json(_))));
    }

    #[test]
    fn json_round_trip_is_identity() {
        let s = Scenario::from_json(&tiny_scenario_json()).unwrap();
        let again = Scenario::from_json(&s.to_json_pretty()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn non_utf8_input_is_a_parse_error() {
        assert!(matches!(Scenario::from_bytes(&[0xff, 0xfe, 0x00]), Err(ParseError::Utf8)));
    }
}
