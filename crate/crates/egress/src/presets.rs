//! Bundled cafeteria layout and the twelve experiment presets that vary
//! main-exit count, student-area exit count, spawn distribution, and exit
//! familiarity.
//!
//! The floor is 36 × 15 m: three walled sub-areas (employees 10 m wide,
//! students 17 m, kitchen 9 m) occupy the southern 12 m and drain through
//! room exits into a 3 m hall along the north side, where the main exits
//! sit on the building boundary. Door and table coordinates are not part
//! of the published geometry; they are chosen here so every aisle is at
//! least two cells wide.

use crate::scenario::{
    Aperture, ApertureKind, FloorPlan, Gender, ObstacleRect, ParseError, Placement,
    PropensityRates, Rect, Region, RosterGroup, RosterSpec, Scenario, SimParams,
};

/// Preset names in report order.
pub const PRESET_NAMES: [&str; 12] = [
    "no1a", "no1b", "no1c", "no1d", "no2a", "no2b", "no2c", "no2d", "no3a", "no3b", "no4a",
    "no4b",
];

/// Environment variable that redirects preset loading to a directory of
/// `<name>.json` files.
pub const PRESET_DIR_ENV: &str = "EGRESS_PRESET_DIR";

#[derive(Debug, thiserror::Error)]
pub enum PresetError {
    #[error("unknown preset {0:?} (expected one of no1a..no4b)")]
    Unknown(String),
    #[error("cannot read preset file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("preset file {path} does not parse: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
}

fn room_exit(id: &str, center: [f64; 2], width_m: f64) -> Aperture {
    Aperture { id: id.into(), center, width_m, kind: ApertureKind::RoomExit }
}

fn main_exit(id: &str, center: [f64; 2], width_m: f64) -> Aperture {
    Aperture { id: id.into(), center, width_m, kind: ApertureKind::MainExit }
}

fn table(x: f64, y: f64) -> ObstacleRect {
    ObstacleRect { origin: [x, y], width_m: 1.5, length_m: 1.0 }
}

/// The cafeteria floor with a chosen number of main exits (1–3) and
/// student-area exits (1–2).
pub fn cafeteria_floor(main_exits: usize, student_exits: usize) -> FloorPlan {
    assert!((1..=3).contains(&main_exits), "1 to 3 main exits");
    assert!((1..=2).contains(&student_exits), "1 or 2 student exits");

    let mut student_doors = vec![room_exit("S1", [14.0, 12.0], 2.5)];
    if student_exits == 2 {
        student_doors.push(room_exit("S2", [23.0, 12.0], 2.5));
    }

    let regions = vec![
        Region {
            name: "employees".into(),
            origin: [0.0, 0.0],
            width_m: 10.0,
            length_m: 12.0,
            exits: vec![room_exit("E1", [5.0, 12.0], 2.5)],
        },
        Region {
            name: "students".into(),
            origin: [10.0, 0.0],
            width_m: 17.0,
            length_m: 12.0,
            exits: student_doors,
        },
        Region {
            name: "kitchen".into(),
            origin: [27.0, 0.0],
            width_m: 9.0,
            length_m: 12.0,
            // One door into the students' area, one out the back into the hall.
            exits: vec![room_exit("K1", [27.0, 6.0], 2.0), room_exit("K2", [31.5, 12.0], 2.0)],
        },
    ];

    let mut mains = vec![main_exit("M1", [8.0, 15.0], 2.5)];
    if main_exits >= 2 {
        mains.push(main_exit("M2", [28.0, 15.0], 2.5));
    }
    if main_exits >= 3 {
        mains.push(main_exit("M3", [18.0, 15.0], 2.5));
    }

    let mut obstacles = Vec::new();
    // Employees' area: 6 tables in two columns.
    for y in [2.0, 5.5, 9.0] {
        obstacles.push(table(1.5, y));
        obstacles.push(table(6.0, y));
    }
    // Students' area: 8 tables in a 4 x 2 grid.
    for x in [11.5, 15.5, 19.5, 23.5] {
        for y in [3.0, 8.0] {
            obstacles.push(table(x, y));
        }
    }
    // Kitchen: wall counter and island.
    obstacles.push(ObstacleRect { origin: [34.0, 1.0], width_m: 1.0, length_m: 8.0 });
    obstacles.push(ObstacleRect { origin: [29.0, 3.0], width_m: 1.5, length_m: 1.0 });

    FloorPlan {
        width_m: 36.0,
        length_m: 15.0,
        regions,
        main_exits: mains,
        obstacles,
    }
}

/// The floor as described for the site itself: two main exits, two
/// student-area exits (five room exits in total).
pub fn bundled_floor() -> FloorPlan {
    cafeteria_floor(2, 2)
}

/// The surveyed 81-person population: 35 men and 46 women with their
/// attribute ranges, intensity-level frequencies, and behavior rates.
pub fn bundled_roster_spec(familiar: bool) -> RosterSpec {
    RosterSpec {
        groups: vec![
            RosterGroup {
                gender: Gender::Male,
                count: 35,
                age_range: [18.0, 50.0],
                weight_range: [65.0, 95.0],
                disease_weights: [25.0, 5.0, 2.0, 2.0, 1.0],
                shock_weights: [18.0, 8.0, 4.0, 3.0, 2.0],
                collaboration_weights: [26.0, 5.0, 2.0, 1.0, 1.0],
                propensity_rates: PropensityRates {
                    wait: 0.5714,
                    aside: 0.6857,
                    jump_over: 0.3714,
                    help: 0.2857,
                    wait_for_fallen: 0.5143,
                },
                familiar,
            },
            RosterGroup {
                gender: Gender::Female,
                count: 46,
                age_range: [18.0, 43.0],
                weight_range: [57.0, 83.0],
                disease_weights: [35.0, 5.0, 3.0, 2.0, 1.0],
                shock_weights: [5.0, 5.0, 18.0, 15.0, 3.0],
                collaboration_weights: [21.0, 13.0, 7.0, 3.0, 2.0],
                propensity_rates: PropensityRates {
                    wait: 0.3913,
                    aside: 0.8696,
                    jump_over: 0.1086,
                    help: 0.0652,
                    wait_for_fallen: 0.1304,
                },
                familiar,
            },
        ],
    }
}

#[derive(Debug, Clone, Copy)]
enum SpawnZone {
    /// A compact block inside the students' area.
    Small,
    /// A near-capacity sliver of the students' area.
    VerySmall,
    /// The hall strip right in front of main exit M1.
    NearDoor,
    /// The whole cafeteria.
    Large,
}

impl SpawnZone {
    fn rect(self) -> Rect {
        match self {
            SpawnZone::Small => Rect { x: 11.0, y: 4.5, width_m: 8.0, length_m: 3.0 },
            SpawnZone::VerySmall => Rect { x: 11.0, y: 4.5, width_m: 5.5, length_m: 4.0 },
            SpawnZone::NearDoor => Rect { x: 2.0, y: 12.5, width_m: 12.0, length_m: 2.0 },
            SpawnZone::Large => Rect { x: 0.5, y: 0.5, width_m: 35.0, length_m: 14.0 },
        }
    }
}

struct PresetShape {
    name: &'static str,
    main_exits: usize,
    student_exits: usize,
    spawn: SpawnZone,
    familiar: bool,
}

const SHAPES: [PresetShape; 12] = [
    PresetShape { name: "no1a", main_exits: 2, student_exits: 1, spawn: SpawnZone::Small, familiar: false },
    PresetShape { name: "no1b", main_exits: 2, student_exits: 1, spawn: SpawnZone::Small, familiar: true },
    PresetShape { name: "no1c", main_exits: 2, student_exits: 1, spawn: SpawnZone::Large, familiar: false },
    PresetShape { name: "no1d", main_exits: 2, student_exits: 2, spawn: SpawnZone::Small, familiar: true },
    PresetShape { name: "no2a", main_exits: 1, student_exits: 1, spawn: SpawnZone::Large, familiar: false },
    PresetShape { name: "no2b", main_exits: 1, student_exits: 1, spawn: SpawnZone::VerySmall, familiar: false },
    PresetShape { name: "no2c", main_exits: 1, student_exits: 1, spawn: SpawnZone::NearDoor, familiar: false },
    PresetShape { name: "no2d", main_exits: 1, student_exits: 2, spawn: SpawnZone::Small, familiar: false },
    PresetShape { name: "no3a", main_exits: 3, student_exits: 1, spawn: SpawnZone::Large, familiar: false },
    PresetShape { name: "no3b", main_exits: 3, student_exits: 1, spawn: SpawnZone::Large, familiar: true },
    PresetShape { name: "no4a", main_exits: 3, student_exits: 2, spawn: SpawnZone::Large, familiar: false },
    PresetShape { name: "no4b", main_exits: 3, student_exits: 2, spawn: SpawnZone::Large, familiar: true },
];

/// Build a bundled preset by name.
pub fn preset(name: &str) -> Result<Scenario, PresetError> {
    let shape = SHAPES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| PresetError::Unknown(name.to_string()))?;
    Ok(Scenario {
        name: shape.name.to_string(),
        floor: cafeteria_floor(shape.main_exits, shape.student_exits),
        roster: None,
        roster_spec: Some(bundled_roster_spec(shape.familiar)),
        params: SimParams {
            tick_s: 0.1,
            emergency_coeff: 1.25,
            female_factor: 0.5,
            fall_prob: 0.05,
            fall_duration_s: 2.0,
            max_sim_s: 600.0,
            seed: 1,
            placement: Placement::RandomInRect { spawn_rect: shape.spawn.rect() },
        },
        fuzzy: None,
    })
}

/// All twelve presets in report order.
pub fn all_presets() -> Vec<Scenario> {
    PRESET_NAMES.iter().map(|n| preset(n).expect("bundled preset")).collect()
}

/// Load a preset, honoring the `EGRESS_PRESET_DIR` override.
pub fn load_preset(name: &str) -> Result<Scenario, PresetError> {
    if let Ok(dir) = std::env::var(PRESET_DIR_ENV) {
        let path = std::path::Path::new(&dir).join(format!("{name}.json"));
        let display = path.display().to_string();
        let text = std::fs::read_to_string(&path)
            .map_err(|source| PresetError::Io { path: display.clone(), source })?;
        return Scenario::from_json(&text).map_err(|source| PresetError::Parse { path: display, source });
    }
    preset(name)
}
