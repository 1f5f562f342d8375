//! Semantic validation of parsed scenarios. Violations accumulate into a
//! report naming the offending entity; an empty report means every model
//! invariant holds and the run can proceed.

use serde::Serialize;

use super::{AgentProfile, Aperture, ApertureKind, FloorPlan, Placement, Rect, Scenario, SimParams};
use crate::field::{self, CellKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub entity: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, entity: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation { entity: entity.into(), message: message.into() });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.violations {
            writeln!(f, "{}: {}", v.entity, v.message)?;
        }
        Ok(())
    }
}

// Any rasterization beyond this many cells is refused up front; scenario
// files are untrusted input and a bogus width must not allocate gigabytes.
const MAX_GRID_CELLS: f64 = 4_000_000.0;

fn finite_rect(r: &Rect) -> bool {
    r.x.is_finite() && r.y.is_finite() && r.width_m.is_finite() && r.length_m.is_finite()
}

fn rect_inside(inner: &Rect, outer: &Rect) -> bool {
    inner.x >= outer.x - 1e-9
        && inner.y >= outer.y - 1e-9
        && inner.x + inner.width_m <= outer.x + outer.width_m + 1e-9
        && inner.y + inner.length_m <= outer.y + outer.length_m + 1e-9
}

// The aperture's clear-opening segment as (x-range, y-range); one range
// is degenerate. Orientation comes from the nearest wall line.
fn aperture_span(plan: &FloorPlan, ap: &Aperture) -> ([f64; 2], [f64; 2]) {
    let (_, vertical) = field::aperture_wall(plan, ap);
    let half = ap.width_m / 2.0;
    if vertical {
        ([ap.center[0], ap.center[0]], [ap.center[1] - half, ap.center[1] + half])
    } else {
        ([ap.center[0] - half, ap.center[0] + half], [ap.center[1], ap.center[1]])
    }
}

fn ranges_overlap(a: [f64; 2], b: [f64; 2]) -> bool {
    a[0] <= b[1] && b[0] <= a[1]
}

fn check_aperture(
    report: &mut ValidationReport,
    plan: &FloorPlan,
    ap: &Aperture,
    owner: &str,
    expect_kind: ApertureKind,
) {
    let entity = format!("aperture {}", ap.id);
    if !(ap.width_m.is_finite() && ap.width_m > 0.0) {
        report.push(&entity, "aperture width must be positive");
        return;
    }
    if !(ap.center[0].is_finite() && ap.center[1].is_finite()) {
        report.push(&entity, "aperture center must be finite");
        return;
    }
    if ap.kind != expect_kind {
        report.push(&entity, format!("aperture listed under {owner} has the wrong kind"));
    }
    let (wall_dist, _) = field::aperture_wall(plan, ap);
    if wall_dist > 1e-6 {
        report.push(&entity, format!("{owner} aperture does not lie on a wall segment"));
    }
}

/// Validate geometry, roster, and parameters of a scenario. Returns an
/// empty report when every invariant holds and the roster fits the spawn
/// capacity.
pub fn validate_scenario(
    plan: &FloorPlan,
    roster: &[AgentProfile],
    params: &SimParams,
) -> ValidationReport {
    let mut report = ValidationReport::default();

    // Floor bounds.
    let floor_ok = plan.width_m.is_finite()
        && plan.length_m.is_finite()
        && plan.width_m > 0.0
        && plan.length_m > 0.0;
    if !floor_ok {
        report.push("floor", "floor width and length must be positive");
    }
    let bounds = plan.bounds();

    if plan.main_exits.is_empty() {
        report.push("floor", "no main exit");
    }

    // Regions.
    for (i, region) in plan.regions.iter().enumerate() {
        let entity = format!("region {}", region.name);
        let r = region.rect();
        if !finite_rect(&r) || r.width_m <= 0.0 || r.length_m <= 0.0 {
            report.push(&entity, "region extents must be positive");
            continue;
        }
        if floor_ok && !rect_inside(&r, &bounds) {
            report.push(&entity, "region extends outside the floor");
        }
        if region.exits.is_empty() {
            report.push(&entity, "region has no exit aperture");
        }
        for other in &plan.regions[i + 1..] {
            if r.intersects(&other.rect()) {
                report.push(&entity, format!("region overlaps region {}", other.name));
            }
        }
        for ap in &region.exits {
            check_aperture(&mut report, plan, ap, &format!("region {}", region.name), ApertureKind::RoomExit);
            if floor_ok && !bounds.contains(ap.center[0].min(plan.width_m - 1e-9), ap.center[1].min(plan.length_m - 1e-9)) {
                report.push(format!("aperture {}", ap.id), "aperture lies outside the floor");
            }
        }
    }

    // Main exits sit on the floor boundary.
    for ap in &plan.main_exits {
        check_aperture(&mut report, plan, ap, "floor", ApertureKind::MainExit);
        if ap.center[0].is_finite() && ap.center[1].is_finite() && floor_ok {
            let on_boundary = ap.center[0].abs() < 1e-6
                || (ap.center[0] - plan.width_m).abs() < 1e-6
                || ap.center[1].abs() < 1e-6
                || (ap.center[1] - plan.length_m).abs() < 1e-6;
            if !on_boundary {
                report.push(format!("aperture {}", ap.id), "main exit is not on the floor boundary");
            }
        }
    }

    // Duplicate aperture ids break field lookup and exit statistics.
    let mut ids: Vec<&str> = plan.apertures().map(|a| a.id.as_str()).collect();
    ids.sort_unstable();
    for pair in ids.windows(2) {
        if pair[0] == pair[1] {
            report.push(format!("aperture {}", pair[0]), "duplicate aperture id");
        }
    }

    // Obstacles.
    for (i, obstacle) in plan.obstacles.iter().enumerate() {
        let entity = format!("obstacle {i}");
        let r = obstacle.rect();
        if !finite_rect(&r) || r.width_m <= 0.0 || r.length_m <= 0.0 {
            report.push(&entity, "obstacle extents must be positive");
            continue;
        }
        if floor_ok && !rect_inside(&r, &bounds) {
            report.push(&entity, "obstacle extends outside the floor");
        }
        let fully_inside_one = plan.regions.iter().any(|reg| rect_inside(&r, &reg.rect()));
        let intersects_any = plan.regions.iter().any(|reg| r.intersects(&reg.rect()));
        if intersects_any && !fully_inside_one {
            report.push(&entity, "obstacle straddles a region boundary");
        }
        for ap in plan.apertures() {
            let (sx, sy) = aperture_span(plan, ap);
            if ranges_overlap([r.x, r.x + r.width_m], sx) && ranges_overlap([r.y, r.y + r.length_m], sy) {
                report.push(&entity, format!("obstacle overlaps aperture {}", ap.id));
            }
        }
    }

    // Roster attribute invariants.
    let mut seen = std::collections::BTreeSet::new();
    for profile in roster {
        let entity = format!("agent {}", profile.id);
        if !seen.insert(profile.id.as_str()) {
            report.push(&entity, "duplicate agent id");
        }
        if !(profile.age >= 18.0) {
            report.push(&entity, "age must be at least 18");
        }
        if !(profile.weight_kg > 0.0 && profile.weight_kg.is_finite()) {
            report.push(&entity, "weight must be positive");
        }
        for (name, value) in [
            ("disease", profile.disease),
            ("shock", profile.shock),
            ("collaboration", profile.collaboration),
        ] {
            if !(0.0..=100.0).contains(&value) {
                report.push(&entity, format!("{name} intensity must lie in [0, 100]"));
            }
        }
    }

    // Parameters.
    if !(params.tick_s > 0.0 && params.tick_s.is_finite()) {
        report.push("params", "tick_s must be positive");
    }
    if !(params.emergency_coeff >= 1.0 && params.emergency_coeff.is_finite()) {
        report.push("params", "emergency_coeff must be at least 1");
    }
    if !(params.female_factor > 0.0 && params.female_factor <= 1.0) {
        report.push("params", "female_factor must lie in (0, 1]");
    }
    if !(0.0..=1.0).contains(&params.fall_prob) {
        report.push("params", "fall_prob must lie in [0, 1]");
    }
    if !(params.fall_duration_s >= 0.0 && params.fall_duration_s.is_finite()) {
        report.push("params", "fall_duration_s must be non-negative");
    }
    if !(params.max_sim_s > 0.0 && params.max_sim_s.is_finite()) {
        report.push("params", "max_sim_s must be positive");
    }

    // Rasterization-dependent checks: door-cell coverage, placement
    // feasibility, spawn capacity.
    if floor_ok {
        let cells = (plan.width_m / field::CELL_M).ceil() * (plan.length_m / field::CELL_M).ceil();
        if cells > MAX_GRID_CELLS {
            report.push("floor", "floor too large to rasterize");
            return report;
        }
        let grid = field::rasterize(plan);
        for ap in plan.apertures() {
            if grid.door_cells(&ap.id).is_empty() {
                report.push(format!("aperture {}", ap.id), "aperture rasterizes to no door cell");
            }
        }
        match &params.placement {
            Placement::RandomInRect { spawn_rect } => {
                if !finite_rect(spawn_rect) || spawn_rect.width_m <= 0.0 || spawn_rect.length_m <= 0.0 {
                    report.push("params", "spawn_rect extents must be positive");
                } else {
                    if !rect_inside(spawn_rect, &bounds) {
                        report.push("params", "spawn_rect extends outside the floor");
                    }
                    let capacity = grid.walkable_cells_in(spawn_rect).len();
                    if capacity < roster.len() {
                        report.push(
                            "params",
                            format!(
                                "spawn capacity exceeded: {} walkable cells for {} agents",
                                capacity,
                                roster.len()
                            ),
                        );
                    }
                }
            }
            Placement::Manual { cells } => {
                if cells.len() != roster.len() {
                    report.push(
                        "params",
                        format!("manual placement lists {} cells for {} agents", cells.len(), roster.len()),
                    );
                }
                let mut seen = std::collections::BTreeSet::new();
                for &[col, row] in cells {
                    let entity = format!("cell ({col}, {row})");
                    if !grid.in_bounds(col as i64, row as i64) {
                        report.push(&entity, "manual placement cell out of bounds");
                        continue;
                    }
                    if grid.kind(col as usize, row as usize) != CellKind::Walkable {
                        report.push(&entity, "manual placement cell is not walkable");
                    }
                    if !seen.insert((col, row)) {
                        report.push(&entity, "manual placement cell duplicated");
                    }
                }
            }
        }
    }

    report
}

impl Scenario {
    /// Full-document validation: the core checks plus roster/roster-spec
    /// presence and fuzzy-config well-formedness.
    pub fn validate(&self, roster: &[AgentProfile]) -> ValidationReport {
        let mut report = validate_scenario(&self.floor, roster, &self.params);
        match (&self.roster, &self.roster_spec) {
            (None, None) => report.push("scenario", "neither roster nor roster_spec present"),
            (Some(_), Some(_)) => report.push("scenario", "both roster and roster_spec present"),
            _ => {}
        }
        if let Some(fuzzy) = &self.fuzzy {
            for problem in fuzzy.check() {
                report.push("fuzzy", problem);
            }
        }
        report
    }
}
