//! Seeded tick loop: places agents, moves them down their target exit's
//! distance field at their individual speeds, and resolves conflicts
//! through the behavior repertoire (wait, aside, jump over, help, wait
//! for fallen). Every run is a pure function of `(scenario, seed)`.
//!
//! Update order is a fresh seeded random permutation each tick; within a
//! tick agents act sequentially, which makes cell exclusivity structural.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field::{self, CellKind, FieldMap, Grid, CELL_M, DIRECTIONS};
use crate::fuzzy;
use crate::metrics::{self, RunSummary};
use crate::scenario::{
    AgentProfile, ApertureKind, Placement, PropensitySet, Scenario, SimParams, ValidationReport,
};

// Engine draws live on a different ChaCha stream than roster sampling so
// the two never alias for the same run seed.
const ENGINE_STREAM: u64 = 0xB0;

/// Movement budget ceiling in cell-steps. Blocked agents keep accruing
/// credit; the cap stops a long wait from turning into a teleport burst.
pub const CREDIT_CAP: f64 = 2.0;

// A collision is an episode: the CWA record and the fall draw happen when
// an agent first finds its preferred cell occupied, not on every tick it
// stays stuck behind the same cell.
//
// After this many consecutive blocked ticks an agent without the aside
// propensity detours anyway; two opposing waiters would otherwise hold
// each other in place until the time cap.
const BLOCK_PATIENCE_TICKS: u32 = 10;

/// Cell-steps accrued per tick for a given speed.
pub fn credit_per_tick(speed_kmh: f64, tick_s: f64) -> f64 {
    speed_kmh / 3.6 / CELL_M * tick_s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Moving,
    Waiting,
    Aside,
    Fallen,
    Helping,
    Exited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    Cwa,
    Cwo,
    Wait,
    Aside,
    JumpOver,
    Help,
    WaitForFallen,
    Fall,
    Exit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventRecord {
    pub tick: u64,
    pub agent: String,
    pub kind: EventKind,
    pub cell: [u32; 2],
}

/// Dynamic per-agent simulation state.
#[derive(Debug, Clone)]
pub struct AgentState {
    pub id: String,
    pub propensities: PropensitySet,
    pub cell: (usize, usize),
    pub speed_kmh: f64,
    /// Movement budget in cell-steps; orthogonal moves cost 1, diagonal √2.
    pub credit: f64,
    /// Index into the engine's main-exit table.
    pub target_exit: usize,
    pub condition: Condition,
    pub fallen_remaining: u32,
    /// Agents that already halved this fall episode.
    pub helped_by: Vec<usize>,
    pub cwa_count: u32,
    pub cwo_count: u32,
    pub exit_tick: Option<u64>,
    last_cwo_tick: u64,
    last_block_tick: u64,
    blocked_cell: Option<(usize, usize)>,
    blocked_ticks: u32,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("floor has no main exit")]
    NoMainExit,
    #[error("no field computed for main exit {0}")]
    MissingField(String),
    #[error("spawn capacity exceeded: {capacity} candidate cells for {agents} agents")]
    SpawnOverflow { capacity: usize, agents: usize },
    #[error("manual placement lists {cells} cells for {agents} agents")]
    PlacementMismatch { cells: usize, agents: usize },
    #[error("manual cell ({0}, {1}) is blocked or out of bounds")]
    BlockedCell(u32, u32),
    #[error("manual cell ({0}, {1}) assigned to more than one agent")]
    DuplicateCell(u32, u32),
    #[error("agent {0} cannot reach any main exit from its spawn cell")]
    UnreachableSpawn(String),
    #[error("speeds do not match the roster")]
    SpeedsMismatch,
    #[error("agent {0} has a non-positive desired speed")]
    BadSpeed(String),
}

#[derive(Debug, Clone, Copy)]
struct Step {
    to: (usize, usize),
    dir: (i32, i32),
    cost: f64,
}

pub struct Engine {
    grid: Grid,
    fields: Vec<FieldMap>,
    main_exit_ids: Vec<String>,
    /// Door cells per main exit, row-major, parallel to `main_exit_ids`.
    exit_doors: Vec<Vec<(usize, usize)>>,
    is_main_door: Vec<bool>,
    params: SimParams,
    agents: Vec<AgentState>,
    occupancy: Vec<Option<u32>>,
    /// Tick during which each cell was last vacated. A cell freed this
    /// tick is not enterable until the next one, so a queue compresses at
    /// most one cell per tick instead of snapping shut whenever the
    /// update permutation happens to run front to back.
    hold_until: Vec<u64>,
    tick: u64,
    max_ticks: u64,
    rng: ChaCha8Rng,
    log: Vec<EventRecord>,
    exited: usize,
}

impl Engine {
    /// Place agents and assign exit targets. `fields` must cover every
    /// main exit of the grid; `speeds` is parallel to `roster`.
    pub fn new(
        grid: Grid,
        fields: Vec<FieldMap>,
        roster: &[AgentProfile],
        speeds: &[(String, f64)],
        params: &SimParams,
        seed: u64,
    ) -> Result<Engine, EngineError> {
        let main_exit_ids = grid.exit_ids(ApertureKind::MainExit);
        if main_exit_ids.is_empty() {
            return Err(EngineError::NoMainExit);
        }
        let mut ordered_fields = Vec::with_capacity(main_exit_ids.len());
        for id in &main_exit_ids {
            let f = fields
                .iter()
                .find(|f| &f.exit_id == id)
                .ok_or_else(|| EngineError::MissingField(id.clone()))?;
            ordered_fields.push(f.clone());
        }

        if speeds.len() != roster.len()
            || roster.iter().zip(speeds).any(|(p, (id, _))| &p.id != id)
        {
            return Err(EngineError::SpeedsMismatch);
        }
        for (id, s) in speeds {
            if !(s.is_finite() && *s > 0.0) {
                return Err(EngineError::BadSpeed(id.clone()));
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(ENGINE_STREAM);

        // Placement.
        let cells: Vec<(usize, usize)> = match &params.placement {
            Placement::Manual { cells } => {
                if cells.len() != roster.len() {
                    return Err(EngineError::PlacementMismatch {
                        cells: cells.len(),
                        agents: roster.len(),
                    });
                }
                let mut seen = std::collections::BTreeSet::new();
                let mut placed = Vec::with_capacity(cells.len());
                for &[col, row] in cells {
                    if !grid.in_bounds(col as i64, row as i64)
                        || grid.kind(col as usize, row as usize) != CellKind::Walkable
                    {
                        return Err(EngineError::BlockedCell(col, row));
                    }
                    if !seen.insert((col, row)) {
                        return Err(EngineError::DuplicateCell(col, row));
                    }
                    placed.push((col as usize, row as usize));
                }
                placed
            }
            Placement::RandomInRect { spawn_rect } => {
                let candidates = grid.walkable_cells_in(spawn_rect);
                if candidates.len() < roster.len() {
                    return Err(EngineError::SpawnOverflow {
                        capacity: candidates.len(),
                        agents: roster.len(),
                    });
                }
                rand::seq::index::sample(&mut rng, candidates.len(), roster.len())
                    .iter()
                    .map(|i| candidates[i])
                    .collect()
            }
        };

        // Exit targets: familiar agents take the nearest main exit, the
        // rest draw one uniformly.
        let mut agents = Vec::with_capacity(roster.len());
        for ((profile, (_, speed)), cell) in roster.iter().zip(speeds).zip(&cells) {
            let target_exit = if profile.familiar {
                let id = field::nearest_exit(&ordered_fields, *cell)
                    .map_err(|_| EngineError::UnreachableSpawn(profile.id.clone()))?;
                main_exit_ids.iter().position(|e| e == &id).expect("known exit")
            } else {
                rng.gen_range(0..main_exit_ids.len())
            };
            agents.push(AgentState {
                id: profile.id.clone(),
                propensities: profile.propensities,
                cell: *cell,
                speed_kmh: *speed,
                credit: 0.0,
                target_exit,
                condition: Condition::Moving,
                fallen_remaining: 0,
                helped_by: Vec::new(),
                cwa_count: 0,
                cwo_count: 0,
                exit_tick: None,
                last_cwo_tick: 0,
                last_block_tick: 0,
                blocked_cell: None,
                blocked_ticks: 0,
            });
        }

        let mut occupancy = vec![None; grid.cols * grid.rows];
        for (i, a) in agents.iter().enumerate() {
            occupancy[grid.index(a.cell.0, a.cell.1)] = Some(i as u32);
        }
        let hold_until = vec![0; grid.cols * grid.rows];
        let mut is_main_door = vec![false; grid.cols * grid.rows];
        let mut exit_doors = Vec::with_capacity(main_exit_ids.len());
        for id in &main_exit_ids {
            let doors = grid.door_cells(id);
            for &(c, r) in &doors {
                is_main_door[grid.index(c, r)] = true;
            }
            exit_doors.push(doors);
        }

        let max_ticks = (params.max_sim_s / params.tick_s).floor() as u64;
        Ok(Engine {
            grid,
            fields: ordered_fields,
            main_exit_ids,
            exit_doors,
            is_main_door,
            params: params.clone(),
            agents,
            occupancy,
            hold_until,
            tick: 0,
            max_ticks,
            rng,
            log: Vec::new(),
            exited: 0,
        })
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn tick_s(&self) -> f64 {
        self.params.tick_s
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn log(&self) -> &[EventRecord] {
        &self.log
    }

    pub fn main_exit_ids(&self) -> &[String] {
        &self.main_exit_ids
    }

    pub fn is_done(&self) -> bool {
        self.exited == self.agents.len() || self.tick >= self.max_ticks
    }

    /// Agents still on the grid (not exited), in roster order.
    pub fn stranded(&self) -> Vec<String> {
        self.agents
            .iter()
            .filter(|a| a.condition != Condition::Exited)
            .map(|a| a.id.clone())
            .collect()
    }

    /// One tick: agents act in a fresh seeded random permutation.
    pub fn step(&mut self) {
        self.tick += 1;
        let mut order: Vec<u32> = (0..self.agents.len() as u32).collect();
        order.shuffle(&mut self.rng);
        for idx in order {
            self.process_agent(idx as usize);
        }
        debug_assert_eq!(self.check_invariants(), Ok(()));
    }

    /// Run until everyone has exited or the time cap is reached, invoking
    /// the observer after every tick.
    pub fn run_with_observer(&mut self, mut observe: impl FnMut(&Engine)) {
        while !self.is_done() {
            self.step();
            observe(self);
        }
    }

    /// Run to the end and return the full event log.
    pub fn run_to_completion(&mut self) -> &[EventRecord] {
        self.run_with_observer(|_| {});
        &self.log
    }

    /// Occupancy exclusivity, conservation, and credit bounds. The step
    /// loop debug-asserts this; tests call it directly.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut on_grid = 0usize;
        let mut seen = vec![false; self.occupancy.len()];
        for (i, a) in self.agents.iter().enumerate() {
            if a.condition == Condition::Exited {
                continue;
            }
            on_grid += 1;
            let idx = self.grid.index(a.cell.0, a.cell.1);
            if seen[idx] {
                return Err(format!("two agents share cell {:?}", a.cell));
            }
            seen[idx] = true;
            if self.occupancy[idx] != Some(i as u32) {
                return Err(format!("occupancy table out of sync at {:?}", a.cell));
            }
            if !(0.0..=CREDIT_CAP + 1e-9).contains(&a.credit) {
                return Err(format!("agent {} credit {} out of bounds", a.id, a.credit));
            }
        }
        if on_grid + self.exited != self.agents.len() {
            return Err("conservation violated: exited + on-grid != roster".to_string());
        }
        if self.occupancy.iter().filter(|o| o.is_some()).count() != on_grid {
            return Err("occupancy table holds stale entries".to_string());
        }
        Ok(())
    }

    fn occupant(&self, cell: (usize, usize)) -> Option<usize> {
        self.occupancy[self.grid.index(cell.0, cell.1)].map(|i| i as usize)
    }

    /// Empty and not vacated earlier this same tick.
    fn is_enterable(&self, cell: (usize, usize)) -> bool {
        let idx = self.grid.index(cell.0, cell.1);
        self.occupancy[idx].is_none() && self.hold_until[idx] < self.tick
    }

    fn log_event(&mut self, idx: usize, kind: EventKind) {
        let a = &mut self.agents[idx];
        match kind {
            EventKind::Cwa => a.cwa_count += 1,
            EventKind::Cwo => a.cwo_count += 1,
            _ => {}
        }
        self.log.push(EventRecord {
            tick: self.tick,
            agent: a.id.clone(),
            kind,
            cell: [a.cell.0 as u32, a.cell.1 as u32],
        });
    }

    fn execute_move(&mut self, idx: usize, to: (usize, usize), cost: f64) {
        let from = self.agents[idx].cell;
        let from_idx = self.grid.index(from.0, from.1);
        let to_idx = self.grid.index(to.0, to.1);
        debug_assert!(self.occupancy[to_idx].is_none());
        self.occupancy[from_idx] = None;
        self.hold_until[from_idx] = self.tick;
        self.occupancy[to_idx] = Some(idx as u32);
        let a = &mut self.agents[idx];
        a.cell = to;
        a.credit -= cost;
        a.condition = Condition::Moving;
    }

    /// Absorb the agent if it stands on any main-exit door cell.
    fn try_exit(&mut self, idx: usize) -> bool {
        let cell = self.agents[idx].cell;
        if !self.is_main_door[self.grid.index(cell.0, cell.1)] {
            return false;
        }
        self.log_event(idx, EventKind::Exit);
        let cell_idx = self.grid.index(cell.0, cell.1);
        self.occupancy[cell_idx] = None;
        self.hold_until[cell_idx] = self.tick;
        let a = &mut self.agents[idx];
        a.condition = Condition::Exited;
        a.exit_tick = Some(self.tick);
        self.exited += 1;
        true
    }

    /// The strictly-descending neighbor with the lowest field value;
    /// ties go to the earlier direction in N, NE, E, SE, S, SW, W, NW.
    /// Occupancy is ignored here; conflicts are resolved by the caller.
    fn preferred_step(&self, idx: usize) -> Option<Step> {
        let a = &self.agents[idx];
        let f = &self.fields[a.target_exit];
        let d0 = f.dist(a.cell.0, a.cell.1);
        let mut best: Option<(f64, Step)> = None;
        for dir in DIRECTIONS {
            let (nc, nr) = (a.cell.0 as i64 + dir.0 as i64, a.cell.1 as i64 + dir.1 as i64);
            if !self.grid.in_bounds(nc, nr) {
                continue;
            }
            let to = (nc as usize, nr as usize);
            if !self.grid.is_passable(to.0, to.1) || self.grid.cuts_corner(a.cell.0, a.cell.1, dir) {
                continue;
            }
            let d = f.dist(to.0, to.1);
            if d < d0 && best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, Step { to, dir, cost: field::step_cost_m(dir) / CELL_M }));
            }
        }
        best.map(|(_, s)| s)
    }

    /// Free neighbor acceptable for an aside step: field value no worse
    /// than the current cell, affordable, and not the contested cell.
    fn sidestep(&self, idx: usize, blocked: (usize, usize)) -> Option<Step> {
        let a = &self.agents[idx];
        let f = &self.fields[a.target_exit];
        let d0 = f.dist(a.cell.0, a.cell.1);
        let mut best: Option<(f64, Step)> = None;
        for dir in DIRECTIONS {
            let (nc, nr) = (a.cell.0 as i64 + dir.0 as i64, a.cell.1 as i64 + dir.1 as i64);
            if !self.grid.in_bounds(nc, nr) {
                continue;
            }
            let to = (nc as usize, nr as usize);
            if to == blocked
                || !self.grid.is_passable(to.0, to.1)
                || self.grid.cuts_corner(a.cell.0, a.cell.1, dir)
                || !self.is_enterable(to)
            {
                continue;
            }
            let cost = field::step_cost_m(dir) / CELL_M;
            if cost > a.credit {
                continue;
            }
            let d = f.dist(to.0, to.1);
            if d <= d0 && best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, Step { to, dir, cost }));
            }
        }
        best.map(|(_, s)| s)
    }

    /// Free strictly-descending neighbor avoiding `avoid`; used to route
    /// around a fallen agent's cell.
    fn detour_step(&self, idx: usize, avoid: (usize, usize)) -> Option<Step> {
        let a = &self.agents[idx];
        let f = &self.fields[a.target_exit];
        let d0 = f.dist(a.cell.0, a.cell.1);
        let mut best: Option<(f64, Step)> = None;
        for dir in DIRECTIONS {
            let (nc, nr) = (a.cell.0 as i64 + dir.0 as i64, a.cell.1 as i64 + dir.1 as i64);
            if !self.grid.in_bounds(nc, nr) {
                continue;
            }
            let to = (nc as usize, nr as usize);
            if to == avoid
                || !self.grid.is_passable(to.0, to.1)
                || self.grid.cuts_corner(a.cell.0, a.cell.1, dir)
                || !self.is_enterable(to)
            {
                continue;
            }
            let cost = field::step_cost_m(dir) / CELL_M;
            if cost > a.credit {
                continue;
            }
            let d = f.dist(to.0, to.1);
            if d < d0 && best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, Step { to, dir, cost }));
            }
        }
        best.map(|(_, s)| s)
    }

    /// Whether the straight line toward the target exit's closest door
    /// cell is blocked by an obstacle cell right next to the agent.
    fn obstacle_ahead(&self, idx: usize) -> bool {
        let a = &self.agents[idx];
        let doors = &self.exit_doors[a.target_exit];
        let (col, row) = a.cell;
        let mut nearest: Option<(i64, (usize, usize))> = None;
        for &(dc, dr) in doors {
            let dx = dc as i64 - col as i64;
            let dy = dr as i64 - row as i64;
            let d2 = dx * dx + dy * dy;
            if nearest.map_or(true, |(bd, _)| d2 < bd) {
                nearest = Some((d2, (dc, dr)));
            }
        }
        let Some((_, door)) = nearest else { return false };
        let dir = ((door.0 as i64 - col as i64).signum(), (door.1 as i64 - row as i64).signum());
        if dir == (0, 0) {
            return false;
        }
        let (nc, nr) = (col as i64 + dir.0, row as i64 + dir.1);
        self.grid.in_bounds(nc, nr) && self.grid.kind(nc as usize, nr as usize) == CellKind::Obstacle
    }

    /// Log the collision with an obstacle, at most once per tick.
    fn resolve_obstacle_block(&mut self, idx: usize) {
        if self.agents[idx].last_cwo_tick == self.tick {
            return;
        }
        self.agents[idx].last_cwo_tick = self.tick;
        self.log_event(idx, EventKind::Cwo);
    }

    /// The preferred cell is held by an active agent. On a fresh collision
    /// (the agent was not already stuck behind this cell last tick) log it
    /// and roll the fall draw; an aside-willing agent sidesteps, an
    /// exhausted one detours, everyone else waits.
    fn resolve_agent_collision(&mut self, idx: usize, blocked: (usize, usize)) {
        let fresh = {
            let a = &mut self.agents[idx];
            let continuing =
                a.last_block_tick + 1 == self.tick && a.blocked_cell == Some(blocked);
            a.last_block_tick = self.tick;
            a.blocked_cell = Some(blocked);
            a.blocked_ticks = if continuing { a.blocked_ticks + 1 } else { 1 };
            !continuing
        };
        if fresh {
            self.log_event(idx, EventKind::Cwa);
        }
        let mut moved = false;
        if self.agents[idx].propensities.aside {
            if let Some(step) = self.sidestep(idx, blocked) {
                self.execute_move(idx, step.to, step.cost);
                self.agents[idx].condition = Condition::Aside;
                self.log_event(idx, EventKind::Aside);
                moved = true;
            }
        } else if self.agents[idx].blocked_ticks > BLOCK_PATIENCE_TICKS {
            if let Some(step) = self.sidestep(idx, blocked) {
                self.execute_move(idx, step.to, step.cost);
                moved = true;
            }
        }
        if !moved {
            self.agents[idx].condition = Condition::Waiting;
            self.log_event(idx, EventKind::Wait);
        }
        if moved && self.try_exit(idx) {
            return;
        }
        if fresh && self.rng.gen::<f64>() < self.params.fall_prob {
            self.fall(idx);
        }
    }

    fn fall(&mut self, idx: usize) {
        let ticks = (self.params.fall_duration_s / self.params.tick_s).round() as u32;
        self.log_event(idx, EventKind::Fall);
        let a = &mut self.agents[idx];
        a.condition = Condition::Fallen;
        a.fallen_remaining = ticks.max(1);
        a.helped_by.clear();
    }

    /// The preferred cell holds a fallen agent. Reaction priority:
    /// help > jump over > wait for fallen > route around. Returns true if
    /// the agent moved and may keep spending credit this tick.
    fn fall_and_assist(&mut self, idx: usize, fallen_idx: usize, step: Step) -> bool {
        let p = self.agents[idx].propensities;
        if p.help {
            if !self.agents[fallen_idx].helped_by.contains(&idx) {
                self.agents[fallen_idx].fallen_remaining /= 2;
                self.agents[fallen_idx].helped_by.push(idx);
                self.log_event(idx, EventKind::Help);
            }
            self.agents[idx].condition = Condition::Helping;
            return false;
        }
        if p.jump_over {
            let cell = self.agents[idx].cell;
            let land = (cell.0 as i64 + 2 * step.dir.0 as i64, cell.1 as i64 + 2 * step.dir.1 as i64);
            let cost = 2.0 * step.cost;
            if self.grid.in_bounds(land.0, land.1) {
                let land = (land.0 as usize, land.1 as usize);
                let clear = self.grid.is_passable(land.0, land.1)
                    && self.is_enterable(land)
                    && !self.grid.cuts_corner(cell.0, cell.1, step.dir)
                    && !self.grid.cuts_corner(step.to.0, step.to.1, step.dir)
                    && self.agents[idx].credit >= cost;
                if clear {
                    self.log_event(idx, EventKind::JumpOver);
                    self.execute_move(idx, land, cost);
                    if self.try_exit(idx) {
                        return false;
                    }
                    return true;
                }
            }
        }
        if p.wait_for_fallen {
            self.agents[idx].condition = Condition::Waiting;
            self.log_event(idx, EventKind::WaitForFallen);
            return false;
        }
        // Route around: the fallen cell acts as a temporary obstacle.
        if let Some(alt) = self.detour_step(idx, step.to) {
            self.execute_move(idx, alt.to, alt.cost);
            if self.try_exit(idx) {
                return false;
            }
            return true;
        }
        self.agents[idx].condition = Condition::Waiting;
        self.log_event(idx, EventKind::Wait);
        false
    }

    fn process_agent(&mut self, idx: usize) {
        match self.agents[idx].condition {
            Condition::Exited => return,
            Condition::Fallen => {
                let a = &mut self.agents[idx];
                a.fallen_remaining = a.fallen_remaining.saturating_sub(1);
                if a.fallen_remaining == 0 {
                    a.condition = Condition::Moving;
                    a.helped_by.clear();
                }
                return;
            }
            _ => {}
        }
        self.agents[idx].condition = Condition::Moving;
        if self.try_exit(idx) {
            return;
        }
        let gain = credit_per_tick(self.agents[idx].speed_kmh, self.params.tick_s);
        {
            let a = &mut self.agents[idx];
            a.credit = (a.credit + gain).min(CREDIT_CAP);
        }

        loop {
            let a = &self.agents[idx];
            let f = &self.fields[a.target_exit];
            let d0 = f.dist(a.cell.0, a.cell.1);
            if !d0.is_finite() {
                self.agents[idx].condition = Condition::Waiting;
                self.log_event(idx, EventKind::Wait);
                break;
            }
            if self.obstacle_ahead(idx) {
                self.resolve_obstacle_block(idx);
            }
            let Some(step) = self.preferred_step(idx) else {
                // A finite field cell always has a descending neighbor;
                // this is unreachable but waiting keeps the tick total.
                self.agents[idx].condition = Condition::Waiting;
                self.log_event(idx, EventKind::Wait);
                break;
            };
            if self.agents[idx].credit < step.cost {
                break;
            }
            match self.occupant(step.to) {
                None if self.is_enterable(step.to) => {
                    self.execute_move(idx, step.to, step.cost);
                    if self.try_exit(idx) {
                        return;
                    }
                }
                None => {
                    // Vacated this very tick; brushing the departing agent
                    // counts as a collision with it.
                    self.resolve_agent_collision(idx, step.to);
                    break;
                }
                Some(other) if self.agents[other].condition == Condition::Fallen => {
                    let keep_going = self.fall_and_assist(idx, other, step);
                    if !keep_going {
                        break;
                    }
                }
                Some(_) => {
                    self.resolve_agent_collision(idx, step.to);
                    break;
                }
            }
            if self.agents[idx].condition == Condition::Exited {
                return;
            }
        }
    }

    #[cfg(test)]
    fn force_fall(&mut self, idx: usize, ticks: u32) {
        self.agents[idx].condition = Condition::Fallen;
        self.agents[idx].fallen_remaining = ticks;
    }
}

/// Everything one run produces.
pub struct SimOutput {
    pub summary: RunSummary,
    pub log: Vec<EventRecord>,
    pub roster: Vec<AgentProfile>,
    pub speeds: Vec<(String, f64)>,
    /// Params as actually used, with the effective seed substituted.
    pub effective_params: SimParams,
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("scenario validation failed:\n{0}")]
    Validation(ValidationReport),
    #[error(transparent)]
    Roster(#[from] crate::scenario::RosterError),
    #[error(transparent)]
    Fuzzy(#[from] fuzzy::FuzzyError),
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Full pipeline for one `(scenario, seed)` run:
/// roster → validate → rasterize → fields → speeds → engine → summary.
pub fn simulate(
    scenario: &Scenario,
    seed: u64,
    mut observe: impl FnMut(&Engine),
) -> Result<SimOutput, SimError> {
    let roster = scenario.materialize_roster(seed)?;
    let report = scenario.validate(&roster);
    if !report.is_empty() {
        return Err(SimError::Validation(report));
    }
    let grid = field::rasterize(&scenario.floor);
    let mut fields = Vec::new();
    for id in grid.exit_ids(ApertureKind::MainExit) {
        fields.push(field::compute_field(&grid, &id)?);
    }
    let config = scenario.fuzzy.clone().unwrap_or_default();
    let speeds = fuzzy::roster_speeds(&roster, &scenario.params, &config)?;
    let mut engine = Engine::new(grid, fields, &roster, &speeds, &scenario.params, seed)?;
    engine.run_with_observer(&mut observe);
    let ids: Vec<String> = roster.iter().map(|p| p.id.clone()).collect();
    let summary = metrics::summarize(engine.log(), &ids, scenario.params.tick_s, seed);
    let mut effective_params = scenario.params.clone();
    effective_params.seed = seed;
    Ok(SimOutput {
        summary,
        log: engine.log().to_vec(),
        roster,
        speeds,
        effective_params,
    })
}
