//! Rasterization of the continuous floor plan to a 0.5 m cell grid, and
//! per-exit shortest-path distance fields over it. Fields are the routing
//! substrate: agents descend them greedily, and nearest-exit selection
//! compares them pointwise.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::scenario::{Aperture, FloorPlan, Rect};
use crate::scenario::{ValidationReport, Violation};

/// Cell edge length in meters.
pub const CELL_M: f64 = 0.5;

/// Orthogonal step cost in meters.
pub const ORTHO_COST_M: f64 = CELL_M;
/// Diagonal step cost in meters.
pub const DIAG_COST_M: f64 = CELL_M * std::f64::consts::SQRT_2;

/// The eight movement directions in tie-break order:
/// N, NE, E, SE, S, SW, W, NW (row axis points north).
pub const DIRECTIONS: [(i32, i32); 8] =
    [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)];

/// Step cost of a direction in meters.
pub fn step_cost_m(dir: (i32, i32)) -> f64 {
    if dir.0 != 0 && dir.1 != 0 {
        DIAG_COST_M
    } else {
        ORTHO_COST_M
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Walkable,
    Wall,
    Obstacle,
    /// Door cell; the index points into [`Grid::exits`].
    Door(u16),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExitInfo {
    pub id: String,
    pub kind: crate::scenario::ApertureKind,
}

/// Rasterized floor: row-major cells, row 0 at the south edge.
#[derive(Debug, Clone)]
pub struct Grid {
    pub cols: usize,
    pub rows: usize,
    cells: Vec<CellKind>,
    exits: Vec<ExitInfo>,
}

impl Grid {
    #[inline]
    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.cols + col
    }

    #[inline]
    pub fn kind(&self, col: usize, row: usize) -> CellKind {
        self.cells[self.index(col, row)]
    }

    pub fn in_bounds(&self, col: i64, row: i64) -> bool {
        col >= 0 && row >= 0 && (col as usize) < self.cols && (row as usize) < self.rows
    }

    /// Walkable or door: a cell an agent may stand on.
    pub fn is_passable(&self, col: usize, row: usize) -> bool {
        matches!(self.kind(col, row), CellKind::Walkable | CellKind::Door(_))
    }

    pub fn exits(&self) -> &[ExitInfo] {
        &self.exits
    }

    pub fn exit_ids(&self, kind: crate::scenario::ApertureKind) -> Vec<String> {
        self.exits.iter().filter(|e| e.kind == kind).map(|e| e.id.clone()).collect()
    }

    /// Door cells of one exit, row-major order.
    pub fn door_cells(&self, exit_id: &str) -> Vec<(usize, usize)> {
        let Some(idx) = self.exits.iter().position(|e| e.id == exit_id) else {
            return Vec::new();
        };
        let idx = idx as u16;
        let mut cells = Vec::new();
        for row in 0..self.rows {
            for col in 0..self.cols {
                if self.kind(col, row) == CellKind::Door(idx) {
                    cells.push((col, row));
                }
            }
        }
        cells
    }

    /// Center of a cell in meters.
    pub fn cell_center_m(&self, col: usize, row: usize) -> (f64, f64) {
        (col as f64 * CELL_M + CELL_M / 2.0, row as f64 * CELL_M + CELL_M / 2.0)
    }

    /// Cell containing a point, clamped into bounds.
    pub fn cell_of_point(&self, x: f64, y: f64) -> (usize, usize) {
        let col = ((x / CELL_M).floor() as i64).clamp(0, self.cols as i64 - 1) as usize;
        let row = ((y / CELL_M).floor() as i64).clamp(0, self.rows as i64 - 1) as usize;
        (col, row)
    }

    /// Whether the diagonal step from `(col, row)` in `dir` cuts a blocked
    /// corner. Orthogonal steps never do.
    pub fn cuts_corner(&self, col: usize, row: usize, dir: (i32, i32)) -> bool {
        if dir.0 == 0 || dir.1 == 0 {
            return false;
        }
        let side_a = (col as i64 + dir.0 as i64, row as i64);
        let side_b = (col as i64, row as i64 + dir.1 as i64);
        for (c, r) in [side_a, side_b] {
            if !self.in_bounds(c, r) || !self.is_passable(c as usize, r as usize) {
                return true;
            }
        }
        false
    }

    /// Walkable cells whose center lies inside `rect`, row-major order.
    /// Door cells are excluded: agents may pass through but not start there.
    pub fn walkable_cells_in(&self, rect: &Rect) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        for row in 0..self.rows {
            for col in 0..self.cols {
                let (x, y) = self.cell_center_m(col, row);
                if rect.contains(x, y) && self.kind(col, row) == CellKind::Walkable {
                    cells.push((col, row));
                }
            }
        }
        cells
    }
}

/// Shortest-path distance in meters from every cell to one exit's door
/// cells. Wall and obstacle cells carry infinity.
#[derive(Debug, Clone)]
pub struct FieldMap {
    pub exit_id: String,
    pub cols: usize,
    pub rows: usize,
    dist: Vec<f64>,
}

impl FieldMap {
    #[inline]
    pub fn dist(&self, col: usize, row: usize) -> f64 {
        self.dist[row * self.cols + col]
    }

    /// CSV matrix, row 0 first; blocked cells print as "inf".
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|col| {
                    let d = self.dist(col, row);
                    if d.is_finite() {
                        format!("{d:.4}")
                    } else {
                        "inf".to_string()
                    }
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("unknown exit id: {0}")]
    UnknownExit(String),
    #[error("cell is unreachable from every exit")]
    Unreachable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Orientation {
    Vertical,
    Horizontal,
}

// Wall lines an aperture may sit on: the four floor edges plus each
// region's four edges. Returns (orientation, axis position, span along it).
fn wall_lines(plan: &FloorPlan) -> Vec<(Orientation, f64, f64, f64)> {
    let mut lines = vec![
        (Orientation::Horizontal, 0.0, 0.0, plan.width_m),
        (Orientation::Horizontal, plan.length_m, 0.0, plan.width_m),
        (Orientation::Vertical, 0.0, 0.0, plan.length_m),
        (Orientation::Vertical, plan.width_m, 0.0, plan.length_m),
    ];
    for region in &plan.regions {
        let r = region.rect();
        lines.push((Orientation::Horizontal, r.y, r.x, r.x + r.width_m));
        lines.push((Orientation::Horizontal, r.y + r.length_m, r.x, r.x + r.width_m));
        lines.push((Orientation::Vertical, r.x, r.y, r.y + r.length_m));
        lines.push((Orientation::Vertical, r.x + r.width_m, r.y, r.y + r.length_m));
    }
    lines
}

/// The wall line an aperture sits on (nearest by perpendicular distance).
pub(crate) fn aperture_wall(plan: &FloorPlan, ap: &Aperture) -> (f64, bool) {
    let mut best = (f64::INFINITY, Orientation::Vertical);
    for (orient, pos, lo, hi) in wall_lines(plan) {
        let (perp, along) = match orient {
            Orientation::Vertical => (ap.center[0], ap.center[1]),
            Orientation::Horizontal => (ap.center[1], ap.center[0]),
        };
        if along < lo - 1e-9 || along > hi + 1e-9 {
            continue;
        }
        let d = (perp - pos).abs();
        if d < best.0 {
            best = (d, orient);
        }
    }
    (best.0, best.1 == Orientation::Vertical)
}

fn paint_door(grid: &mut Grid, plan: &FloorPlan, ap: &Aperture, exit_idx: u16) {
    let (_, vertical) = aperture_wall(plan, ap);
    // One cell of clearance either side of the wall line, the aperture
    // width along it.
    let rect = if vertical {
        Rect {
            x: ap.center[0] - CELL_M,
            y: ap.center[1] - ap.width_m / 2.0,
            width_m: 2.0 * CELL_M,
            length_m: ap.width_m,
        }
    } else {
        Rect {
            x: ap.center[0] - ap.width_m / 2.0,
            y: ap.center[1] - CELL_M,
            width_m: ap.width_m,
            length_m: 2.0 * CELL_M,
        }
    };
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            let (x, y) = grid.cell_center_m(col, row);
            if rect.contains(x, y) {
                let idx = grid.index(col, row);
                if matches!(grid.cells[idx], CellKind::Wall | CellKind::Walkable) {
                    grid.cells[idx] = CellKind::Door(exit_idx);
                }
            }
        }
    }
}

/// Rasterize a validated floor plan: perimeter and region-boundary cells
/// become walls, apertures punch door cells through them, and cells whose
/// center lies inside an obstacle rectangle become obstacles.
pub fn rasterize(plan: &FloorPlan) -> Grid {
    let cols = (plan.width_m / CELL_M).ceil() as usize;
    let rows = (plan.length_m / CELL_M).ceil() as usize;
    let mut grid = Grid {
        cols,
        rows,
        cells: vec![CellKind::Walkable; cols * rows],
        exits: Vec::new(),
    };

    // Floor perimeter.
    for row in 0..rows {
        for col in 0..cols {
            if row == 0 || row == rows - 1 || col == 0 || col == cols - 1 {
                let idx = grid.index(col, row);
                grid.cells[idx] = CellKind::Wall;
            }
        }
    }

    // Region boundaries: the one-cell ring just inside each region rect.
    for region in &plan.regions {
        let r = region.rect();
        let mut ring: Option<(usize, usize, usize, usize)> = None;
        for row in 0..rows {
            for col in 0..cols {
                let (x, y) = grid.cell_center_m(col, row);
                if r.contains(x, y) {
                    ring = Some(match ring {
                        None => (col, col, row, row),
                        Some((c0, c1, r0, r1)) => (c0.min(col), c1.max(col), r0.min(row), r1.max(row)),
                    });
                }
            }
        }
        if let Some((c0, c1, r0, r1)) = ring {
            for row in r0..=r1 {
                for col in c0..=c1 {
                    if col == c0 || col == c1 || row == r0 || row == r1 {
                        let idx = grid.index(col, row);
                        grid.cells[idx] = CellKind::Wall;
                    }
                }
            }
        }
    }

    // Doors, overriding walls. Room exits first (region order), then
    // main exits, matching FloorPlan::apertures.
    let apertures: Vec<Aperture> = plan.apertures().cloned().collect();
    for ap in &apertures {
        let exit_idx = grid.exits.len() as u16;
        grid.exits.push(ExitInfo { id: ap.id.clone(), kind: ap.kind });
        paint_door(&mut grid, plan, ap, exit_idx);
    }

    // Obstacles claim walkable cells by center-point containment.
    for obstacle in &plan.obstacles {
        let r = obstacle.rect();
        for row in 0..rows {
            for col in 0..cols {
                let (x, y) = grid.cell_center_m(col, row);
                if r.contains(x, y) {
                    let idx = grid.index(col, row);
                    if grid.cells[idx] == CellKind::Walkable {
                        grid.cells[idx] = CellKind::Obstacle;
                    }
                }
            }
        }
    }

    grid
}

#[derive(PartialEq)]
struct HeapEntry(f64, usize);

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact shortest-path distances from one exit's door cells over all
/// passable cells: 8-connected Dijkstra, orthogonal steps 0.5 m, diagonal
/// steps 0.5·√2 m, no corner cutting.
pub fn compute_field(grid: &Grid, exit_id: &str) -> Result<FieldMap, FieldError> {
    if !grid.exits.iter().any(|e| e.id == exit_id) {
        return Err(FieldError::UnknownExit(exit_id.to_string()));
    }
    let mut dist = vec![f64::INFINITY; grid.cols * grid.rows];
    let mut heap = BinaryHeap::new();
    for (col, row) in grid.door_cells(exit_id) {
        let idx = grid.index(col, row);
        dist[idx] = 0.0;
        heap.push(Reverse(HeapEntry(0.0, idx)));
    }
    while let Some(Reverse(HeapEntry(d, idx))) = heap.pop() {
        if d > dist[idx] {
            continue;
        }
        let (col, row) = (idx % grid.cols, idx / grid.cols);
        for dir in DIRECTIONS {
            let (nc, nr) = (col as i64 + dir.0 as i64, row as i64 + dir.1 as i64);
            if !grid.in_bounds(nc, nr) {
                continue;
            }
            let (nc, nr) = (nc as usize, nr as usize);
            if !grid.is_passable(nc, nr) || grid.cuts_corner(col, row, dir) {
                continue;
            }
            let next = d + step_cost_m(dir);
            let nidx = grid.index(nc, nr);
            if next < dist[nidx] {
                dist[nidx] = next;
                heap.push(Reverse(HeapEntry(next, nidx)));
            }
        }
    }
    Ok(FieldMap { exit_id: exit_id.to_string(), cols: grid.cols, rows: grid.rows, dist })
}

/// The exit whose field is smallest at `cell`; ties go to the
/// lexicographically lowest exit id.
pub fn nearest_exit(fields: &[FieldMap], cell: (usize, usize)) -> Result<String, FieldError> {
    let mut best: Option<(f64, &str)> = None;
    for f in fields {
        let d = f.dist(cell.0, cell.1);
        if !d.is_finite() {
            continue;
        }
        best = match best {
            None => Some((d, &f.exit_id)),
            Some((bd, bid)) => {
                if d < bd || (d == bd && f.exit_id.as_str() < bid) {
                    Some((d, &f.exit_id))
                } else {
                    Some((bd, bid))
                }
            }
        };
    }
    best.map(|(_, id)| id.to_string()).ok_or(FieldError::Unreachable)
}

/// Reports every walkable cell that no field reaches. An empty report
/// means the whole floor can evacuate.
pub fn reachability_check(grid: &Grid, fields: &[FieldMap]) -> ValidationReport {
    let mut report = ValidationReport::default();
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            if grid.kind(col, row) != CellKind::Walkable {
                continue;
            }
            let reachable = fields.iter().any(|f| f.dist(col, row).is_finite());
            if !reachable {
                report.violations.push(Violation {
                    entity: format!("cell ({col}, {row})"),
                    message: "walkable cell unreachable from every main exit".to_string(),
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{ApertureKind, ObstacleRect};

    fn open_plan(width_m: f64, length_m: f64, exits: Vec<Aperture>) -> FloorPlan {
        FloorPlan { width_m, length_m, regions: Vec::new(), main_exits: exits, obstacles: Vec::new() }
    }

    fn main_exit(id: &str, center: [f64; 2], width_m: f64) -> Aperture {
        Aperture { id: id.into(), center, width_m, kind: ApertureKind::MainExit }
    }

    #[test]
    fn cafeteria_dimensions_rasterize_to_72_by_30() {
        let plan = open_plan(36.0, 15.0, vec![main_exit("M1", [18.0, 15.0], 2.5)]);
        let grid = rasterize(&plan);
        assert_eq!((grid.cols, grid.rows), (72, 30));
    }

    #[test]
    fn a_2_5_m_perimeter_aperture_owns_five_door_cells() {
        let plan = open_plan(36.0, 15.0, vec![main_exit("M1", [18.0, 15.0], 2.5)]);
        let grid = rasterize(&plan);
        assert_eq!(grid.door_cells("M1").len(), 5);
    }

    #[test]
    fn degenerate_1_by_1_floor_is_all_boundary_wall() {
        let plan = open_plan(1.0, 1.0, Vec::new());
        let grid = rasterize(&plan);
        assert_eq!((grid.cols, grid.rows), (2, 2));
        for row in 0..2 {
            for col in 0..2 {
                assert_eq!(grid.kind(col, row), CellKind::Wall);
            }
        }
    }

    #[test]
    fn straight_corridor_distance_is_steps_times_half_meter() {
        // 1.5 m tall corridor: a single walkable row inside the walls.
        let plan = open_plan(12.0, 1.5, vec![main_exit("M1", [0.0, 0.75], 0.5)]);
        let grid = rasterize(&plan);
        let field = compute_field(&grid, "M1").unwrap();
        let doors = grid.door_cells("M1");
        assert_eq!(doors.len(), 1);
        let (dc, dr) = doors[0];
        assert_eq!(field.dist(dc, dr), 0.0);
        // Ten orthogonal steps east of the door.
        assert_eq!(field.dist(dc + 10, dr), 5.0);
    }

    #[test]
    fn unknown_exit_is_an_error() {
        let plan = open_plan(4.0, 4.0, vec![main_exit("M1", [2.0, 4.0], 1.0)]);
        let grid = rasterize(&plan);
        assert!(matches!(compute_field(&grid, "nope"), Err(FieldError::UnknownExit(_))));
    }

    #[test]
    fn nearest_exit_prefers_smaller_distance_then_lower_id() {
        let plan = open_plan(
            10.0,
            5.0,
            vec![main_exit("E2", [1.0, 5.0], 1.0), main_exit("E1", [9.0, 5.0], 1.0)],
        );
        let grid = rasterize(&plan);
        let fields = vec![compute_field(&grid, "E1").unwrap(), compute_field(&grid, "E2").unwrap()];
        // Close to E2, far from E1.
        let near_e2 = grid.cell_of_point(1.0, 4.0);
        assert_eq!(nearest_exit(&fields, near_e2).unwrap(), "E2");
        // Opposite corner prefers E1.
        let near_e1 = grid.cell_of_point(9.0, 4.0);
        assert_eq!(nearest_exit(&fields, near_e1).unwrap(), "E1");
    }

    #[test]
    fn equidistant_cell_breaks_tie_to_lowest_id() {
        let plan = open_plan(
            11.0,
            5.0,
            vec![main_exit("E2", [1.25, 5.0], 0.5), main_exit("E1", [9.25, 5.0], 0.5)],
        );
        let grid = rasterize(&plan);
        let fields = vec![compute_field(&grid, "E1").unwrap(), compute_field(&grid, "E2").unwrap()];
        // Midpoint of the two door columns, same row offset to each.
        let d1 = grid.door_cells("E1")[0];
        let d2 = grid.door_cells("E2")[0];
        let mid_col = (d1.0 + d2.0) / 2;
        let cell = (mid_col, d1.1 - 2);
        let f1 = fields[0].dist(cell.0, cell.1);
        let f2 = fields[1].dist(cell.0, cell.1);
        assert_eq!(f1, f2, "test geometry should be symmetric");
        assert_eq!(nearest_exit(&fields, cell).unwrap(), "E1");
    }

    #[test]
    fn sealed_floor_reports_every_walkable_cell() {
        let plan = open_plan(3.0, 3.0, Vec::new());
        let grid = rasterize(&plan);
        let report = reachability_check(&grid, &[]);
        let walkable = (0..grid.rows)
            .flat_map(|r| (0..grid.cols).map(move |c| (c, r)))
            .filter(|&(c, r)| grid.kind(c, r) == CellKind::Walkable)
            .count();
        assert!(walkable > 0);
        assert_eq!(report.violations.len(), walkable);
    }

    #[test]
    fn pocket_walled_off_by_obstacles_is_reported() {
        // Obstacle frame sealing the NE corner of an open room.
        let mut plan = open_plan(6.0, 6.0, vec![main_exit("M1", [3.0, 0.0], 1.0)]);
        plan.obstacles = vec![
            ObstacleRect { origin: [3.5, 3.5], width_m: 0.5, length_m: 2.0 },
            ObstacleRect { origin: [3.5, 3.5], width_m: 2.0, length_m: 0.5 },
        ];
        let grid = rasterize(&plan);
        let field = compute_field(&grid, "M1").unwrap();
        let report = reachability_check(&grid, std::slice::from_ref(&field));
        // The pocket is the walkable area north-east of the L frame.
        assert!(!report.violations.is_empty());
        assert!(report.violations.len() < 20);
    }

    /// Independent exhaustive relaxation: keeps sweeping every cell/direction
    /// until no distance improves. Legality rules are recomputed from the
    /// cell kinds, not shared with compute_field.
    fn brute_force_field(grid: &Grid, exit_id: &str) -> Vec<f64> {
        let passable = |c: i64, r: i64| -> bool {
            c >= 0
                && r >= 0
                && (c as usize) < grid.cols
                && (r as usize) < grid.rows
                && matches!(grid.kind(c as usize, r as usize), CellKind::Walkable | CellKind::Door(_))
        };
        let mut dist = vec![f64::INFINITY; grid.cols * grid.rows];
        for (c, r) in grid.door_cells(exit_id) {
            dist[r * grid.cols + c] = 0.0;
        }
        loop {
            let mut changed = false;
            for row in 0..grid.rows as i64 {
                for col in 0..grid.cols as i64 {
                    if !passable(col, row) {
                        continue;
                    }
                    for (dc, dr) in [
                        (0i64, 1i64),
                        (1, 1),
                        (1, 0),
                        (1, -1),
                        (0, -1),
                        (-1, -1),
                        (-1, 0),
                        (-1, 1),
                    ] {
                        let (nc, nr) = (col + dc, row + dr);
                        if !passable(nc, nr) {
                            continue;
                        }
                        if dc != 0 && dr != 0 && (!passable(col + dc, row) || !passable(col, row + dr)) {
                            continue;
                        }
                        let w = if dc != 0 && dr != 0 { DIAG_COST_M } else { ORTHO_COST_M };
                        let cand = dist[(nr as usize) * grid.cols + nc as usize] + w;
                        let here = &mut dist[(row as usize) * grid.cols + col as usize];
                        if cand < *here {
                            *here = cand;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        dist
    }

    fn random_small_grid(seed: u64) -> (Grid, String) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let width = rng.gen_range(3..=6) as f64;
        let length = rng.gen_range(3..=6) as f64;
        let door_x = (rng.gen_range(2..(width * 2.0) as u32 - 1)) as f64 * 0.5 + 0.25;
        let mut plan = open_plan(width, length, vec![main_exit("X", [door_x, 0.0], 0.5)]);
        for _ in 0..rng.gen_range(0..6) {
            let ox = rng.gen_range(1..(width * 2.0) as u32 - 2) as f64 * 0.5;
            let oy = rng.gen_range(1..(length * 2.0) as u32 - 2) as f64 * 0.5;
            plan.obstacles.push(ObstacleRect {
                origin: [ox, oy],
                width_m: rng.gen_range(1..=3) as f64 * 0.5,
                length_m: rng.gen_range(1..=3) as f64 * 0.5,
            });
        }
        (rasterize(&plan), "X".to_string())
    }

    #[test]
    fn dijkstra_matches_brute_force_on_random_grids() {
        for seed in 0..50 {
            let (grid, exit) = random_small_grid(seed);
            if grid.door_cells(&exit).is_empty() {
                continue;
            }
            let field = compute_field(&grid, &exit).unwrap();
            let oracle = brute_force_field(&grid, &exit);
            for row in 0..grid.rows {
                for col in 0..grid.cols {
                    let a = field.dist(col, row);
                    let b = oracle[row * grid.cols + col];
                    assert!(
                        (a.is_infinite() && b.is_infinite()) || a == b,
                        "seed {seed} cell ({col},{row}): dijkstra {a} vs brute force {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn descent_and_step_bound_hold_everywhere() {
        for seed in 0..20 {
            let (grid, exit) = random_small_grid(seed + 100);
            if grid.door_cells(&exit).is_empty() {
                continue;
            }
            let field = compute_field(&grid, &exit).unwrap();
            for row in 0..grid.rows {
                for col in 0..grid.cols {
                    let d = field.dist(col, row);
                    if !d.is_finite() || !grid.is_passable(col, row) {
                        continue;
                    }
                    let mut has_descent = d == 0.0;
                    for dir in DIRECTIONS {
                        let (nc, nr) = (col as i64 + dir.0 as i64, row as i64 + dir.1 as i64);
                        if !grid.in_bounds(nc, nr) || !grid.is_passable(nc as usize, nr as usize) {
                            continue;
                        }
                        if grid.cuts_corner(col, row, dir) {
                            continue;
                        }
                        let nd = field.dist(nc as usize, nr as usize);
                        if nd < d {
                            has_descent = true;
                        }
                        // Neighbors differ by at most one step cost.
                        if nd.is_finite() {
                            assert!((nd - d).abs() <= step_cost_m(dir) + 1e-12);
                        }
                    }
                    assert!(has_descent, "seed {seed}: no descent at ({col},{row}) d={d}");
                }
            }
        }
    }
}
