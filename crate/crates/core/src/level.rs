//! Level model: height matrix, start pose, goals and slot limits.
//!
//! A cell value `n` stacks `n` tiles on that cell; `0` leaves it empty.
//! Anything outside the matrix reads as empty.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::actor::{ActorState, Facing, MoveMode};
use crate::grid::{grid_to_screen, GridCoord, ScreenCoord, TileDims};

pub const MAX_HEIGHT: u32 = 8;
pub const MAX_PROCEDURES: usize = 2;
pub const DEFAULT_MAIN_SLOTS: u32 = 12;
pub const DEFAULT_PROC_SLOTS: u32 = 8;
pub const DEFAULT_STEP_LIMIT: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("height matrix has no rows or no columns")]
    EmptyMatrix,
    #[error("level has no walkable tiles")]
    NoWalkableTiles,
    #[error("height {height} at ({row},{col}) exceeds the maximum of {MAX_HEIGHT}")]
    HeightTooLarge { row: usize, col: usize, height: u32 },
    #[error("start ({row},{col}) is not on a tile")]
    StartOnVoid { row: u32, col: u32 },
    #[error("goal ({row},{col}) is not on a tile")]
    GoalOnVoid { row: u32, col: u32 },
    #[error("level needs at least one goal")]
    NoGoals,
    #[error("at most {MAX_PROCEDURES} procedures are supported (got {0})")]
    TooManyProcedures(usize),
    #[error("step_limit must be at least 1")]
    ZeroStepLimit,
    #[error("start facing {0} is diagonal but the level is four-way")]
    DiagonalStart(Facing),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: heights row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid level: {0}")]
    Validation(#[from] ValidationError),
}

impl From<serde_json::Error> for LevelError {
    fn from(e: serde_json::Error) -> Self {
        LevelError::Schema {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotLimits {
    #[serde(default = "default_main")]
    pub main: u32,
    #[serde(default = "default_procs")]
    pub procs: Vec<u32>,
    #[serde(default = "default_step_limit")]
    pub step_limit: u32,
}

fn default_main() -> u32 {
    DEFAULT_MAIN_SLOTS
}

fn default_procs() -> Vec<u32> {
    vec![DEFAULT_PROC_SLOTS; MAX_PROCEDURES]
}

fn default_step_limit() -> u32 {
    DEFAULT_STEP_LIMIT
}

impl Default for SlotLimits {
    fn default() -> Self {
        SlotLimits {
            main: DEFAULT_MAIN_SLOTS,
            procs: default_procs(),
            step_limit: DEFAULT_STEP_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    pub row: u32,
    pub col: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartPose {
    pub row: u32,
    pub col: u32,
    pub facing: Facing,
}

/// On-disk shape of a level file.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    heights: Vec<Vec<u32>>,
    start: StartPose,
    goals: Vec<Cell>,
    #[serde(default)]
    limits: SlotLimits,
    #[serde(default)]
    dims: TileDims,
    #[serde(default)]
    mode: MoveMode,
}

/// A validated, immutable level.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    name: Option<String>,
    note: Option<String>,
    heights: Vec<Vec<u32>>,
    start: StartPose,
    goals: Vec<Cell>,
    limits: SlotLimits,
    dims: TileDims,
    mode: MoveMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TilePlacement {
    pub cell: GridCoord,
    pub screen: ScreenCoord,
    pub name: String,
}

impl Level {
    pub fn new(
        heights: Vec<Vec<u32>>,
        start: StartPose,
        goals: impl IntoIterator<Item = Cell>,
        limits: SlotLimits,
        dims: TileDims,
        mode: MoveMode,
    ) -> Result<Level, LevelError> {
        let rows = heights.len();
        let cols = heights.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(ValidationError::EmptyMatrix.into());
        }
        for (row, r) in heights.iter().enumerate() {
            if r.len() != cols {
                return Err(LevelError::RaggedRow {
                    row,
                    expected: cols,
                    found: r.len(),
                });
            }
            for (col, &height) in r.iter().enumerate() {
                if height > MAX_HEIGHT {
                    return Err(ValidationError::HeightTooLarge { row, col, height }.into());
                }
            }
        }
        if heights.iter().flatten().all(|&h| h == 0) {
            return Err(ValidationError::NoWalkableTiles.into());
        }
        let goals: Vec<Cell> = goals
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let level = Level {
            name: None,
            note: None,
            heights,
            start,
            goals,
            limits,
            dims,
            mode,
        };
        if level.height_at(start.row, start.col) == 0 {
            return Err(ValidationError::StartOnVoid {
                row: start.row,
                col: start.col,
            }
            .into());
        }
        if level.mode == MoveMode::FourWay && !start.facing.is_cardinal() {
            return Err(ValidationError::DiagonalStart(start.facing).into());
        }
        if level.goals.is_empty() {
            return Err(ValidationError::NoGoals.into());
        }
        if let Some(g) = level
            .goals
            .iter()
            .find(|g| level.height_at(g.row, g.col) == 0)
        {
            return Err(ValidationError::GoalOnVoid {
                row: g.row,
                col: g.col,
            }
            .into());
        }
        if level.limits.procs.len() > MAX_PROCEDURES {
            return Err(ValidationError::TooManyProcedures(level.limits.procs.len()).into());
        }
        if level.limits.step_limit == 0 {
            return Err(ValidationError::ZeroStepLimit.into());
        }
        Ok(level)
    }

    /// Level with default limits, starting on the first tile (row-major) facing
    /// east, with the last tile as the only goal.
    pub fn from_heights(heights: Vec<Vec<u32>>) -> Result<Level, LevelError> {
        let walkable: Vec<(u32, u32)> = heights
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &h)| h > 0)
                    .map(move |(c, _)| (r as u32, c as u32))
            })
            .collect();
        let first = walkable.first().copied().unwrap_or((0, 0));
        let last = walkable.last().copied().unwrap_or((0, 0));
        Level::new(
            heights,
            StartPose {
                row: first.0,
                col: first.1,
                facing: Facing::E,
            },
            [Cell {
                row: last.0,
                col: last.1,
            }],
            SlotLimits::default(),
            TileDims::default(),
            MoveMode::FourWay,
        )
    }

    pub fn with_start(self, start: StartPose) -> Result<Level, LevelError> {
        self.rebuild(|l| l.start = start)
    }

    pub fn with_goals(self, goals: impl IntoIterator<Item = Cell>) -> Result<Level, LevelError> {
        let goals: Vec<Cell> = goals.into_iter().collect();
        self.rebuild(move |l| l.goals = goals)
    }

    pub fn with_limits(self, limits: SlotLimits) -> Result<Level, LevelError> {
        self.rebuild(move |l| l.limits = limits)
    }

    pub fn with_mode(self, mode: MoveMode) -> Result<Level, LevelError> {
        self.rebuild(|l| l.mode = mode)
    }

    pub fn with_dims(self, dims: TileDims) -> Result<Level, LevelError> {
        self.rebuild(|l| l.dims = dims)
    }

    fn rebuild(mut self, f: impl FnOnce(&mut Level)) -> Result<Level, LevelError> {
        f(&mut self);
        let (name, note) = (self.name.take(), self.note.take());
        let mut l = Level::new(
            self.heights,
            self.start,
            self.goals,
            self.limits,
            self.dims,
            self.mode,
        )?;
        l.name = name;
        l.note = note;
        Ok(l)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    pub fn rows(&self) -> usize {
        self.heights.len()
    }

    pub fn cols(&self) -> usize {
        self.heights[0].len()
    }

    pub fn heights(&self) -> &[Vec<u32>] {
        &self.heights
    }

    pub fn start(&self) -> StartPose {
        self.start
    }

    pub fn start_state(&self) -> ActorState {
        ActorState {
            row: self.start.row,
            col: self.start.col,
            height: self.height_at(self.start.row, self.start.col),
            facing: self.start.facing,
        }
    }

    /// Goal cells, sorted and without duplicates.
    pub fn goals(&self) -> &[Cell] {
        &self.goals
    }

    pub fn is_goal(&self, row: u32, col: u32) -> bool {
        self.goals.binary_search(&Cell { row, col }).is_ok()
    }

    pub fn limits(&self) -> &SlotLimits {
        &self.limits
    }

    pub fn dims(&self) -> &TileDims {
        &self.dims
    }

    pub fn mode(&self) -> MoveMode {
        self.mode
    }

    pub fn height_at(&self, row: u32, col: u32) -> u32 {
        self.heights
            .get(row as usize)
            .and_then(|r| r.get(col as usize))
            .copied()
            .unwrap_or(0)
    }

    /// Height at a possibly negative position; off-grid reads as 0.
    pub fn cell_height(&self, row: i64, col: i64) -> u32 {
        match (u32::try_from(row), u32::try_from(col)) {
            (Ok(r), Ok(c)) => self.height_at(r, c),
            _ => 0,
        }
    }

    pub fn total_tiles(&self) -> u64 {
        self.heights.iter().flatten().map(|&h| u64::from(h)).sum()
    }

    pub fn walkable_cells(&self) -> usize {
        self.heights.iter().flatten().filter(|&&h| h > 0).count()
    }

    /// Highest cell; the first one in row-major order on ties.
    pub fn max_height(&self) -> (u32, Cell) {
        let mut best = (0, Cell { row: 0, col: 0 });
        for (r, row) in self.heights.iter().enumerate() {
            for (c, &h) in row.iter().enumerate() {
                if h > best.0 {
                    best = (
                        h,
                        Cell {
                            row: r as u32,
                            col: c as u32,
                        },
                    );
                }
            }
        }
        best
    }

    /// One placement per stacked tile, row-major, stack ascending.
    pub fn build_world(&self) -> Vec<TilePlacement> {
        let mut out = Vec::with_capacity(self.total_tiles() as usize);
        for (r, row) in self.heights.iter().enumerate() {
            for (c, &h) in row.iter().enumerate() {
                for t in 0..h {
                    let cell = GridCoord::new(r as u32, c as u32, t);
                    out.push(TilePlacement {
                        cell,
                        screen: grid_to_screen(cell, &self.dims),
                        name: format!("tile{c}{r}"),
                    });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let file = LevelFile {
            name: self.name.clone(),
            note: self.note.clone(),
            heights: self.heights.clone(),
            start: self.start,
            goals: self.goals.clone(),
            limits: self.limits.clone(),
            dims: self.dims,
            mode: self.mode,
        };
        serde_json::to_string_pretty(&file).expect("level serializes")
    }
}

pub fn parse_level(text: &str) -> Result<Level, LevelError> {
    let file: LevelFile = serde_json::from_str(text)?;
    let mut level = Level::new(
        file.heights,
        file.start,
        file.goals,
        file.limits,
        file.dims,
        file.mode,
    )?;
    level.name = file.name;
    level.note = file.note;
    Ok(level)
}

pub fn serialize_level(level: &Level) -> String {
    level.to_json()
}

/// The two reference height matrices: a flat lattice and its stacked variant.
pub mod arrays {
    pub const FLAT: [[u32; 5]; 7] = [
        [1, 1, 1, 1, 1],
        [1, 0, 1, 0, 1],
        [1, 0, 1, 0, 1],
        [1, 1, 1, 1, 1],
        [1, 0, 1, 0, 1],
        [1, 0, 1, 0, 1],
        [1, 1, 1, 1, 1],
    ];

    pub const STAIRS: [[u32; 5]; 7] = [
        [1, 1, 1, 1, 1],
        [1, 0, 2, 0, 1],
        [1, 0, 2, 0, 1],
        [1, 2, 3, 2, 1],
        [1, 0, 2, 0, 1],
        [1, 0, 2, 0, 1],
        [1, 1, 1, 1, 1],
    ];

    pub fn to_vec<const C: usize>(a: &[[u32; C]]) -> Vec<Vec<u32>> {
        a.iter().map(|r| r.to_vec()).collect()
    }
}
