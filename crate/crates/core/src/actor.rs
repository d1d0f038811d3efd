//! Character pose and single-tile kinematics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::level::Level;

/// Compass facing, clockwise from north. North is `row - 1`, east is `col + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Facing {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Facing {
    pub const ALL: [Facing; 8] = [
        Facing::N,
        Facing::NE,
        Facing::E,
        Facing::SE,
        Facing::S,
        Facing::SW,
        Facing::W,
        Facing::NW,
    ];

    fn index(self) -> usize {
        self as usize
    }

    fn from_index(i: usize) -> Facing {
        Facing::ALL[i % 8]
    }

    /// `(drow, dcol)` of one step in this direction.
    pub fn delta(self) -> (i64, i64) {
        match self {
            Facing::N => (-1, 0),
            Facing::NE => (-1, 1),
            Facing::E => (0, 1),
            Facing::SE => (1, 1),
            Facing::S => (1, 0),
            Facing::SW => (1, -1),
            Facing::W => (0, -1),
            Facing::NW => (-1, -1),
        }
    }

    pub fn is_cardinal(self) -> bool {
        self.index().is_multiple_of(2)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Facing::N => "N",
            Facing::NE => "NE",
            Facing::E => "E",
            Facing::SE => "SE",
            Facing::S => "S",
            Facing::SW => "SW",
            Facing::W => "W",
            Facing::NW => "NW",
        }
    }
}

impl fmt::Display for Facing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Facing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Facing::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown facing {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum MoveMode {
    #[default]
    #[serde(rename = "four-way")]
    FourWay,
    #[serde(rename = "eight-way")]
    EightWay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TurnDir {
    Left,
    Right,
}

/// Where the character stands. `height` is the stack count of its cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActorState {
    pub row: u32,
    pub col: u32,
    pub height: u32,
    pub facing: Facing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockReason {
    /// The target cell is empty or off the grid.
    Void,
    /// Walking requires equal heights.
    HeightMismatch,
    /// Jumping requires a height change.
    FlatJump,
    /// Jumps climb at most one level.
    TooHigh,
}

impl BlockReason {
    pub fn as_str(self) -> &'static str {
        match self {
            BlockReason::Void => "void",
            BlockReason::HeightMismatch => "height_mismatch",
            BlockReason::FlatJump => "flat_jump",
            BlockReason::TooHigh => "too_high",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveResult {
    Moved(ActorState),
    Blocked(BlockReason),
}

impl ActorState {
    /// Cell one step ahead, or `None` when it would leave the non-negative quadrant.
    pub fn ahead(&self) -> Option<(u32, u32)> {
        let (dr, dc) = self.facing.delta();
        let row = u32::try_from(i64::from(self.row) + dr).ok()?;
        let col = u32::try_from(i64::from(self.col) + dc).ok()?;
        Some((row, col))
    }

    /// Height of the cell ahead; 0 when void.
    pub fn ahead_height(&self, level: &Level) -> u32 {
        self.ahead().map_or(0, |(r, c)| level.height_at(r, c))
    }

    fn moved_to(&self, level: &Level) -> Option<ActorState> {
        let (row, col) = self.ahead()?;
        Some(ActorState {
            row,
            col,
            height: level.height_at(row, col),
            facing: self.facing,
        })
    }
}

pub fn turn(state: ActorState, dir: TurnDir, mode: MoveMode) -> ActorState {
    let step = match mode {
        MoveMode::FourWay => 2,
        MoveMode::EightWay => 1,
    };
    let i = state.facing.index();
    let facing = match dir {
        TurnDir::Right => Facing::from_index(i + step),
        TurnDir::Left => Facing::from_index(i + 8 - step),
    };
    ActorState { facing, ..state }
}

pub fn forward(state: ActorState, level: &Level) -> MoveResult {
    let target = state.ahead_height(level);
    if target == 0 {
        MoveResult::Blocked(BlockReason::Void)
    } else if target != state.height {
        MoveResult::Blocked(BlockReason::HeightMismatch)
    } else {
        MoveResult::Moved(
            state
                .moved_to(level)
                .expect("non-void target is on the grid"),
        )
    }
}

/// Climbs exactly one level or drops any number of levels.
pub fn jump(state: ActorState, level: &Level) -> MoveResult {
    let target = state.ahead_height(level);
    if target == 0 {
        MoveResult::Blocked(BlockReason::Void)
    } else if target == state.height {
        MoveResult::Blocked(BlockReason::FlatJump)
    } else if target > state.height + 1 {
        MoveResult::Blocked(BlockReason::TooHigh)
    } else {
        MoveResult::Moved(
            state
                .moved_to(level)
                .expect("non-void target is on the grid"),
        )
    }
}
