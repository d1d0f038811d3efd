//! Near-isometric (2:1) coordinate math.
//!
//! Cells are addressed by `(row, col, stack)`. Moving one column to the right
//! on the grid moves the projected point half a diamond to the right and a
//! quarter diamond down; moving one row moves it half a diamond to the left
//! and a quarter diamond down. Each stack level lifts the point by
//! [`TileDims::level_step`]. Screen `y` is up-positive.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DimsError {
    #[error("diamond_width must be finite and > 0 (got {0})")]
    DiamondWidth(f64),
    #[error("space_height must be finite and >= 0 (got {0})")]
    SpaceHeight(f64),
    #[error("sprite_height ({sprite}) must be finite and greater than space_height ({space})")]
    SpriteHeight { sprite: f64, space: f64 },
}

/// Tile geometry in world units.
///
/// `diamond_width` is the full width of a tile's top diamond, `sprite_height`
/// the full height of the tile sprite and `space_height` the part of the sprite
/// that does not contribute to stacking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDims", into = "RawDims")]
pub struct TileDims {
    diamond_width: f64,
    sprite_height: f64,
    space_height: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDims {
    diamond_width: f64,
    sprite_height: f64,
    space_height: f64,
}

impl TryFrom<RawDims> for TileDims {
    type Error = DimsError;

    fn try_from(raw: RawDims) -> Result<Self, Self::Error> {
        TileDims::new(raw.diamond_width, raw.sprite_height, raw.space_height)
    }
}

impl From<TileDims> for RawDims {
    fn from(d: TileDims) -> Self {
        RawDims {
            diamond_width: d.diamond_width,
            sprite_height: d.sprite_height,
            space_height: d.space_height,
        }
    }
}

impl Default for TileDims {
    fn default() -> Self {
        TileDims {
            diamond_width: 64.0,
            sprite_height: 48.0,
            space_height: 16.0,
        }
    }
}

impl TileDims {
    pub fn new(
        diamond_width: f64,
        sprite_height: f64,
        space_height: f64,
    ) -> Result<Self, DimsError> {
        if !(diamond_width.is_finite() && diamond_width > 0.0) {
            return Err(DimsError::DiamondWidth(diamond_width));
        }
        if !(space_height.is_finite() && space_height >= 0.0) {
            return Err(DimsError::SpaceHeight(space_height));
        }
        if !(sprite_height.is_finite() && sprite_height > space_height) {
            return Err(DimsError::SpriteHeight {
                sprite: sprite_height,
                space: space_height,
            });
        }
        Ok(TileDims {
            diamond_width,
            sprite_height,
            space_height,
        })
    }

    pub fn diamond_width(&self) -> f64 {
        self.diamond_width
    }

    pub fn sprite_height(&self) -> f64 {
        self.sprite_height
    }

    pub fn space_height(&self) -> f64 {
        self.space_height
    }

    /// Vertical rise of one stack level.
    pub fn level_step(&self) -> f64 {
        (self.sprite_height - self.space_height) / 2.0
    }

    /// Height of the projected top diamond (half its width for 2:1 tiles).
    pub fn diamond_height(&self) -> f64 {
        self.diamond_width / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridCoord {
    pub row: u32,
    pub col: u32,
    pub stack: u32,
}

impl GridCoord {
    pub const fn new(row: u32, col: u32, stack: u32) -> Self {
        GridCoord { row, col, stack }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreenCoord {
    pub x: f64,
    pub y: f64,
}

impl ScreenCoord {
    pub const fn new(x: f64, y: f64) -> Self {
        ScreenCoord { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("point does not map to a cell in the non-negative quadrant")]
pub struct NoCell;

pub fn grid_to_screen(cell: GridCoord, dims: &TileDims) -> ScreenCoord {
    let w = dims.diamond_width;
    let row = f64::from(cell.row);
    let col = f64::from(cell.col);
    ScreenCoord {
        x: (col - row) * w / 2.0,
        y: -(col + row) * w / 4.0 + f64::from(cell.stack) * dims.level_step(),
    }
}

/// Picks the stack-0 cell whose diamond contains `point`.
///
/// Points on a shared diamond edge go to the cell with the larger index.
pub fn screen_to_grid(point: ScreenCoord, dims: &TileDims) -> Result<GridCoord, NoCell> {
    if !(point.x.is_finite() && point.y.is_finite()) {
        return Err(NoCell);
    }
    let w = dims.diamond_width;
    // u = col - row, v = col + row in continuous grid units.
    let u = point.x / (w / 2.0);
    let v = -point.y / (w / 4.0);
    let col = ((u + v) / 2.0 + 0.5).floor();
    let row = ((v - u) / 2.0 + 0.5).floor();
    if col < 0.0 || row < 0.0 || col > f64::from(u32::MAX) || row > f64::from(u32::MAX) {
        return Err(NoCell);
    }
    Ok(GridCoord::new(row as u32, col as u32, 0))
}

/// Angle in degrees of a line with the given rise over run.
pub fn angle_from_slope(rise_over_run: f64) -> f64 {
    rise_over_run.abs().atan().to_degrees()
}

/// Acute angle between the projected +col axis and the screen horizontal.
pub fn projection_angle(dims: &TileDims) -> f64 {
    let a = grid_to_screen(GridCoord::new(0, 0, 0), dims);
    let b = grid_to_screen(GridCoord::new(0, 1, 0), dims);
    angle_from_slope((b.y - a.y) / (b.x - a.x))
}
