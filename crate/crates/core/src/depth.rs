//! Painter's-algorithm draw order for tiles and actors.
//!
//! Every drawable occupies exactly one cell. Drawables sort by
//! `(row + col, row, stack, kind)`: farther diagonals first, then rows
//! top-down, then bottom of a stack up, and a cell's ground before whatever
//! stands on it. An actor sits one layer above the tile it stands on.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::actor::ActorState;
use crate::grid::GridCoord;
use crate::level::Level;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DrawableKind {
    Tile,
    Actor,
}

impl DrawableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DrawableKind::Tile => "tile",
            DrawableKind::Actor => "actor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Drawable {
    pub kind: DrawableKind,
    pub cell: GridCoord,
    pub order: u32,
}

impl Drawable {
    pub fn tile(cell: GridCoord) -> Drawable {
        Drawable {
            kind: DrawableKind::Tile,
            cell,
            order: 0,
        }
    }

    pub fn actor(state: &ActorState) -> Drawable {
        Drawable {
            kind: DrawableKind::Actor,
            cell: GridCoord::new(state.row, state.col, state.height),
            order: 0,
        }
    }

    fn sort_key(&self) -> (u64, u32, u32, DrawableKind) {
        (
            u64::from(self.cell.row) + u64::from(self.cell.col),
            self.cell.row,
            self.cell.stack,
            self.kind,
        )
    }
}

impl fmt::Display for Drawable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.order,
            self.kind.as_str(),
            self.cell.row,
            self.cell.col,
            self.cell.stack
        )
    }
}

/// `Less` means `a` is drawn before `b`. The assigned `order` is ignored.
pub fn compare_depth(a: &Drawable, b: &Drawable) -> Ordering {
    a.sort_key().cmp(&b.sort_key())
}

/// All tiles of `level` plus `actors`, sorted and numbered `0..n`.
pub fn draw_order(level: &Level, actors: &[ActorState]) -> Vec<Drawable> {
    let mut out: Vec<Drawable> = level
        .build_world()
        .into_iter()
        .map(|p| Drawable::tile(p.cell))
        .chain(actors.iter().map(Drawable::actor))
        .collect();
    out.sort_by(compare_depth);
    for (i, d) in out.iter_mut().enumerate() {
        d.order = i as u32;
    }
    out
}

/// One drawable per line: `order kind row col stack`.
pub fn dump(order: &[Drawable]) -> String {
    let mut s = String::new();
    for d in order {
        writeln!(s, "{d}").expect("write to String");
    }
    s
}
