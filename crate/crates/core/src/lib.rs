//! Deterministic engine for isometric algorithm-learning puzzles.
//!
//! A [`level::Level`] is a matrix of tile stack heights with a start pose and
//! goal cells. Tiles project onto the screen through [`grid`], draw in the
//! order given by [`depth`], and are walked by an actor ([`actor`]) driven by
//! a small block-language program ([`program`]). [`solver`] searches for the
//! shortest winning program, [`session`] and [`protocol`] expose a steppable
//! episode to front ends, and [`uat`] scores acceptance questionnaires.

pub mod actor;
pub mod cli;
pub mod depth;
pub mod grid;
pub mod level;
pub mod program;
pub mod protocol;
pub mod session;
pub mod solver;
pub mod uat;

pub use actor::{ActorState, Facing, MoveMode};
pub use grid::{
    grid_to_screen, projection_angle, screen_to_grid, GridCoord, ScreenCoord, TileDims,
};
pub use level::{parse_level, Cell, Level, LevelError, SlotLimits};
pub use program::{parse_program, run, Outcome, Program, Trace};
pub use session::Session;
pub use solver::{solve, InstructionSet, SolveResult, SolveStatus};
pub use uat::{score_uat, UatReport, UatTable};
