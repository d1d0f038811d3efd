//! The command language: instructions, programs, slot accounting and the
//! canonical text form.
//!
//! Text form (whitespace between tokens is optional):
//!
//! ```text
//! main: F F L3{ R J } ?blocked L C1 ; p1: F C1
//! ```

mod parse;
mod vm;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::level::SlotLimits;

pub use parse::{parse_program, ParseError};
pub use vm::{run, run_outcome, Event, Machine, Outcome, Trace, TraceStep};

pub const MAX_LOOP_COUNT: u8 = 99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Primitive {
    Forward,
    TurnLeft,
    TurnRight,
    Jump,
}

impl Primitive {
    pub const ALL: [Primitive; 4] = [
        Primitive::Forward,
        Primitive::TurnLeft,
        Primitive::TurnRight,
        Primitive::Jump,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Primitive::Forward => "F",
            Primitive::TurnLeft => "L",
            Primitive::TurnRight => "R",
            Primitive::Jump => "J",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Condition {
    OnGoal,
    BlockedAhead,
    HigherAhead,
    LowerAhead,
}

impl Condition {
    pub const ALL: [Condition; 4] = [
        Condition::OnGoal,
        Condition::BlockedAhead,
        Condition::HigherAhead,
        Condition::LowerAhead,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Condition::OnGoal => "goal",
            Condition::BlockedAhead => "blocked",
            Condition::HigherAhead => "higher",
            Condition::LowerAhead => "lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ProcId {
    P1,
    P2,
}

impl ProcId {
    pub const ALL: [ProcId; 2] = [ProcId::P1, ProcId::P2];

    pub fn index(self) -> usize {
        match self {
            ProcId::P1 => 0,
            ProcId::P2 => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProcId::P1 => "p1",
            ProcId::P2 => "p2",
        }
    }

    pub fn call_token(self) -> &'static str {
        match self {
            ProcId::P1 => "C1",
            ProcId::P2 => "C2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    Prim(Primitive),
    Loop {
        count: u8,
        body: Vec<Instruction>,
    },
    /// Runs `then` only when `cond` holds at that moment.
    If {
        cond: Condition,
        then: Box<Instruction>,
    },
    Call(ProcId),
}

impl Instruction {
    pub const FORWARD: Instruction = Instruction::Prim(Primitive::Forward);
    pub const TURN_LEFT: Instruction = Instruction::Prim(Primitive::TurnLeft);
    pub const TURN_RIGHT: Instruction = Instruction::Prim(Primitive::TurnRight);
    pub const JUMP: Instruction = Instruction::Prim(Primitive::Jump);

    pub fn looped(count: u8, body: Vec<Instruction>) -> Instruction {
        Instruction::Loop { count, body }
    }

    pub fn guarded(cond: Condition, then: Instruction) -> Instruction {
        Instruction::If {
            cond,
            then: Box::new(then),
        }
    }

    /// Every instruction takes one slot; loop bodies and guarded
    /// instructions add their own.
    pub fn slots(&self) -> u32 {
        match self {
            Instruction::Prim(_) | Instruction::Call(_) => 1,
            Instruction::Loop { body, .. } => 1 + seq_slots(body),
            Instruction::If { then, .. } => 1 + then.slots(),
        }
    }

    fn calls(&self, out: &mut [bool; 2]) {
        match self {
            Instruction::Prim(_) => {}
            Instruction::Call(p) => out[p.index()] = true,
            Instruction::Loop { body, .. } => body.iter().for_each(|i| i.calls(out)),
            Instruction::If { then, .. } => then.calls(out),
        }
    }
}

pub fn seq_slots(seq: &[Instruction]) -> u32 {
    seq.iter().map(Instruction::slots).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Program {
    pub main: Vec<Instruction>,
    /// Bodies of `p1` and `p2`; `None` when the procedure is not defined.
    /// Calling an undefined procedure does nothing.
    pub procs: [Option<Vec<Instruction>>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{area} uses {used} slots but only {available} are available")]
pub struct SlotLimitError {
    pub area: &'static str,
    pub used: u32,
    pub available: u32,
}

impl Program {
    pub fn main_only(main: Vec<Instruction>) -> Program {
        Program {
            main,
            procs: [None, None],
        }
    }

    pub fn with_proc(mut self, id: ProcId, body: Vec<Instruction>) -> Program {
        self.procs[id.index()] = Some(body);
        self
    }

    pub fn proc_body(&self, id: ProcId) -> Option<&[Instruction]> {
        self.procs[id.index()].as_deref()
    }

    pub fn total_slots(&self) -> u32 {
        seq_slots(&self.main)
            + self
                .procs
                .iter()
                .flatten()
                .map(|b| seq_slots(b))
                .sum::<u32>()
    }

    /// Which procedures are called anywhere in the program.
    pub fn called_procs(&self) -> [bool; 2] {
        let mut out = [false; 2];
        self.main
            .iter()
            .chain(self.procs.iter().flatten().flatten())
            .for_each(|i| i.calls(&mut out));
        out
    }

    pub fn check_limits(&self, limits: &SlotLimits) -> Result<(), SlotLimitError> {
        let used = seq_slots(&self.main);
        if used > limits.main {
            return Err(SlotLimitError {
                area: "main",
                used,
                available: limits.main,
            });
        }
        for id in ProcId::ALL {
            if let Some(body) = self.proc_body(id) {
                let used = seq_slots(body);
                let available = limits.procs.get(id.index()).copied().unwrap_or(0);
                if used > available {
                    return Err(SlotLimitError {
                        area: id.name(),
                        used,
                        available,
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Prim(p) => f.write_str(p.token()),
            Instruction::Call(p) => f.write_str(p.call_token()),
            Instruction::Loop { count, body } => {
                write!(f, "L{count}{{")?;
                for i in body {
                    write!(f, " {i}")?;
                }
                f.write_str(" }")
            }
            Instruction::If { cond, then } => write!(f, "?{} {then}", cond.keyword()),
        }
    }
}

fn write_seq(f: &mut fmt::Formatter<'_>, label: &str, seq: &[Instruction]) -> fmt::Result {
    write!(f, "{label}:")?;
    for i in seq {
        write!(f, " {i}")?;
    }
    Ok(())
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_seq(f, "main", &self.main)?;
        for id in ProcId::ALL {
            if let Some(body) = self.proc_body(id) {
                f.write_str(" ; ")?;
                write_seq(f, id.name(), body)?;
            }
        }
        Ok(())
    }
}

/// Canonical single-spaced text.
pub fn print_program(p: &Program) -> String {
    p.to_string()
}
