//! Deterministic interpreter.
//!
//! Programs are flattened into a small instruction stream and executed one
//! primitive at a time by [`Machine`]. Loop, conditional and call bookkeeping
//! is free; each executed primitive (including a blocked one) costs a step.
//! After every primitive the machine runs ahead through bookkeeping to the next
//! primitive, so it knows it is finished as soon as the last step is taken.

use std::fmt;

use serde::Serialize;

use super::{Condition, Instruction, Primitive, ProcId, Program};
use crate::actor::{self, ActorState, BlockReason, Facing, MoveResult, TurnDir};
use crate::level::{Cell, Level};

/// Bookkeeping operations allowed between two primitives before the run is
/// cut off (only reachable through deeply nested loops with empty bodies).
const IDLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Win,
    Incomplete,
    StepLimitExceeded,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Win => "win",
            Outcome::Incomplete => "incomplete",
            Outcome::StepLimitExceeded => "step_limit_exceeded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    Moved {
        row: u32,
        col: u32,
        height: u32,
    },
    Turned {
        facing: Facing,
    },
    Blocked {
        reason: BlockReason,
    },
    /// A move that completed the last goal.
    Won {
        row: u32,
        col: u32,
        height: u32,
    },
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Moved { row, col, height } => write!(f, "moved {row} {col} {height}"),
            Event::Turned { facing } => write!(f, "turned {facing}"),
            Event::Blocked { reason } => write!(f, "blocked {}", reason.as_str()),
            Event::Won { row, col, height } => write!(f, "won {row} {col} {height}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TraceStep {
    pub op: Primitive,
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
    #[serde(rename = "final")]
    pub final_state: ActorState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Prim(Primitive),
    LoopStart { count: u8, end: usize },
    LoopEnd { start: usize },
    If { cond: Condition, skip_to: usize },
    Call(ProcId),
    Return,
    Halt,
}

#[derive(Debug, Clone)]
struct Code {
    ops: Vec<Op>,
    entries: [Option<usize>; 2],
}

fn emit_seq(seq: &[Instruction], ops: &mut Vec<Op>) {
    for i in seq {
        emit(i, ops);
    }
}

fn emit(i: &Instruction, ops: &mut Vec<Op>) {
    match i {
        Instruction::Prim(p) => ops.push(Op::Prim(*p)),
        Instruction::Call(p) => ops.push(Op::Call(*p)),
        Instruction::Loop { count, body } => {
            let start = ops.len();
            ops.push(Op::LoopStart {
                count: *count,
                end: 0,
            });
            emit_seq(body, ops);
            let end = ops.len();
            ops.push(Op::LoopEnd { start });
            ops[start] = Op::LoopStart { count: *count, end };
        }
        Instruction::If { cond, then } => {
            let at = ops.len();
            ops.push(Op::If {
                cond: *cond,
                skip_to: 0,
            });
            emit(then, ops);
            let skip_to = ops.len();
            ops[at] = Op::If {
                cond: *cond,
                skip_to,
            };
        }
    }
}

fn compile(p: &Program) -> Code {
    let mut ops = Vec::new();
    emit_seq(&p.main, &mut ops);
    ops.push(Op::Halt);
    let mut entries = [None, None];
    for id in ProcId::ALL {
        if let Some(body) = p.proc_body(id) {
            entries[id.index()] = Some(ops.len());
            emit_seq(body, &mut ops);
            ops.push(Op::Return);
        }
    }
    Code { ops, entries }
}

/// Single-stepping executor for one program on one level.
#[derive(Debug, Clone)]
pub struct Machine {
    code: Code,
    pc: usize,
    calls: Vec<usize>,
    loops: Vec<u8>,
    actor: ActorState,
    visited: Vec<bool>,
    remaining_goals: usize,
    steps: u32,
    outcome: Option<Outcome>,
}

impl Machine {
    pub fn new(program: &Program, level: &Level) -> Machine {
        let actor = level.start_state();
        let mut m = Machine {
            code: compile(program),
            pc: 0,
            calls: Vec::new(),
            loops: Vec::new(),
            actor,
            visited: vec![false; level.goals().len()],
            remaining_goals: level.goals().len(),
            steps: 0,
            outcome: None,
        };
        m.visit(level, actor.row, actor.col);
        if m.remaining_goals == 0 {
            m.outcome = Some(Outcome::Win);
        } else {
            m.settle(level);
        }
        m
    }

    pub fn actor(&self) -> ActorState {
        self.actor
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.outcome
    }

    pub fn is_finished(&self) -> bool {
        self.outcome.is_some()
    }

    /// Goals reached so far, in the level's goal order.
    pub fn visited_goals<'a>(&'a self, level: &'a Level) -> impl Iterator<Item = Cell> + 'a {
        level
            .goals()
            .iter()
            .zip(&self.visited)
            .filter(|(_, &v)| v)
            .map(|(g, _)| *g)
    }

    fn visit(&mut self, level: &Level, row: u32, col: u32) {
        if let Ok(i) = level.goals().binary_search(&Cell { row, col }) {
            if !self.visited[i] {
                self.visited[i] = true;
                self.remaining_goals -= 1;
            }
        }
    }

    fn holds(&self, level: &Level, cond: Condition) -> bool {
        let here = self.actor.height;
        let ahead = self.actor.ahead_height(level);
        match cond {
            Condition::OnGoal => level.is_goal(self.actor.row, self.actor.col),
            Condition::BlockedAhead => {
                matches!(actor::forward(self.actor, level), MoveResult::Blocked(_))
            }
            Condition::HigherAhead => ahead > here,
            Condition::LowerAhead => ahead >= 1 && ahead < here,
        }
    }

    /// Runs bookkeeping until the next primitive, or finishes the run.
    fn settle(&mut self, level: &Level) {
        let max_depth = level.limits().step_limit as usize + 1;
        let mut idle = 0u64;
        loop {
            if idle > IDLE_LIMIT {
                self.outcome = Some(Outcome::StepLimitExceeded);
                return;
            }
            idle += 1;
            match self.code.ops[self.pc] {
                Op::Prim(_) => {
                    if self.steps >= level.limits().step_limit {
                        self.outcome = Some(Outcome::StepLimitExceeded);
                    }
                    return;
                }
                Op::Halt => {
                    self.outcome = Some(Outcome::Incomplete);
                    return;
                }
                Op::LoopStart { count, end } => {
                    if count == 0 {
                        self.pc = end + 1;
                    } else {
                        self.loops.push(count);
                        self.pc += 1;
                    }
                }
                Op::LoopEnd { start } => {
                    let left = self.loops.last_mut().expect("loop stack matches code");
                    *left -= 1;
                    if *left == 0 {
                        self.loops.pop();
                        self.pc += 1;
                    } else {
                        self.pc = start + 1;
                    }
                }
                Op::If { cond, skip_to } => {
                    self.pc = if self.holds(level, cond) {
                        self.pc + 1
                    } else {
                        skip_to
                    };
                }
                Op::Call(id) => match self.code.entries[id.index()] {
                    Some(entry) => {
                        if self.calls.len() >= max_depth {
                            self.outcome = Some(Outcome::StepLimitExceeded);
                            return;
                        }
                        self.calls.push(self.pc + 1);
                        self.pc = entry;
                    }
                    None => self.pc += 1,
                },
                Op::Return => {
                    self.pc = self.calls.pop().expect("return inside a call");
                }
            }
        }
    }

    /// Executes the next primitive. `None` once the run is over.
    ///
    /// `level` must be the level the machine was created with.
    pub fn step(&mut self, level: &Level) -> Option<TraceStep> {
        if self.outcome.is_some() {
            return None;
        }
        let op = match self.code.ops[self.pc] {
            Op::Prim(p) => p,
            other => unreachable!("settled machine parked on {other:?}"),
        };
        self.steps += 1;
        let mode = level.mode();
        let event = match op {
            Primitive::TurnLeft | Primitive::TurnRight => {
                let dir = if op == Primitive::TurnLeft {
                    TurnDir::Left
                } else {
                    TurnDir::Right
                };
                self.actor = actor::turn(self.actor, dir, mode);
                Event::Turned {
                    facing: self.actor.facing,
                }
            }
            Primitive::Forward | Primitive::Jump => {
                let r = if op == Primitive::Forward {
                    actor::forward(self.actor, level)
                } else {
                    actor::jump(self.actor, level)
                };
                match r {
                    MoveResult::Blocked(reason) => Event::Blocked { reason },
                    MoveResult::Moved(next) => {
                        self.actor = next;
                        self.visit(level, next.row, next.col);
                        let (row, col, height) = (next.row, next.col, next.height);
                        if self.remaining_goals == 0 {
                            self.outcome = Some(Outcome::Win);
                            Event::Won { row, col, height }
                        } else {
                            Event::Moved { row, col, height }
                        }
                    }
                }
            }
        };
        if self.outcome.is_none() {
            self.pc += 1;
            self.settle(level);
        }
        Some(TraceStep { op, event })
    }
}

pub fn run(program: &Program, level: &Level) -> Trace {
    let mut m = Machine::new(program, level);
    let mut steps = Vec::new();
    while let Some(s) = m.step(level) {
        steps.push(s);
    }
    Trace {
        steps,
        outcome: m.outcome().expect("finished"),
        final_state: m.actor(),
    }
}

/// Outcome and step count without recording the trace.
pub fn run_outcome(program: &Program, level: &Level) -> (Outcome, u32) {
    let mut m = Machine::new(program, level);
    while m.step(level).is_some() {}
    (m.outcome().expect("finished"), m.steps())
}
