//! Exhaustive search for a smallest winning program.
//!
//! Programs are enumerated by total slot count. Within a count, main-heavy
//! splits come first, and each body is enumerated lexicographically with
//! `F < L < R < J < loops < conditionals < calls`. Loops and conditionals are
//! ordered by size, then loop count or condition, then their body.
//! Forms that can never be the first winner are skipped: loops with an empty
//! body or a count of 1, and procedure bodies that nothing calls.

use std::cell::RefCell;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use crate::actor::{Facing, MoveMode};
use crate::level::{Cell, Level};
use crate::program::{run_outcome, Condition, Instruction, Outcome, Primitive, ProcId, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InstructionSet {
    pub forward: bool,
    pub turn_left: bool,
    pub turn_right: bool,
    pub jump: bool,
    pub loops: bool,
    pub conditionals: bool,
    pub calls: bool,
    /// Largest loop count tried (counts start at 2).
    pub max_loop_count: u8,
}

impl InstructionSet {
    pub const DEFAULT_MAX_LOOP_COUNT: u8 = 4;

    pub fn basic() -> InstructionSet {
        InstructionSet {
            forward: true,
            turn_left: true,
            turn_right: true,
            jump: true,
            loops: false,
            conditionals: false,
            calls: false,
            max_loop_count: Self::DEFAULT_MAX_LOOP_COUNT,
        }
    }

    pub fn full() -> InstructionSet {
        InstructionSet {
            loops: true,
            conditionals: true,
            calls: true,
            ..InstructionSet::basic()
        }
    }

    pub fn none() -> InstructionSet {
        InstructionSet {
            forward: false,
            turn_left: false,
            turn_right: false,
            jump: false,
            ..InstructionSet::basic()
        }
    }

    fn prims(&self) -> impl Iterator<Item = Primitive> + '_ {
        Primitive::ALL.into_iter().filter(|p| match p {
            Primitive::Forward => self.forward,
            Primitive::TurnLeft => self.turn_left,
            Primitive::TurnRight => self.turn_right,
            Primitive::Jump => self.jump,
        })
    }
}

impl Default for InstructionSet {
    fn default() -> Self {
        InstructionSet::basic()
    }
}

/// Comma separated list drawn from `F`, `L`, `R`, `J`, `loop`, `if`, `call`.
impl FromStr for InstructionSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = InstructionSet::none();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item {
                "F" => set.forward = true,
                "L" => set.turn_left = true,
                "R" => set.turn_right = true,
                "J" => set.jump = true,
                "loop" => set.loops = true,
                "if" => set.conditionals = true,
                "call" => set.calls = true,
                other => {
                    return Err(format!(
                        "unknown instruction kind {other:?} (expected F, L, R, J, loop, if, call)"
                    ))
                }
            }
        }
        Ok(set)
    }
}

impl fmt::Display for InstructionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [
            (self.forward, "F"),
            (self.turn_left, "L"),
            (self.turn_right, "R"),
            (self.jump, "J"),
            (self.loops, "loop"),
            (self.conditionals, "if"),
            (self.calls, "call"),
        ];
        let on: Vec<&str> = names.iter().filter(|(b, _)| *b).map(|(_, n)| *n).collect();
        f.write_str(&on.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Solved { program: Program, steps: u32 },
    Unsolvable,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Programs run before the search stopped.
    pub explored: u64,
}

/// Cells reachable from the start by walking or jumping in any direction the
/// level's movement mode allows.
pub fn reachable_cells(level: &Level) -> BTreeSet<Cell> {
    let dirs: Vec<Facing> = match level.mode() {
        MoveMode::FourWay => Facing::ALL
            .into_iter()
            .filter(|f| f.is_cardinal())
            .collect(),
        MoveMode::EightWay => Facing::ALL.to_vec(),
    };
    let start = level.start();
    let mut seen = BTreeSet::from([Cell {
        row: start.row,
        col: start.col,
    }]);
    let mut queue = VecDeque::from([(start.row, start.col)]);
    while let Some((row, col)) = queue.pop_front() {
        let here = level.height_at(row, col);
        for d in &dirs {
            let (dr, dc) = d.delta();
            let (r, c) = (i64::from(row) + dr, i64::from(col) + dc);
            let there = level.cell_height(r, c);
            let walk = there == here;
            let climb = there == here + 1;
            let drop = there >= 1 && there < here;
            if there == 0 || !(walk || climb || drop) {
                continue;
            }
            let cell = Cell {
                row: r as u32,
                col: c as u32,
            };
            if seen.insert(cell) {
                queue.push_back((cell.row, cell.col));
            }
        }
    }
    seen
}

struct Search<'a> {
    level: &'a Level,
    set: InstructionSet,
    budget: u64,
    explored: std::cell::Cell<u64>,
    found: RefCell<Option<(Program, u32)>>,
}

enum Stop {
    Found,
    Budget,
}

impl Search<'_> {
    /// Every instruction sequence of exactly `n` slots, in enumeration order.
    fn each_seq(
        &self,
        n: u32,
        prefix: &mut Vec<Instruction>,
        f: &mut dyn FnMut(&[Instruction]) -> ControlFlow<Stop>,
    ) -> ControlFlow<Stop> {
        if n == 0 {
            return f(prefix);
        }
        self.each_instr(n, true, &mut |i, size| {
            prefix.push(i);
            let r = self.each_seq(n - size, prefix, f);
            prefix.pop();
            r
        })
    }

    /// Every instruction of at most `max` slots, passed with its size.
    fn each_instr(
        &self,
        max: u32,
        allow_if: bool,
        f: &mut dyn FnMut(Instruction, u32) -> ControlFlow<Stop>,
    ) -> ControlFlow<Stop> {
        for p in self.set.prims() {
            f(Instruction::Prim(p), 1)?;
        }
        if self.set.loops {
            for size in 2..=max {
                for count in 2..=self.set.max_loop_count {
                    self.each_seq(size - 1, &mut Vec::new(), &mut |body| {
                        f(Instruction::looped(count, body.to_vec()), size)
                    })?;
                }
            }
        }
        if self.set.conditionals && allow_if {
            for size in 2..=max {
                for cond in Condition::ALL {
                    self.each_instr(size - 1, false, &mut |then, inner| {
                        if inner == size - 1 {
                            f(Instruction::guarded(cond, then), size)
                        } else {
                            ControlFlow::Continue(())
                        }
                    })?;
                }
            }
        }
        if self.set.calls {
            for id in ProcId::ALL {
                if self.proc_capacity(id) > 0 {
                    f(Instruction::Call(id), 1)?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn proc_capacity(&self, id: ProcId) -> u32 {
        if !self.set.calls {
            return 0;
        }
        self.level
            .limits()
            .procs
            .get(id.index())
            .copied()
            .unwrap_or(0)
    }

    fn try_program(&self, program: Program) -> ControlFlow<Stop> {
        if self.explored.get() >= self.budget {
            return ControlFlow::Break(Stop::Budget);
        }
        self.explored.set(self.explored.get() + 1);
        let (outcome, steps) = run_outcome(&program, self.level);
        if outcome == Outcome::Win {
            *self.found.borrow_mut() = Some((program, steps));
            return ControlFlow::Break(Stop::Found);
        }
        ControlFlow::Continue(())
    }

    fn programs_of_size(&self, n: u32) -> ControlFlow<Stop> {
        let main_cap = self.level.limits().main;
        let (cap1, cap2) = (
            self.proc_capacity(ProcId::P1),
            self.proc_capacity(ProcId::P2),
        );
        for m in (0..=n.min(main_cap)).rev() {
            for a in (0..=(n - m).min(cap1)).rev() {
                let b = n - m - a;
                if b > cap2 {
                    continue;
                }
                self.each_seq(m, &mut Vec::new(), &mut |main| {
                    self.each_seq(a, &mut Vec::new(), &mut |p1| {
                        self.each_seq(b, &mut Vec::new(), &mut |p2| {
                            let program = Program {
                                main: main.to_vec(),
                                procs: [(a > 0).then(|| p1.to_vec()), (b > 0).then(|| p2.to_vec())],
                            };
                            let called = program.called_procs();
                            if (a == 0 || called[0]) && (b == 0 || called[1]) {
                                self.try_program(program)
                            } else {
                                ControlFlow::Continue(())
                            }
                        })
                    })
                })?;
            }
        }
        ControlFlow::Continue(())
    }
}

pub fn solve(level: &Level, set: InstructionSet, budget: u64) -> SolveResult {
    let reachable = reachable_cells(level);
    if !level.goals().iter().all(|g| reachable.contains(g)) {
        return SolveResult {
            status: SolveStatus::Unsolvable,
            explored: 0,
        };
    }
    let search = Search {
        level,
        set,
        budget: budget.max(1),
        explored: std::cell::Cell::new(0),
        found: RefCell::new(None),
    };
    let limits = level.limits();
    let max_total =
        limits.main + search.proc_capacity(ProcId::P1) + search.proc_capacity(ProcId::P2);
    for n in 0..=max_total {
        match search.programs_of_size(n) {
            ControlFlow::Continue(()) => {}
            ControlFlow::Break(Stop::Found) => {
                let (program, steps) = search.found.take().expect("found program recorded");
                return SolveResult {
                    status: SolveStatus::Solved { program, steps },
                    explored: search.explored.get(),
                };
            }
            ControlFlow::Break(Stop::Budget) => {
                return SolveResult {
                    status: SolveStatus::BudgetExceeded,
                    explored: search.explored.get(),
                };
            }
        }
    }
    SolveResult {
        status: SolveStatus::Unsolvable,
        explored: search.explored.get(),
    }
}
