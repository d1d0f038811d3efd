//! A playable episode: one level, one installed program, stepped or run.

use serde::Serialize;
use thiserror::Error;

use crate::actor::ActorState;
use crate::depth;
use crate::level::{Cell, Level};
use crate::program::{Machine, Outcome, Program, SlotLimitError, Trace, TraceStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "state", content = "outcome", rename_all = "snake_case")]
pub enum SessionStatus {
    Editing,
    Running,
    Finished(Outcome),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error(transparent)]
    SlotLimit(#[from] SlotLimitError),
    #[error("invalid transition: {0}")]
    InvalidTransition(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepReport {
    /// `None` when the run ended without executing another primitive.
    pub event: Option<TraceStep>,
    pub status: SessionStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub status: SessionStatus,
    pub actor: ActorState,
    pub steps_taken: u32,
    pub remaining_steps: u32,
    pub goals: Vec<Cell>,
    pub visited_goals: Vec<Cell>,
    pub program: Option<String>,
    /// Draw-order dump lines, `order kind row col stack`.
    pub draw_order: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Session {
    level: Level,
    program: Option<Program>,
    machine: Option<Machine>,
    status: SessionStatus,
    events: Vec<TraceStep>,
}

impl Session {
    pub fn load(level: Level) -> Session {
        Session {
            level,
            program: None,
            machine: None,
            status: SessionStatus::Editing,
            events: Vec::new(),
        }
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn program(&self) -> Option<&Program> {
        self.program.as_ref()
    }

    pub fn status(&self) -> SessionStatus {
        self.status
    }

    /// Events emitted since the program was installed or reset.
    pub fn events(&self) -> &[TraceStep] {
        &self.events
    }

    pub fn actor(&self) -> ActorState {
        self.machine
            .as_ref()
            .map_or_else(|| self.level.start_state(), Machine::actor)
    }

    pub fn set_program(&mut self, program: Program) -> Result<(), SessionError> {
        if self.status == SessionStatus::Running {
            return Err(SessionError::InvalidTransition(
                "cannot replace the program while running",
            ));
        }
        program.check_limits(self.level.limits())?;
        self.program = Some(program);
        self.reset();
        Ok(())
    }

    /// Back to editing with the same program and the actor at the start.
    pub fn reset(&mut self) {
        self.machine = self.program.as_ref().map(|p| Machine::new(p, &self.level));
        self.status = SessionStatus::Editing;
        self.events.clear();
    }

    pub fn step(&mut self) -> Result<StepReport, SessionError> {
        if let SessionStatus::Finished(_) = self.status {
            return Err(SessionError::InvalidTransition(
                "the run has finished; reset first",
            ));
        }
        let machine = self
            .machine
            .as_mut()
            .ok_or(SessionError::InvalidTransition("no program installed"))?;
        let event = machine.step(&self.level);
        self.events.extend(event);
        self.status = match machine.outcome() {
            Some(o) => SessionStatus::Finished(o),
            None => SessionStatus::Running,
        };
        Ok(StepReport {
            event,
            status: self.status,
        })
    }

    /// Steps until finished; returns the whole episode's trace.
    pub fn run_all(&mut self) -> Result<Trace, SessionError> {
        loop {
            if let SessionStatus::Finished(outcome) = self.step()?.status {
                return Ok(Trace {
                    steps: self.events.clone(),
                    outcome,
                    final_state: self.actor(),
                });
            }
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        let actor = self.actor();
        let steps_taken = self.machine.as_ref().map_or(0, Machine::steps);
        let visited_goals = match &self.machine {
            Some(m) => m.visited_goals(&self.level).collect(),
            None => self
                .level
                .goals()
                .iter()
                .filter(|g| (g.row, g.col) == (actor.row, actor.col))
                .copied()
                .collect(),
        };
        Snapshot {
            status: self.status,
            actor,
            steps_taken,
            remaining_steps: self.level.limits().step_limit.saturating_sub(steps_taken),
            goals: self.level.goals().to_vec(),
            visited_goals,
            program: self.program.as_ref().map(ToString::to_string),
            draw_order: depth::draw_order(&self.level, &[actor])
                .iter()
                .map(ToString::to_string)
                .collect(),
        }
    }
}
