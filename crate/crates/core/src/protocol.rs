//! Line-delimited JSON session protocol.
//!
//! Requests: `{"op": "load", "level": {...}}`, `{"op": "set_program", "program": "main: F F"}`,
//! `{"op": "step"}`, `{"op": "run"}`, `{"op": "reset"}`, `{"op": "snapshot"}`.
//!
//! Responses are `{"ok": true, "event": ..., "snapshot": ...}` (plus `"trace"`
//! for `run`) or `{"ok": false, "error": {"kind": ..., "detail": ...}}`.

use std::io::{self, BufRead, Write};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::level::parse_level;
use crate::program::parse_program;
use crate::session::{Session, SessionError};

#[derive(Debug, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum Request {
    Load { level: Value },
    SetProgram { program: String },
    Step,
    Run,
    Reset,
    Snapshot,
}

fn error(kind: &str, detail: impl ToString) -> Value {
    json!({"ok": false, "error": {"kind": kind, "detail": detail.to_string()}})
}

fn session_error(e: SessionError) -> Value {
    match e {
        SessionError::SlotLimit(e) => error("slot_limit", e),
        e @ SessionError::InvalidTransition(_) => error("invalid_transition", e),
    }
}

/// Owns at most one session and answers requests against it.
#[derive(Debug, Default)]
pub struct ProtocolServer {
    session: Option<Session>,
}

impl ProtocolServer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn session(&self) -> Option<&Session> {
        self.session.as_ref()
    }

    /// Handles one request line and returns one response line (no newline).
    pub fn handle_line(&mut self, line: &str) -> String {
        self.handle(line).to_string()
    }

    fn handle(&mut self, line: &str) -> Value {
        let req: Request = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => return error("bad_request", e),
        };
        if let Request::Load { level } = req {
            return match parse_level(&level.to_string()) {
                Ok(level) => {
                    let s = Session::load(level);
                    let snapshot = s.snapshot();
                    self.session = Some(s);
                    json!({"ok": true, "event": null, "snapshot": snapshot})
                }
                Err(e) => error("level_error", e),
            };
        }
        let Some(session) = self.session.as_mut() else {
            return error("invalid_transition", "no level loaded");
        };
        match req {
            Request::Load { .. } => unreachable!("handled above"),
            Request::SetProgram { program } => {
                let program = match parse_program(&program) {
                    Ok(p) => p,
                    Err(e) => return error("parse_error", e),
                };
                match session.set_program(program) {
                    Ok(()) => json!({"ok": true, "event": null, "snapshot": session.snapshot()}),
                    Err(e) => session_error(e),
                }
            }
            Request::Step => match session.step() {
                Ok(report) => {
                    json!({"ok": true, "event": report.event, "snapshot": session.snapshot()})
                }
                Err(e) => session_error(e),
            },
            Request::Run => match session.run_all() {
                Ok(trace) => {
                    json!({"ok": true, "event": null, "trace": trace, "snapshot": session.snapshot()})
                }
                Err(e) => session_error(e),
            },
            Request::Reset => {
                session.reset();
                json!({"ok": true, "event": null, "snapshot": session.snapshot()})
            }
            Request::Snapshot => json!({"ok": true, "event": null, "snapshot": session.snapshot()}),
        }
    }

    /// Answers every non-empty input line until EOF.
    pub fn serve(&mut self, input: impl BufRead, mut output: impl Write) -> io::Result<()> {
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            writeln!(output, "{}", self.handle_line(&line))?;
            output.flush()?;
        }
        Ok(())
    }
}
