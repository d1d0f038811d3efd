//! Oracles and generators shared by the integration suites. Nothing here calls
//! into the engine's movement, ordering or search code; each oracle
//! recomputes its answer from the level's height matrix alone.
#![allow(dead_code)]

use isobot::actor::{ActorState, Facing};
use isobot::depth::{Drawable, DrawableKind};
use isobot::level::{Cell, Level, SlotLimits, StartPose};
use isobot::program::{
    run, Condition, Event, Instruction, Outcome, Primitive, ProcId, Program, Trace,
};
use isobot::session::Session;
use isobot::solver::{solve, InstructionSet, SolveStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Painter oracle

/// Small projection with the same 2:1 shape and level step ratio as the
/// default dims: one stack level lifts a face by one diamond half height.
pub const W: f64 = 8.0;
pub const LEVEL_STEP: f64 = 2.0;

/// A flat diamond at its world elevation.
#[derive(Debug, Clone, Copy)]
pub struct Face {
    pub id: usize,
    pub cx: f64,
    pub cy: f64,
    pub half_w: f64,
    pub half_h: f64,
    pub elevation: u32,
}

impl Face {
    fn covers(&self, x: f64, y: f64) -> bool {
        (x - self.cx).abs() / self.half_w + (y - self.cy).abs() / self.half_h < 1.0
    }
}

/// Faces for the drawables in the given sequence; `id` is the index.
pub fn faces(drawables: &[Drawable]) -> Vec<Face> {
    drawables
        .iter()
        .enumerate()
        .map(|(id, d)| {
            let (r, c, s) = (
                f64::from(d.cell.row),
                f64::from(d.cell.col),
                f64::from(d.cell.stack),
            );
            let scale = if d.kind == DrawableKind::Actor {
                0.5
            } else {
                1.0
            };
            Face {
                id,
                cx: (c - r) * W / 2.0,
                cy: -(c + r) * W / 4.0 + s * LEVEL_STEP,
                half_w: scale * W / 2.0,
                half_h: scale * W / 4.0,
                elevation: d.cell.stack,
            }
        })
        .collect()
}

/// Compares painting in the given order against the visibility rule at
/// every sample point: among faces over a point the highest one is nearest
/// to the viewer. Returns the first disagreement as (x, y, painted, nearest).
pub fn painter_mismatch(order: &[Drawable]) -> Option<(f64, f64, usize, usize)> {
    let fs = faces(order);
    let min_x = fs
        .iter()
        .map(|f| f.cx - f.half_w)
        .fold(f64::INFINITY, f64::min)
        .floor() as i64;
    let max_x = fs
        .iter()
        .map(|f| f.cx + f.half_w)
        .fold(f64::NEG_INFINITY, f64::max)
        .ceil() as i64;
    let min_y = fs
        .iter()
        .map(|f| f.cy - f.half_h)
        .fold(f64::INFINITY, f64::min)
        .floor() as i64;
    let max_y = fs
        .iter()
        .map(|f| f.cy + f.half_h)
        .fold(f64::NEG_INFINITY, f64::max)
        .ceil() as i64;
    // Four samples per unit, offset so no sample sits on a diamond edge.
    for yi in (min_y * 4)..(max_y * 4) {
        for xi in (min_x * 4)..(max_x * 4) {
            let (x, y) = (xi as f64 / 4.0 + 0.0625, yi as f64 / 4.0 + 0.075);
            let mut painted = None;
            let mut nearest: Option<&Face> = None;
            for f in fs.iter().filter(|f| f.covers(x, y)) {
                painted = Some(f.id);
                if nearest.is_none_or(|n| f.elevation > n.elevation) {
                    nearest = Some(f);
                }
            }
            if let (Some(p), Some(n)) = (painted, nearest) {
                if fs[p].elevation != n.elevation {
                    return Some((x, y, p, n.id));
                }
            }
        }
    }
    None
}

/// Every height matrix with the given shape and heights in `0..=max`.
pub fn all_height_maps(rows: usize, cols: usize, max: u32) -> impl Iterator<Item = Vec<Vec<u32>>> {
    let n = rows * cols;
    let total = u64::from(max + 1).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut h = vec![vec![0; cols]; rows];
        for cell in 0..n {
            h[cell / cols][cell % cols] = (code % u64::from(max + 1)) as u32;
            code /= u64::from(max + 1);
        }
        h
    })
}

// ---------------------------------------------------------------------------
// Independent movement model

const CARDINALS: [Facing; 4] = [Facing::N, Facing::E, Facing::S, Facing::W];

fn delta(f: Facing) -> (i64, i64) {
    match f {
        Facing::N => (-1, 0),
        Facing::E => (0, 1),
        Facing::S => (1, 0),
        Facing::W => (0, -1),
        other => panic!("four-way oracle got {other:?}"),
    }
}

fn height(h: &[Vec<u32>], r: i64, c: i64) -> u32 {
    if r < 0 || c < 0 {
        return 0;
    }
    h.get(r as usize)
        .and_then(|row| row.get(c as usize))
        .copied()
        .unwrap_or(0)
}

/// Actor pose as (row, col, facing) on a four-way level.
pub type Pose = (i64, i64, Facing);

/// One primitive under the rules: walk on level ground, jump up exactly one
/// or down any amount, never onto an empty cell. Returns the new pose and
/// whether the actor moved.
pub fn apply(h: &[Vec<u32>], pose: Pose, op: Primitive) -> (Pose, bool) {
    let (r, c, f) = pose;
    let turn = |k: usize| CARDINALS[(CARDINALS.iter().position(|&x| x == f).unwrap() + k) % 4];
    match op {
        Primitive::TurnLeft => ((r, c, turn(3)), false),
        Primitive::TurnRight => ((r, c, turn(1)), false),
        Primitive::Forward | Primitive::Jump => {
            let (dr, dc) = delta(f);
            let (here, there) = (height(h, r, c), height(h, r + dr, c + dc));
            let ok = there > 0
                && if op == Primitive::Forward {
                    there == here
                } else {
                    there == here + 1 || there < here
                };
            if ok {
                ((r + dr, c + dc, f), true)
            } else {
                (pose, false)
            }
        }
    }
}

/// Whether a straight-line program wins: every goal visited, counting the
/// start cell, with the run stopping as soon as the last goal is reached.
pub fn sequence_wins(h: &[Vec<u32>], start: Pose, goals: &[(i64, i64)], seq: &[Primitive]) -> bool {
    let mut seen: Vec<bool> = goals.iter().map(|&g| g == (start.0, start.1)).collect();
    if seen.iter().all(|&s| s) {
        return true;
    }
    let mut pose = start;
    for &op in seq {
        let (next, moved) = apply(h, pose, op);
        pose = next;
        if moved {
            for (i, g) in goals.iter().enumerate() {
                if *g == (pose.0, pose.1) {
                    seen[i] = true;
                }
            }
            if seen.iter().all(|&s| s) {
                return true;
            }
        }
    }
    false
}

/// Length of the shortest winning straight-line program over `ops`, or
/// `None` if no program of at most `max_len` primitives wins.
pub fn shortest_sequence(
    h: &[Vec<u32>],
    start: Pose,
    goals: &[(i64, i64)],
    ops: &[Primitive],
    max_len: u32,
) -> Option<u32> {
    for len in 0..=max_len {
        let total = (ops.len() as u64).pow(len);
        for code in 0..total {
            let mut k = code;
            let seq: Vec<Primitive> = (0..len)
                .map(|_| {
                    let op = ops[(k % ops.len() as u64) as usize];
                    k /= ops.len() as u64;
                    op
                })
                .collect();
            if sequence_wins(h, start, goals, &seq) {
                return Some(len);
            }
        }
    }
    None
}

pub fn pose_of(level: &Level) -> Pose {
    let s = level.start();
    (i64::from(s.row), i64::from(s.col), s.facing)
}

pub fn goals_of(level: &Level) -> Vec<(i64, i64)> {
    level
        .goals()
        .iter()
        .map(|g| (i64::from(g.row), i64::from(g.col)))
        .collect()
}

pub fn pose_of_state(s: &ActorState) -> Pose {
    (i64::from(s.row), i64::from(s.col), s.facing)
}

// ---------------------------------------------------------------------------
// Generators

/// Slot limits are generous; callers that care set their own.
pub fn random_level(
    rng: &mut impl Rng,
    max_side: usize,
    max_height: u32,
    step_limit: u32,
) -> Level {
    loop {
        let rows = rng.random_range(1..=max_side);
        let cols = rng.random_range(1..=max_side);
        let heights: Vec<Vec<u32>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        if rng.random_bool(0.25) {
                            0
                        } else {
                            rng.random_range(1..=max_height)
                        }
                    })
                    .collect()
            })
            .collect();
        let walkable: Vec<Cell> = (0..rows)
            .flat_map(|r| {
                (0..cols).map(move |c| Cell {
                    row: r as u32,
                    col: c as u32,
                })
            })
            .filter(|c| heights[c.row as usize][c.col as usize] > 0)
            .collect();
        if walkable.is_empty() {
            continue;
        }
        let start = walkable[rng.random_range(0..walkable.len())];
        let goal_count = rng.random_range(1..=walkable.len().min(3));
        let goals: Vec<Cell> = (0..goal_count)
            .map(|_| walkable[rng.random_range(0..walkable.len())])
            .collect();
        let facing = CARDINALS[rng.random_range(0..4)];
        return Level::from_heights(heights)
            .and_then(|l| {
                l.with_start(StartPose {
                    row: start.row,
                    col: start.col,
                    facing,
                })
            })
            .and_then(|l| l.with_goals(goals))
            .and_then(|l| {
                l.with_limits(SlotLimits {
                    main: 1000,
                    procs: vec![1000, 1000],
                    step_limit,
                })
            })
            .expect("generated level is valid");
    }
}

pub fn random_primitive(rng: &mut impl Rng) -> Primitive {
    Primitive::ALL[rng.random_range(0..4)]
}

pub fn random_condition(rng: &mut impl Rng) -> Condition {
    Condition::ALL[rng.random_range(0..4)]
}

/// A sequence of up to `len` instructions; `calls` allows `C1`/`C2`.
pub fn random_seq(rng: &mut impl Rng, len: usize, depth: u32, calls: bool) -> Vec<Instruction> {
    let n = rng.random_range(0..=len);
    (0..n)
        .map(|_| random_instr(rng, depth, calls, true))
        .collect()
}

pub fn random_instr(rng: &mut impl Rng, depth: u32, calls: bool, allow_if: bool) -> Instruction {
    let roll = rng.random_range(0..10);
    match roll {
        0 | 1 if depth > 0 => Instruction::Loop {
            count: rng.random_range(1..=4),
            body: random_seq(rng, 3, depth - 1, calls),
        },
        2 if allow_if => Instruction::If {
            cond: random_condition(rng),
            then: Box::new(random_instr(rng, depth.saturating_sub(1), calls, false)),
        },
        3 if calls => Instruction::Call(if rng.random_bool(0.5) {
            ProcId::P1
        } else {
            ProcId::P2
        }),
        _ => Instruction::Prim(random_primitive(rng)),
    }
}

pub fn random_program(rng: &mut impl Rng) -> Program {
    let mut p = Program::main_only(random_seq(rng, 6, 2, true));
    for id in [ProcId::P1, ProcId::P2] {
        if rng.random_bool(0.6) {
            p = p.with_proc(id, random_seq(rng, 4, 1, true));
        }
    }
    p
}

// ---------------------------------------------------------------------------
// Law checks shared by the integration tests and the acceptance suite

/// Painter equivalence for every level with the given maximum shape and
/// height, with one actor on each walkable cell in turn. Returns the number
/// of scenes checked.
pub fn painter_exhaustive(max_side: usize, max_height: u32) -> Result<usize, String> {
    let mut scenes = 0;
    for rows in 1..=max_side {
        for cols in 1..=max_side {
            for h in all_height_maps(rows, cols, max_height) {
                let Ok(level) = Level::from_heights(h.clone()) else {
                    continue;
                };
                for r in 0..rows {
                    for c in 0..cols {
                        if h[r][c] == 0 {
                            continue;
                        }
                        let actor = ActorState {
                            row: r as u32,
                            col: c as u32,
                            height: h[r][c],
                            facing: Facing::E,
                        };
                        let order = isobot::depth::draw_order(&level, &[actor]);
                        if let Some((x, y, painted, nearest)) = painter_mismatch(&order) {
                            return Err(format!(
                                "heights {h:?}, actor at ({r},{c}): at ({x},{y}) {} covers nearer {}",
                                order[painted], order[nearest]
                            ));
                        }
                        scenes += 1;
                    }
                }
            }
        }
    }
    Ok(scenes)
}

fn differ(what: &str, level: &Level, a: &Trace, b: &Trace) -> String {
    format!(
        "{what} differ on level {}\n  left:  {a:?}\n  right: {b:?}",
        level.to_json()
    )
}

/// Replays a trace with the independent movement model and checks every
/// event, the final pose and the outcome's goal claim.
pub fn replay_matches(level: &Level, trace: &Trace) -> Result<(), String> {
    let h = level.heights();
    let goals = goals_of(level);
    let mut pose = pose_of(level);
    let mut seen: Vec<bool> = goals.iter().map(|&g| g == (pose.0, pose.1)).collect();
    for (i, step) in trace.steps.iter().enumerate() {
        let (next, moved) = apply(h, pose, step.op);
        let ok = match step.event {
            Event::Moved { row, col, .. } | Event::Won { row, col, .. } => {
                moved && (i64::from(row), i64::from(col)) == (next.0, next.1)
            }
            Event::Turned { facing } => !moved && facing == next.2,
            Event::Blocked { .. } => !moved && next == pose,
        };
        if !ok {
            return Err(format!(
                "step {i} {:?} disagrees with the model from {pose:?}",
                step
            ));
        }
        pose = next;
        for (k, g) in goals.iter().enumerate() {
            if *g == (pose.0, pose.1) {
                seen[k] = true;
            }
        }
        let all = seen.iter().all(|&s| s);
        if matches!(step.event, Event::Won { .. }) != (all && moved)
            || (all && i + 1 != trace.steps.len())
        {
            return Err(format!("win reported wrongly at step {i}"));
        }
    }
    if pose != pose_of_state(&trace.final_state) {
        return Err(format!("final pose {pose:?} vs {:?}", trace.final_state));
    }
    let won = seen.iter().all(|&s| s);
    if won != (trace.outcome == Outcome::Win) {
        return Err(format!(
            "outcome {:?} but all goals visited = {won}",
            trace.outcome
        ));
    }
    if trace.steps.len() as u32 > level.limits().step_limit {
        return Err("trace longer than the step limit".into());
    }
    Ok(())
}

fn prefix_suffix(rng: &mut impl Rng) -> (Vec<Instruction>, Vec<Instruction>) {
    (random_seq(rng, 2, 1, true), random_seq(rng, 2, 1, true))
}

/// Loop/inline, procedure/inline, single-step/batch and replay determinism
/// over `pairs` random (level, program) pairs.
pub fn vm_laws(pairs: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let level = random_level(&mut rng, 5, 3, 200);
        let program = random_program(&mut rng);

        // Replay determinism, checked against the independent model.
        let trace = run(&program, &level);
        let again = run(&program, &level);
        if trace != again {
            return Err(differ("repeated runs", &level, &trace, &again));
        }
        replay_matches(&level, &trace)
            .map_err(|e| format!("{e}\nprogram {program}\nlevel {}", level.to_json()))?;

        // Single-step/batch.
        let mut session = Session::load(level.clone());
        session
            .set_program(program.clone())
            .map_err(|e| format!("slot limits: {e}"))?;
        let mut events = Vec::new();
        loop {
            let report = session.step().map_err(|e| e.to_string())?;
            events.extend(report.event);
            if let isobot::session::SessionStatus::Finished(outcome) = report.status {
                let stepped = Trace {
                    steps: events,
                    outcome,
                    final_state: session.actor(),
                };
                if stepped != trace {
                    return Err(differ("stepped and batch runs", &level, &stepped, &trace));
                }
                break;
            }
        }

        // Loop/inline.
        let (pre, suf) = prefix_suffix(&mut rng);
        let body = random_seq(&mut rng, 3, 1, true);
        let n = rng.random_range(1..=4u8);
        let looped = Program {
            main: [
                pre.clone(),
                vec![Instruction::Loop {
                    count: n,
                    body: body.clone(),
                }],
                suf.clone(),
            ]
            .concat(),
            procs: program.procs.clone(),
        };
        let inlined = Program {
            main: [
                pre.clone(),
                std::iter::repeat_n(body.clone(), n as usize)
                    .flatten()
                    .collect(),
                suf.clone(),
            ]
            .concat(),
            procs: program.procs.clone(),
        };
        let (a, b) = (run(&looped, &level), run(&inlined, &level));
        if a != b {
            return Err(differ(
                &format!("loop and inline ({looped} vs {inlined})"),
                &level,
                &a,
                &b,
            ));
        }

        // Procedure/inline with a body that makes no calls.
        let body = random_seq(&mut rng, 4, 1, false);
        let p2 = program.procs[1].clone();
        let called = Program {
            main: [
                pre.clone(),
                vec![Instruction::Call(ProcId::P1)],
                suf.clone(),
            ]
            .concat(),
            procs: [Some(body.clone()), p2.clone()],
        };
        let inlined = Program {
            main: [pre, body, suf].concat(),
            procs: [None, p2],
        };
        // The inlined program's own calls to C1 must keep meaning the body.
        let inlined = Program {
            procs: [called.procs[0].clone(), inlined.procs[1].clone()],
            ..inlined
        };
        let (a, b) = (run(&called, &level), run(&inlined, &level));
        if a != b {
            return Err(differ(
                &format!("call and inline ({called} vs {inlined})"),
                &level,
                &a,
                &b,
            ));
        }
    }
    Ok(())
}

/// A self-calling procedure that never wins must stop after exactly
/// `step_limit` primitives.
pub fn recursion_hits_limit(level: &Level) -> Result<(), String> {
    let program: Program = isobot::program::parse_program("main: C1 ; p1: R C1").unwrap();
    let trace = run(&program, level);
    let limit = level.limits().step_limit as usize;
    if trace.outcome != Outcome::StepLimitExceeded || trace.steps.len() != limit {
        return Err(format!(
            "{:?} after {} steps, limit {limit}",
            trace.outcome,
            trace.steps.len()
        ));
    }
    Ok(())
}

pub const BASIC_OPS: [Primitive; 4] = [
    Primitive::Forward,
    Primitive::TurnLeft,
    Primitive::TurnRight,
    Primitive::Jump,
];

/// Compares the solver on `level` (main slots only, {F,L,R,J}) with
/// brute-force enumeration of straight-line programs.
pub fn solver_agrees(level: &Level) -> Result<(), String> {
    let main = level.limits().main;
    let oracle = shortest_sequence(
        level.heights(),
        pose_of(level),
        &goals_of(level),
        &BASIC_OPS,
        main,
    );
    let result = solve(level, InstructionSet::basic(), u64::MAX);
    let context = || format!("level {}", level.to_json());
    match (&result.status, oracle) {
        (SolveStatus::Solved { program, steps }, Some(best)) => {
            if program.total_slots() != best {
                return Err(format!(
                    "solver found {program} ({} slots), oracle {best}; {}",
                    program.total_slots(),
                    context()
                ));
            }
            let trace = run(program, level);
            if trace.outcome != Outcome::Win || trace.steps.len() as u32 != *steps {
                return Err(format!(
                    "{program} does not replay to a win in {steps} steps; {}",
                    context()
                ));
            }
            let seq: Vec<Primitive> = program
                .main
                .iter()
                .map(|i| match i {
                    Instruction::Prim(p) => Ok(*p),
                    other => Err(format!("{other:?} outside the instruction set")),
                })
                .collect::<Result<_, _>>()?;
            if !sequence_wins(level.heights(), pose_of(level), &goals_of(level), &seq) {
                return Err(format!("model says {program} does not win; {}", context()));
            }
            Ok(())
        }
        (SolveStatus::Unsolvable, None) => Ok(()),
        (status, oracle) => Err(format!(
            "solver {status:?}, oracle {oracle:?}; {}",
            context()
        )),
    }
}

/// Exhaustive family: every shape of at most `max_cells` cells, heights
/// `0..=max_height`, every start cell and facing, every single goal, `main` slots.
pub fn exhaustive_solver_levels(
    max_cells: usize,
    max_height: u32,
    main: u32,
) -> impl Iterator<Item = Level> {
    (1..=max_cells)
        .flat_map(move |rows| (1..=max_cells / rows).map(move |cols| (rows, cols)))
        .flat_map(move |(rows, cols)| all_height_maps(rows, cols, max_height))
        .flat_map(move |h| {
            let cells: Vec<Cell> = (0..h.len())
                .flat_map(|r| {
                    (0..h[0].len()).map(move |c| Cell {
                        row: r as u32,
                        col: c as u32,
                    })
                })
                .filter(|c| h[c.row as usize][c.col as usize] > 0)
                .collect();
            let mut out = Vec::new();
            for s in &cells {
                for facing in CARDINALS {
                    for g in &cells {
                        let level = Level::from_heights(h.clone())
                            .and_then(|l| {
                                l.with_start(StartPose {
                                    row: s.row,
                                    col: s.col,
                                    facing,
                                })
                            })
                            .and_then(|l| l.with_goals([*g]))
                            .and_then(|l| {
                                l.with_limits(SlotLimits {
                                    main,
                                    procs: vec![],
                                    step_limit: 100,
                                })
                            })
                            .expect("valid level");
                        out.push(level);
                    }
                }
            }
            out
        })
}

/// Seeded random levels up to `max_side` square with 0 to 5 main slots.
pub fn random_solver_levels(count: usize, max_side: usize, seed: u64) -> Vec<Level> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let main = rng.random_range(0..=5);
            random_level(&mut rng, max_side, 3, 100)
                .with_limits(SlotLimits {
                    main,
                    procs: vec![],
                    step_limit: 100,
                })
                .expect("valid level")
        })
        .collect()
}
