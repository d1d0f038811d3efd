//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines print in order.

mod common;

use std::cmp::Ordering;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use isobot::depth::{compare_depth, draw_order, dump, Drawable, DrawableKind};
use isobot::grid::{projection_angle, GridCoord, TileDims};
use isobot::level::{arrays, Cell, Level, SlotLimits};
use isobot::uat::{score_uat, UatTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UAT_TIME: Duration = Duration::from_secs(1);
const WORLD_TIME: Duration = Duration::from_secs(1);
const ANGLE_DEGREES: f64 = 26.565;
const ANGLE_TOLERANCE: f64 = 0.001;
const DEPTH_TRIPLES: usize = 10_000;
const PAINTER_MAX_SIDE: usize = 3;
const PAINTER_MAX_HEIGHT: u32 = 2;
const PAINTER_TIME: Duration = Duration::from_secs(60);
const VM_PAIRS: usize = 1_000;
const SOLVER_MAX_MAIN: u32 = 5;
const SOLVER_EXHAUSTIVE_CELLS: usize = 4;
const SOLVER_EXHAUSTIVE_HEIGHT: u32 = 3;
const SOLVER_RANDOM_LEVELS: usize = 3_000;
const SOLVER_TIME: Duration = Duration::from_secs(300);
const SEED: u64 = 0x150b07;

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(took)
    } else {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    }
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn uat() -> Result<String, String> {
    let start = Instant::now();
    let file = std::fs::File::open(crate_dir().join("../../corpus/uat/survey.csv"))
        .map_err(|e| e.to_string())?;
    let report = score_uat(&UatTable::from_csv(file).map_err(|e| e.to_string())?);
    let counts: Vec<u64> = report.questions.iter().map(|q| q.count).collect();
    check(counts == [128, 124, 128, 122, 127], || {
        format!("counts {counts:?}")
    })?;
    let got = (
        report.average_text(),
        report.result_text(),
        report.final_text(),
    );
    check(
        got == ("20.97".into(), "4.19".into(), "83.87".into()),
        || format!("got {got:?}"),
    )?;
    check(
        (report.final_percent - report.final_percent_direct).abs() < 1e-9,
        || "routes disagree".into(),
    )?;
    let took = within(UAT_TIME, start)?;
    Ok(format!(
        "counts 128 124 128 122 127, average 20.97, result 4.19, final 83.87 in {took:.2?}"
    ))
}

fn world() -> Result<String, String> {
    let start = Instant::now();
    let flat = Level::from_heights(arrays::to_vec(&arrays::FLAT)).map_err(|e| e.to_string())?;
    let stairs = Level::from_heights(arrays::to_vec(&arrays::STAIRS)).map_err(|e| e.to_string())?;
    let sizes = (flat.build_world().len(), stairs.build_world().len());
    check(sizes == (27, 35), || format!("placements {sizes:?}"))?;
    check(stairs.max_height() == (3, Cell { row: 3, col: 2 }), || {
        format!("max {:?}", stairs.max_height())
    })?;
    for (name, level) in [("lattice", &flat), ("summit", &stairs)] {
        let a = dump(&draw_order(level, &[]));
        let b = dump(&draw_order(level, &[]));
        let golden =
            std::fs::read_to_string(crate_dir().join(format!("tests/golden/{name}.order")))
                .map_err(|e| e.to_string())?;
        check(a == b && a == golden, || {
            format!("{name} dump is not byte-stable against its golden file")
        })?;
    }
    let took = within(WORLD_TIME, start)?;
    Ok(format!(
        "27 and 35 placements, max 3 at (3,2), golden dumps stable in {took:.2?}"
    ))
}

fn angle() -> Result<String, String> {
    let mut seen = Vec::new();
    for (w, sprite, space) in [(64.0, 48.0, 16.0), (32.0, 32.0, 0.0), (128.0, 100.0, 20.0)] {
        let dims = TileDims::new(w, sprite, space).map_err(|e| e.to_string())?;
        let a = projection_angle(&dims);
        check((a - ANGLE_DEGREES).abs() <= ANGLE_TOLERANCE, || {
            format!("{a} for width {w}")
        })?;
        seen.push(format!("{a:.4}"));
    }
    Ok(format!("{} degrees for three dims", seen.join(", ")))
}

fn random_drawable(rng: &mut impl Rng) -> Drawable {
    let cell = GridCoord::new(
        rng.random_range(0..4),
        rng.random_range(0..4),
        rng.random_range(0..4),
    );
    let kind = if rng.random_bool(0.5) {
        DrawableKind::Tile
    } else {
        DrawableKind::Actor
    };
    Drawable {
        kind,
        cell,
        order: rng.random_range(0..100),
    }
}

fn same_item(a: &Drawable, b: &Drawable) -> bool {
    (a.kind, a.cell) == (b.kind, b.cell)
}

fn depth_order() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..DEPTH_TRIPLES {
        let (a, b, c) = (
            random_drawable(&mut rng),
            random_drawable(&mut rng),
            random_drawable(&mut rng),
        );
        check(compare_depth(&a, &a) == Ordering::Equal, || {
            format!("{a:?} not equal to itself")
        })?;
        for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
            let xy = compare_depth(x, y);
            check(xy == compare_depth(y, x).reverse(), || {
                format!("asymmetric on {x:?} {y:?}")
            })?;
            check((xy == Ordering::Equal) == same_item(x, y), || {
                format!("not total on {x:?} {y:?}")
            })?;
        }
        let mut v = [a, b, c];
        v.sort_by(compare_depth);
        let ok = compare_depth(&v[0], &v[1]) != Ordering::Greater
            && compare_depth(&v[1], &v[2]) != Ordering::Greater
            && compare_depth(&v[0], &v[2]) != Ordering::Greater;
        check(ok, || format!("not transitive on {v:?}"))?;
    }
    let start = Instant::now();
    let scenes = common::painter_exhaustive(PAINTER_MAX_SIDE, PAINTER_MAX_HEIGHT)?;
    let took = within(PAINTER_TIME, start)?;
    Ok(format!(
        "{DEPTH_TRIPLES} triples ordered; painter oracle agrees on {scenes} scenes in {took:.2?}"
    ))
}

fn vm() -> Result<String, String> {
    common::vm_laws(VM_PAIRS, SEED)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0;
    while checked < 50 {
        let limit = rng.random_range(1..=300);
        let level = common::random_level(&mut rng, 4, 3, limit);
        let start = level.start();
        if level
            .goals()
            .iter()
            .all(|g| (g.row, g.col) == (start.row, start.col))
        {
            continue;
        }
        common::recursion_hits_limit(&level)?;
        checked += 1;
    }
    let fixed = Level::from_heights(vec![vec![1, 1, 1]])
        .and_then(|l| {
            l.with_limits(SlotLimits {
                step_limit: 1000,
                ..SlotLimits::default()
            })
        })
        .map_err(|e| e.to_string())?;
    common::recursion_hits_limit(&fixed)?;
    Ok(format!("{VM_PAIRS} pairs: loop, call, stepping and replay laws hold; self-recursion stops at the limit on 51 levels"))
}

fn solver() -> Result<String, String> {
    let start = Instant::now();
    let mut n = 0;
    for level in common::exhaustive_solver_levels(
        SOLVER_EXHAUSTIVE_CELLS,
        SOLVER_EXHAUSTIVE_HEIGHT,
        SOLVER_MAX_MAIN,
    ) {
        common::solver_agrees(&level)?;
        n += 1;
    }
    for level in common::random_solver_levels(SOLVER_RANDOM_LEVELS, 4, SEED) {
        common::solver_agrees(&level)?;
        n += 1;
    }
    let took = within(SOLVER_TIME, start)?;
    Ok(format!(
        "{n} levels: minimal winning program or correct unsolvable claim, {took:.2?}"
    ))
}

type Criterion = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 6] = [
        ("uat-reproduction", uat),
        ("world-construction", world),
        ("projection-angle", angle),
        ("depth-sort", depth_order),
        ("vm-laws", vm),
        ("solver-oracle", solver),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
