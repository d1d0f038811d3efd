//! Command-line front end. Exit codes: 0 success, 1 domain failure
//! (invalid level, loss, unsolvable), 2 usage, I/O or parse error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::depth::{self, Drawable, DrawableKind};
use crate::grid::{grid_to_screen, projection_angle};
use crate::level::{parse_level, Level, LevelError};
use crate::program::{parse_program, print_program, run, Outcome};
use crate::protocol::ProtocolServer;
use crate::solver::{solve, InstructionSet, SolveStatus};
use crate::uat::{score_uat, UatError, UatTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "isobot",
    version,
    about = "Isometric programming puzzle engine"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a level file and summarize it.
    Validate { level: PathBuf },
    /// Draw a level's tiles.
    Render {
        level: PathBuf,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
        /// Also draw the actor at its start pose.
        #[arg(long)]
        actor: bool,
    },
    /// Run a program on a level.
    Run {
        level: PathBuf,
        program: PathBuf,
        /// Print one line per executed primitive.
        #[arg(long)]
        trace: bool,
    },
    /// Search for a shortest winning program.
    Solve {
        level: PathBuf,
        /// Maximum number of candidate programs to run.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Comma separated instruction kinds: F, L, R, J, loop, if, call.
        #[arg(long, default_value = "F,L,R,J")]
        ops: InstructionSet,
    },
    /// Score a questionnaire CSV.
    ScoreUat {
        csv: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Answer session protocol requests on stdin, one JSON object per line.
    Serve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
    Order,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

/// Output of a finished command: stdout text plus exit code.
type Done = Result<(String, i32), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_level(path: &Path) -> Result<Level, Failure> {
    let text = read(path)?;
    parse_level(&text).map_err(|e| {
        let message = format!("{}: {e}", path.display());
        match e {
            LevelError::Schema { .. } => Failure::usage(message),
            _ => Failure::domain(message),
        }
    })
}

fn cmd_validate(path: &Path) -> Done {
    let level = load_level(path)?;
    let (max, at) = level.max_height();
    let start = level.start();
    let mut out = String::new();
    let _ = writeln!(out, "ok {}", level.name().unwrap_or("level"));
    let _ = writeln!(out, "size {}x{}", level.rows(), level.cols());
    let _ = writeln!(out, "tiles {}", level.total_tiles());
    let _ = writeln!(out, "walkable {}", level.walkable_cells());
    let _ = writeln!(out, "max_height {} at ({},{})", max, at.row, at.col);
    let _ = writeln!(out, "start ({},{}) {}", start.row, start.col, start.facing);
    let goals: Vec<String> = level
        .goals()
        .iter()
        .map(|g| format!("({},{})", g.row, g.col))
        .collect();
    let _ = writeln!(out, "goals {}", goals.join(" "));
    let _ = writeln!(
        out,
        "projection_angle {:.3}",
        projection_angle(level.dims())
    );
    Ok((out, EXIT_OK))
}

fn scene(level: &Level, actor: bool) -> Vec<Drawable> {
    let actors = if actor {
        vec![level.start_state()]
    } else {
        Vec::new()
    };
    depth::draw_order(level, &actors)
}

/// Characters at screen positions scaled by a quarter diamond width, so one
/// grid step moves two columns across and one line down. Later drawables
/// overwrite earlier ones, so what remains is what a viewer would see.
pub fn render_ascii(level: &Level, actor: bool) -> String {
    let unit = level.dims().diamond_width() / 4.0;
    let glyphs: Vec<(i64, i64, char)> = scene(level, actor)
        .iter()
        .map(|d| {
            let p = grid_to_screen(d.cell, level.dims());
            let ch = match d.kind {
                DrawableKind::Tile => char::from_digit(d.cell.stack + 1, 10).unwrap_or('#'),
                DrawableKind::Actor => '@',
            };
            (
                (p.x / unit).round() as i64,
                (-p.y / unit).round() as i64,
                ch,
            )
        })
        .collect();
    let (x0, x1) = (
        glyphs.iter().map(|g| g.0).min().unwrap_or(0),
        glyphs.iter().map(|g| g.0).max().unwrap_or(0),
    );
    let (y0, y1) = (
        glyphs.iter().map(|g| g.1).min().unwrap_or(0),
        glyphs.iter().map(|g| g.1).max().unwrap_or(0),
    );
    let mut canvas = vec![vec![' '; (x1 - x0 + 1) as usize]; (y1 - y0 + 1) as usize];
    for (x, y, ch) in glyphs {
        canvas[(y - y0) as usize][(x - x0) as usize] = ch;
    }
    let mut out = String::new();
    for line in canvas {
        let s: String = line.into_iter().collect();
        out.push_str(s.trim_end());
        out.push('\n');
    }
    out
}

const TILE_FILLS: [&str; 4] = ["#7fb069", "#e6aa68", "#ca3c25", "#4d6cfa"];

/// One flat diamond per drawable in draw order; y grows downward.
pub fn render_svg(level: &Level, actor: bool) -> String {
    let dims = level.dims();
    let (hw, hh) = (dims.diamond_width() / 2.0, dims.diamond_width() / 4.0);
    let order = scene(level, actor);
    let shapes: Vec<(f64, f64, f64, &Drawable)> = order
        .iter()
        .map(|d| {
            let p = grid_to_screen(d.cell, dims);
            let scale = if d.kind == DrawableKind::Actor {
                0.5
            } else {
                1.0
            };
            // Adding zero turns a negated 0.0 into +0.0 so output never shows "-0.00".
            (p.x + 0.0, -p.y + 0.0, scale, d)
        })
        .collect();
    let pad = hw;
    let min_x = shapes.iter().map(|s| s.0).fold(f64::INFINITY, f64::min) - hw - pad;
    let max_x = shapes.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max) + hw + pad;
    let min_y = shapes.iter().map(|s| s.1).fold(f64::INFINITY, f64::min) - hh - pad;
    let max_y = shapes.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max) + hh + pad;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.2} {:.2} {:.2} {:.2}">"#,
        min_x,
        min_y,
        max_x - min_x,
        max_y - min_y
    );
    for (x, y, scale, d) in shapes {
        let (w, h) = (hw * scale, hh * scale);
        let fill = match d.kind {
            DrawableKind::Tile => TILE_FILLS[d.cell.stack as usize % TILE_FILLS.len()],
            DrawableKind::Actor => "#222222",
        };
        let _ = writeln!(
            out,
            r##"  <polygon data-order="{}" data-kind="{}" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{}" stroke="#000000" stroke-width="0.5"/>"##,
            d.order,
            d.kind.as_str(),
            x,
            y - h,
            x + w,
            y,
            x,
            y + h,
            x - w,
            y,
            fill
        );
    }
    out.push_str("</svg>\n");
    out
}

fn cmd_render(path: &Path, format: RenderFormat, actor: bool) -> Done {
    let level = load_level(path)?;
    let out = match format {
        RenderFormat::Ascii => render_ascii(&level, actor),
        RenderFormat::Svg => render_svg(&level, actor),
        RenderFormat::Order => depth::dump(&scene(&level, actor)),
    };
    Ok((out, EXIT_OK))
}

fn cmd_run(level: &Path, program: &Path, trace: bool) -> Done {
    let level = load_level(level)?;
    let text = read(program)?;
    let program =
        parse_program(&text).map_err(|e| Failure::usage(format!("{}: {e}", program.display())))?;
    program
        .check_limits(level.limits())
        .map_err(|e| Failure::domain(e.to_string()))?;
    let result = run(&program, &level);
    let mut out = String::new();
    if trace {
        for (i, s) in result.steps.iter().enumerate() {
            let _ = writeln!(out, "{} {} {}", i + 1, s.op.token(), s.event);
        }
    }
    let n = result.steps.len();
    let code = match result.outcome {
        Outcome::Win => {
            let _ = writeln!(out, "Win in {n} steps");
            EXIT_OK
        }
        Outcome::Incomplete => {
            let _ = writeln!(out, "Incomplete after {n} steps");
            EXIT_FAILURE
        }
        Outcome::StepLimitExceeded => {
            let _ = writeln!(out, "Step limit exceeded after {n} steps");
            EXIT_FAILURE
        }
    };
    Ok((out, code))
}

fn cmd_solve(level: &Path, budget: u64, ops: InstructionSet) -> Done {
    let level = load_level(level)?;
    let result = solve(&level, ops, budget);
    let mut out = String::new();
    let code = match &result.status {
        SolveStatus::Solved { program, steps } => {
            let _ = writeln!(out, "{}", print_program(program));
            let _ = writeln!(out, "slots {}", program.total_slots());
            let _ = writeln!(out, "steps {steps}");
            EXIT_OK
        }
        SolveStatus::Unsolvable => {
            let _ = writeln!(out, "Unsolvable");
            EXIT_FAILURE
        }
        SolveStatus::BudgetExceeded => {
            let _ = writeln!(out, "Budget exceeded");
            EXIT_FAILURE
        }
    };
    let _ = writeln!(out, "explored {}", result.explored);
    Ok((out, code))
}

fn cmd_score_uat(path: &Path, format: ReportFormat) -> Done {
    let file =
        fs::File::open(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let table = UatTable::from_csv(file).map_err(|e| {
        let message = format!("{}: {e}", path.display());
        match e {
            UatError::Csv(_) => Failure::usage(message),
            _ => Failure::domain(message),
        }
    })?;
    let report = score_uat(&table);
    let mut out = match format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => report.to_json(),
    };
    if format == ReportFormat::Json {
        out.push('\n');
    } else {
        out.push_str("note: percentage is 100*count/respondents\n");
    }
    Ok((out, EXIT_OK))
}

/// Runs the CLI with explicit arguments and streams; returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let done = match cli.command {
        Command::Validate { level } => cmd_validate(&level),
        Command::Render {
            level,
            format,
            actor,
        } => cmd_render(&level, format, actor),
        Command::Run {
            level,
            program,
            trace,
        } => cmd_run(&level, &program, trace),
        Command::Solve { level, budget, ops } => cmd_solve(&level, budget, ops),
        Command::ScoreUat { csv, format } => cmd_score_uat(&csv, format),
        Command::Serve => {
            let stdin = io::stdin();
            return match ProtocolServer::new().serve(stdin.lock(), stdout) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match done {
        Ok((text, code)) => {
            let _ = stdout.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
