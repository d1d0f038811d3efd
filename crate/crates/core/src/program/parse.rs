use std::fmt;

use thiserror::Error;

use super::{Condition, Instruction, Primitive, ProcId, Program, MAX_LOOP_COUNT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Span {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Main,
    Proc(ProcId),
    Colon,
    Semi,
    Prim(Primitive),
    /// `L` followed by a count; the count is validated by the parser.
    LoopHead(u32),
    Call(ProcId),
    Question,
    Cond(Condition),
    Open,
    Close,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Main => f.write_str("`main`"),
            Tok::Proc(p) => write!(f, "`{}`", p.name()),
            Tok::Colon => f.write_str("`:`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Prim(p) => write!(f, "`{}`", p.token()),
            Tok::LoopHead(n) => write!(f, "`L{n}`"),
            Tok::Call(p) => write!(f, "`{}`", p.call_token()),
            Tok::Question => f.write_str("`?`"),
            Tok::Cond(c) => write!(f, "`{}`", c.keyword()),
            Tok::Open => f.write_str("`{`"),
            Tok::Close => f.write_str("`}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const WORDS: &[(&str, Tok)] = &[
    ("main", Tok::Main),
    ("p1", Tok::Proc(ProcId::P1)),
    ("p2", Tok::Proc(ProcId::P2)),
    ("C1", Tok::Call(ProcId::P1)),
    ("C2", Tok::Call(ProcId::P2)),
    ("goal", Tok::Cond(Condition::OnGoal)),
    ("blocked", Tok::Cond(Condition::BlockedAhead)),
    ("higher", Tok::Cond(Condition::HigherAhead)),
    ("lower", Tok::Cond(Condition::LowerAhead)),
    ("F", Tok::Prim(Primitive::Forward)),
    ("R", Tok::Prim(Primitive::TurnRight)),
    ("J", Tok::Prim(Primitive::Jump)),
    (":", Tok::Colon),
    (";", Tok::Semi),
    ("?", Tok::Question),
    ("{", Tok::Open),
    ("}", Tok::Close),
];

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);

    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };

    loop {
        while i < chars.len() && chars[i].is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
        }
        let span = Span { line, col };
        if i == chars.len() {
            toks.push((Tok::Eof, span));
            return Ok(toks);
        }
        if chars[i] == 'L' {
            // `L` then optional whitespace then digits is a loop head.
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_whitespace() {
                j += 1;
            }
            let digits_start = j;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j > digits_start {
                let text: String = chars[digits_start..j].iter().collect();
                let n = text.parse::<u32>().unwrap_or(u32::MAX);
                toks.push((Tok::LoopHead(n), span));
                let n = j - i;
                advance(&mut i, &mut line, &mut col, n);
            } else {
                toks.push((Tok::Prim(Primitive::TurnLeft), span));
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let rest = &chars[i..];
        let word = WORDS.iter().find(|(w, _)| {
            let w: Vec<char> = w.chars().collect();
            rest.len() >= w.len() && rest[..w.len()] == w[..]
        });
        match word {
            Some((w, tok)) => {
                toks.push((*tok, span));
                advance(&mut i, &mut line, &mut col, w.chars().count());
            }
            None => {
                let found: String = rest
                    .iter()
                    .take_while(|c| c.is_alphanumeric())
                    .collect::<String>();
                let found = if found.is_empty() {
                    rest[0].to_string()
                } else {
                    found
                };
                return Err(ParseError {
                    line: span.line,
                    col: span.col,
                    expected: "an instruction or keyword".into(),
                    found: format!("`{found}`"),
                });
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos];
        if t.0 != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let (tok, span) = self.toks[self.pos];
        ParseError {
            line: span.line,
            col: span.col,
            expected: expected.into(),
            found: tok.to_string(),
        }
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        self.expect(Tok::Main, "`main`")?;
        self.expect(Tok::Colon, "`:`")?;
        let main = self.seq()?;
        let mut program = Program::main_only(main);
        loop {
            match self.peek() {
                Tok::Eof => return Ok(program),
                Tok::Semi => {
                    self.bump();
                }
                // A procedure header may also start on its own line.
                Tok::Proc(_) => {}
                _ => return Err(self.error("an instruction, `;` or end of input")),
            }
            let id = match self.peek() {
                Tok::Proc(id) => id,
                _ => return Err(self.error("`p1` or `p2`")),
            };
            if program.procs[id.index()].is_some() {
                return Err(self.error("a procedure that is not already defined"));
            }
            self.bump();
            self.expect(Tok::Colon, "`:`")?;
            program.procs[id.index()] = Some(self.seq()?);
        }
    }

    fn seq(&mut self) -> Result<Vec<Instruction>, ParseError> {
        let mut out = Vec::new();
        while !matches!(
            self.peek(),
            Tok::Semi | Tok::Close | Tok::Eof | Tok::Proc(_)
        ) {
            out.push(self.instr(true)?);
        }
        Ok(out)
    }

    fn instr(&mut self, allow_if: bool) -> Result<Instruction, ParseError> {
        match self.peek() {
            Tok::Prim(p) => {
                self.bump();
                Ok(Instruction::Prim(p))
            }
            Tok::Call(p) => {
                self.bump();
                Ok(Instruction::Call(p))
            }
            Tok::LoopHead(n) => {
                let count = match u8::try_from(n) {
                    Ok(c) if (1..=MAX_LOOP_COUNT).contains(&c) => c,
                    _ => return Err(self.error("a loop count between 1 and 99")),
                };
                self.bump();
                self.expect(Tok::Open, "`{`")?;
                let body = self.seq()?;
                self.expect(Tok::Close, "`}`")?;
                Ok(Instruction::Loop { count, body })
            }
            Tok::Question if allow_if => {
                self.bump();
                let cond = match self.peek() {
                    Tok::Cond(c) => c,
                    _ => return Err(self.error("`goal`, `blocked`, `higher` or `lower`")),
                };
                self.bump();
                let then = self.instr(false)?;
                Ok(Instruction::If {
                    cond,
                    then: Box::new(then),
                })
            }
            Tok::Question => Err(self.error("a non-conditional instruction")),
            _ => Err(self.error("an instruction")),
        }
    }
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    p.program()
}
