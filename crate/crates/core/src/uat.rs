//! User acceptance test scoring from raw Likert grade counts.
//!
//! Grades run from 5 (very agree) down to 1 (very not agree). All arithmetic
//! is exact; values are rounded half-up to two decimals only when shown.

use std::fmt::Write as _;
use std::io::Read;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const GRADES: [u64; 5] = [5, 4, 3, 2, 1];
pub const MAX_GRADE: u64 = 5;

#[derive(Debug, Error)]
pub enum UatError {
    #[error("table has no questions")]
    Empty,
    #[error("question {question} has no respondents")]
    NoRespondents { question: String },
    #[error("question {question} has {found} responses, expected {expected}")]
    InvalidTable {
        question: String,
        found: u64,
        expected: u64,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UatQuestion {
    pub label: String,
    /// Respondent counts for grades 5, 4, 3, 2, 1.
    pub counts: [u64; 5],
}

impl UatQuestion {
    pub fn new(label: impl Into<String>, counts: [u64; 5]) -> Self {
        UatQuestion {
            label: label.into(),
            counts,
        }
    }

    pub fn respondents(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum of grade times respondents.
    pub fn points(&self) -> u64 {
        self.counts.iter().zip(GRADES).map(|(n, g)| n * g).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UatTable {
    questions: Vec<UatQuestion>,
    respondents: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CsvRow {
    q: String,
    very_agree: u64,
    agree: u64,
    neutral: u64,
    not_agree: u64,
    very_not_agree: u64,
}

impl UatTable {
    pub fn new(questions: Vec<UatQuestion>) -> Result<Self, UatError> {
        let first = questions.first().ok_or(UatError::Empty)?;
        let respondents = first.respondents();
        if respondents == 0 {
            return Err(UatError::NoRespondents {
                question: first.label.clone(),
            });
        }
        if let Some(q) = questions.iter().find(|q| q.respondents() != respondents) {
            return Err(UatError::InvalidTable {
                question: q.label.clone(),
                found: q.respondents(),
                expected: respondents,
            });
        }
        Ok(UatTable {
            questions,
            respondents,
        })
    }

    /// Reads `q,very_agree,agree,neutral,not_agree,very_not_agree` rows.
    pub fn from_csv(reader: impl Read) -> Result<Self, UatError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut questions = Vec::new();
        for row in rdr.deserialize() {
            let r: CsvRow = row?;
            questions.push(UatQuestion::new(
                r.q,
                [
                    r.very_agree,
                    r.agree,
                    r.neutral,
                    r.not_agree,
                    r.very_not_agree,
                ],
            ));
        }
        UatTable::new(questions)
    }

    pub fn questions(&self) -> &[UatQuestion] {
        &self.questions
    }

    pub fn respondents(&self) -> u64 {
        self.respondents
    }
}

type Exact = Ratio<u128>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionScore {
    pub label: String,
    pub counts: [u64; 5],
    /// Sum of grade times respondents.
    pub count: u64,
    /// `count / (respondents / questions)`.
    pub analysis: f64,
    /// `100 * count / respondents`, the last column of the published table.
    pub percentage: f64,
    #[serde(skip)]
    exact_analysis: Exact,
    #[serde(skip)]
    exact_percentage: Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UatReport {
    pub respondents: u64,
    pub questions: Vec<QuestionScore>,
    /// Mean of the analysis column.
    pub average: f64,
    /// Mean grade per answer: `average / questions`.
    pub result: f64,
    /// `100 * result / 5`.
    pub final_percent: f64,
    /// `100 * points / (5 * questions * respondents)`, computed directly.
    pub final_percent_direct: f64,
    #[serde(skip)]
    exact: [Exact; 3],
}

fn to_f64(r: &Exact) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn ratio(n: u64, d: u64) -> Exact {
    Exact::new(u128::from(n), u128::from(d))
}

/// Two-decimal rendering, rounding halves up.
pub fn format_half_up(value: &Ratio<u128>) -> String {
    let (n, d) = (*value.numer(), *value.denom());
    let hundredths = (200 * n + d) / (2 * d);
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

pub fn score_uat(table: &UatTable) -> UatReport {
    let q = table.questions.len() as u64;
    let r = table.respondents;
    let per_question = ratio(r, q);
    let questions: Vec<QuestionScore> = table
        .questions
        .iter()
        .map(|question| {
            let count = question.points();
            let exact_analysis = ratio(count, 1) / per_question;
            let exact_percentage = ratio(100 * count, r);
            QuestionScore {
                label: question.label.clone(),
                counts: question.counts,
                count,
                analysis: to_f64(&exact_analysis),
                percentage: to_f64(&exact_percentage),
                exact_analysis,
                exact_percentage,
            }
        })
        .collect();

    let average = questions.iter().map(|s| s.exact_analysis).sum::<Exact>() / ratio(q, 1);
    let result = average / ratio(q, 1);
    let final_percent = result * ratio(100, MAX_GRADE);
    let total: u64 = questions.iter().map(|s| s.count).sum();

    // Same quantity along the two routes, in floating point.
    let average_f = questions.iter().map(|s| s.analysis).sum::<f64>() / q as f64;
    let final_f = 100.0 * (average_f / q as f64) / MAX_GRADE as f64;
    let direct_f = 100.0 * total as f64 / (MAX_GRADE * q * r) as f64;

    UatReport {
        respondents: r,
        questions,
        average: to_f64(&average),
        result: to_f64(&result),
        final_percent: final_f,
        final_percent_direct: direct_f,
        exact: [average, result, final_percent],
    }
}

impl UatReport {
    pub fn average_text(&self) -> String {
        format_half_up(&self.exact[0])
    }

    pub fn result_text(&self) -> String {
        format_half_up(&self.exact[1])
    }

    pub fn final_text(&self) -> String {
        format_half_up(&self.exact[2])
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<6} {:>5} {:>5} {:>5} {:>5} {:>5} {:>6} {:>9} {:>11}",
            "q", "5", "4", "3", "2", "1", "count", "analysis", "percentage"
        );
        for q in &self.questions {
            let _ = writeln!(
                s,
                "{:<6} {:>5} {:>5} {:>5} {:>5} {:>5} {:>6} {:>9} {:>11}",
                q.label,
                q.counts[0],
                q.counts[1],
                q.counts[2],
                q.counts[3],
                q.counts[4],
                q.count,
                format_half_up(&q.exact_analysis),
                format_half_up(&q.exact_percentage),
            );
        }
        let _ = writeln!(s, "respondents {}", self.respondents);
        let _ = writeln!(s, "questions {}", self.questions.len());
        let _ = writeln!(s, "average {}", self.average_text());
        let _ = writeln!(s, "result {}", self.result_text());
        let _ = writeln!(s, "final {}", self.final_text());
        s
    }

    /// JSON report with every displayed value rounded to two decimals.
    pub fn to_json(&self) -> String {
        let round = |r: &Exact| format_half_up(r).parse::<f64>().expect("decimal");
        let questions: Vec<serde_json::Value> = self
            .questions
            .iter()
            .map(|q| {
                serde_json::json!({
                    "q": q.label,
                    "counts": q.counts,
                    "count": q.count,
                    "analysis": round(&q.exact_analysis),
                    "percentage": round(&q.exact_percentage),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "respondents": self.respondents,
            "questions": questions,
            "average": round(&self.exact[0]),
            "result": round(&self.exact[1]),
            "final": round(&self.exact[2]),
        });
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

/// The grade counts behind the published acceptance table (30 respondents).
pub fn published_table() -> UatTable {
    UatTable::new(vec![
        UatQuestion::new("1", [12, 14, 4, 0, 0]),
        UatQuestion::new("2", [4, 26, 0, 0, 0]),
        UatQuestion::new("3", [8, 22, 0, 0, 0]),
        UatQuestion::new("4", [4, 24, 2, 0, 0]),
        UatQuestion::new("5", [7, 23, 0, 0, 0]),
    ])
    .expect("published table is consistent")
}
