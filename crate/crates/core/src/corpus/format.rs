//! Text and JSON formats for automata.
//!
//! ```text
//! automaton a6
//! alphabet 2
//! states 3
//! q0: (q0,x1) (q0,x0)      # pair t is (next state, output) on letter x_t
//! q1: (q1,x0) (q2,x1)
//! q2: (q1,x0) (q2,x0)
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{AutomatonError, MealyAutomaton};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid JSON automaton: {0}")]
    Json(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn word(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.find(|c: char| c.is_whitespace()).unwrap_or(rest.len());
        if len == 0 {
            return self.err("expected a name");
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if len == 0 {
            return self.err("expected a number");
        }
        let v = rest[..len].parse().map_err(|_| ParseError::Syntax {
            line: self.line,
            column: self.pos + 1,
            message: "number too large".into(),
        })?;
        self.pos += len;
        Ok(v)
    }

    /// `<prefix><index>` with the index below `bound`.
    fn indexed(&mut self, prefix: char, bound: usize) -> Result<usize, ParseError> {
        self.skip_ws();
        let col = self.pos;
        self.expect(&prefix.to_string())?;
        let v = self.number()?;
        if v >= bound {
            self.pos = col;
            return self.err(format!("{prefix}{v} out of range (limit {bound})"));
        }
        Ok(v)
    }
}

/// Meaningful lines, with comments removed and 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        (!l.trim().is_empty()).then_some((i + 1, l))
    })
}

pub fn parse_automaton(text: &str) -> Result<MealyAutomaton, ParseError> {
    let mut lines = content_lines(text);
    let mut header = |key: &str| -> Result<(Cursor<'_>, usize), ParseError> {
        let Some((line, l)) = lines.next() else {
            return Err(ParseError::Syntax {
                line: text.lines().count() + 1,
                column: 1,
                message: format!("missing `{key}` line"),
            });
        };
        let mut c = Cursor {
            line,
            text: l,
            pos: 0,
        };
        c.expect(key)?;
        Ok((c, line))
    };
    let (mut c, _) = header("automaton")?;
    let name = c.word()?.to_owned();
    if !c.at_end() {
        return c.err("unexpected text after name");
    }
    let (mut c, _) = header("alphabet")?;
    let m = c.number()?;
    if m == 0 || !c.at_end() {
        return c.err("alphabet size must be a positive integer");
    }
    let (mut c, _) = header("states")?;
    let n = c.number()?;
    if n == 0 || !c.at_end() {
        return c.err("state count must be a positive integer");
    }

    let mut rows: Vec<Option<Vec<(usize, usize)>>> = vec![None; n];
    let mut last_line = 0;
    for (line, l) in lines {
        last_line = line;
        let mut c = Cursor {
            line,
            text: l,
            pos: 0,
        };
        let q = c.indexed('q', n)?;
        if rows[q].is_some() {
            return c.err(format!("state q{q} defined twice"));
        }
        c.expect(":")?;
        let mut row = Vec::with_capacity(m);
        while !c.at_end() {
            if row.len() == m {
                return c.err(format!("more than {m} pairs"));
            }
            c.expect("(")?;
            let next = c.indexed('q', n)?;
            c.expect(",")?;
            let out = c.indexed('x', m)?;
            c.expect(")")?;
            row.push((next, out));
        }
        if row.len() != m {
            return c.err(format!("expected {m} pairs, found {}", row.len()));
        }
        rows[q] = Some(row);
    }
    if let Some(q) = rows.iter().position(Option::is_none) {
        return Err(ParseError::Syntax {
            line: last_line + 1,
            column: 1,
            message: format!("state q{q} is not defined"),
        });
    }
    let rows: Vec<_> = rows.into_iter().map(Option::unwrap).collect();
    Ok(MealyAutomaton::from_rows(Some(&name), &rows)?)
}

/// Canonical text form; [`parse_automaton`] inverts it.
pub fn serialize_automaton(aut: &MealyAutomaton) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "automaton {}", aut.name().unwrap_or("unnamed"));
    let _ = writeln!(out, "alphabet {}", aut.alphabet_size());
    let _ = writeln!(out, "states {}", aut.state_count());
    for q in 0..aut.state_count() {
        let pairs: Vec<String> = (0..aut.alphabet_size())
            .map(|x| format!("(q{},x{})", aut.next(q, x), aut.output(q, x)))
            .collect();
        let _ = writeln!(out, "q{q}: {}", pairs.join(" "));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonAutomaton {
    #[serde(default)]
    name: Option<String>,
    m: usize,
    n: usize,
    pi: Vec<Vec<usize>>,
    lambda: Vec<Vec<usize>>,
}

pub fn parse_automaton_json(text: &str) -> Result<MealyAutomaton, ParseError> {
    let j: JsonAutomaton =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    if j.pi.len() != j.n
        || j.lambda.len() != j.n
        || j.pi.iter().chain(&j.lambda).any(|r| r.len() != j.m)
    {
        return Err(ParseError::Json(format!(
            "tables must be {} rows of {} entries",
            j.n, j.m
        )));
    }
    let flat = |t: &[Vec<usize>]| t.iter().flatten().copied().collect::<Vec<_>>();
    Ok(MealyAutomaton::from_flat(
        j.name,
        j.m,
        j.n,
        flat(&j.pi),
        flat(&j.lambda),
    )?)
}

pub fn serialize_automaton_json(aut: &MealyAutomaton) -> String {
    let j = JsonAutomaton {
        name: aut.name().map(str::to_owned),
        m: aut.alphabet_size(),
        n: aut.state_count(),
        pi: aut.pi_rows(),
        lambda: aut.lambda_rows(),
    };
    serde_json::to_string(&j).expect("automata serialize")
}

/// JSON when the text starts with `{`, the line format otherwise.
pub fn parse_any(text: &str) -> Result<MealyAutomaton, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_automaton_json(text)
    } else {
        parse_automaton(text)
    }
}
