//! Relation templates such as `f0 f1^{2p+1} f0 = f0 f1 f0`.
//!
//! Grammar, whitespace-insensitive:
//!
//! ```text
//! template := factor*                       (the single token `1` is the empty word)
//! factor   := atom ('^' exponent)*
//! atom     := GENERATOR | '(' template ')' | ('prod' | 'rprod') '[' VAR '=' expr '..' expr ']' '(' template ')'
//! exponent := INT | VAR | '{' expr '}'
//! expr     := integer arithmetic over + - * ^ with variables and parentheses
//! ```
//!
//! `prod` concatenates its body for the loop variable running upwards,
//! `rprod` downwards; both are empty when the upper bound is below the lower.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::words::{words_equal, GeneratorWord, WordError};
use crate::automaton::MealyAutomaton;

/// Longest word a template may expand to.
pub const MAX_WORD_LEN: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TemplateError {
    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("integer overflow while instantiating")]
    Overflow,
    #[error("instantiated word is longer than {MAX_WORD_LEN}")]
    TooLong,
    #[error("parameter `{name}` has empty range [{lo}, {hi}]")]
    EmptyRange { name: String, lo: i64, hi: i64 },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    DotDot,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, TemplateError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse().map_err(|_| TemplateError::Syntax {
                column: col,
                message: "integer too large".into(),
            })?;
            out.push((Tok::Int(v), col));
        } else if c == '.' && chars.get(i + 1) == Some(&'.') {
            out.push((Tok::DotDot, col));
            i += 2;
        } else if "^(){}[]=+-*".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(TemplateError::Syntax {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Int(i64),
    Var(String),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, env: &BTreeMap<String, i64>) -> Result<i64, TemplateError> {
        match self {
            Expr::Int(v) => Ok(*v),
            Expr::Var(name) => env
                .get(name)
                .copied()
                .ok_or_else(|| TemplateError::UnboundVariable(name.clone())),
            Expr::Neg(e) => e.eval(env)?.checked_neg().ok_or(TemplateError::Overflow),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                match op {
                    '+' => a.checked_add(b),
                    '-' => a.checked_sub(b),
                    '*' => a.checked_mul(b),
                    '^' => {
                        if b < 0 {
                            return Err(TemplateError::NegativeExponent(b));
                        }
                        u32::try_from(b).ok().and_then(|b| a.checked_pow(b))
                    }
                    _ => unreachable!("parser only builds + - * ^"),
                }
                .ok_or(TemplateError::Overflow)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Gen(String),
    Seq(Vec<Node>),
    Pow(Box<Node>, Expr),
    Loop {
        var: String,
        lo: Expr,
        hi: Expr,
        descending: bool,
        body: Box<Node>,
    },
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, TemplateError> {
        Err(TemplateError::Syntax {
            column: self.col(),
            message: message.into(),
        })
    }

    fn eat(&mut self, sym: char) -> bool {
        if self.peek() == Some(&Tok::Sym(sym)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: char) -> Result<(), TemplateError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    fn ident(&mut self) -> Result<String, TemplateError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    fn seq(&mut self) -> Result<Node, TemplateError> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                None | Some(Tok::Sym(')')) => break,
                _ => items.push(self.factor()?),
            }
        }
        Ok(Node::Seq(items))
    }

    fn factor(&mut self) -> Result<Node, TemplateError> {
        let mut node = self.atom()?;
        while self.eat('^') {
            let e = match self.peek().cloned() {
                Some(Tok::Int(v)) => {
                    self.pos += 1;
                    Expr::Int(v)
                }
                Some(Tok::Ident(s)) => {
                    self.pos += 1;
                    Expr::Var(s)
                }
                Some(Tok::Sym('{')) => {
                    self.pos += 1;
                    let e = self.expr()?;
                    self.expect('}')?;
                    e
                }
                _ => return self.err("expected an exponent"),
            };
            node = Node::Pow(Box::new(node), e);
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Node, TemplateError> {
        match self.peek().cloned() {
            Some(Tok::Int(1)) => {
                self.pos += 1;
                Ok(Node::Seq(Vec::new()))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.seq()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Tok::Ident(s)) if s == "prod" || s == "rprod" => {
                self.pos += 1;
                self.expect('[')?;
                let var = self.ident()?;
                self.expect('=')?;
                let lo = self.expr()?;
                if self.peek() != Some(&Tok::DotDot) {
                    return self.err("expected `..`");
                }
                self.pos += 1;
                let hi = self.expr()?;
                self.expect(']')?;
                self.expect('(')?;
                let body = self.seq()?;
                self.expect(')')?;
                Ok(Node::Loop {
                    var,
                    lo,
                    hi,
                    descending: s == "rprod",
                    body: Box::new(body),
                })
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Node::Gen(s))
            }
            _ => self.err("expected a generator, `1`, `(` or a product"),
        }
    }

    fn expr(&mut self) -> Result<Expr, TemplateError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                '+'
            } else if self.eat('-') {
                '-'
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    /// Products, with `2p` and `2(p+1)` read as implicit multiplication.
    fn term(&mut self) -> Result<Expr, TemplateError> {
        let mut lhs = self.unary()?;
        loop {
            let implicit = matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Sym('(')));
            if !self.eat('*') && !implicit {
                return Ok(lhs);
            }
            lhs = Expr::Bin('*', Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, TemplateError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat('^') {
            return Ok(Expr::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, TemplateError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Int(v))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }
}

/// A parsed word template.
#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    source: String,
    root: Node,
}

pub fn parse_template(src: &str) -> Result<Template, TemplateError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        end_col: src.chars().count() + 1,
    };
    let root = p.seq()?;
    if p.pos != p.toks.len() {
        return p.err("unbalanced `)`");
    }
    Ok(Template {
        source: src.trim().to_owned(),
        root,
    })
}

impl Template {
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Expands the template under the variable assignment `env`.
    pub fn instantiate(
        &self,
        gens: &GeneratorMap,
        env: &BTreeMap<String, i64>,
    ) -> Result<GeneratorWord, TemplateError> {
        let mut out = Vec::new();
        let mut env = env.clone();
        expand(&self.root, gens, &mut env, &mut out)?;
        Ok(GeneratorWord(out))
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn expand(
    node: &Node,
    gens: &GeneratorMap,
    env: &mut BTreeMap<String, i64>,
    out: &mut Vec<u32>,
) -> Result<(), TemplateError> {
    match node {
        Node::Gen(name) => {
            out.push(
                gens.get(name)
                    .ok_or_else(|| TemplateError::UnknownGenerator(name.clone()))?,
            );
        }
        Node::Seq(items) => {
            for item in items {
                expand(item, gens, env, out)?;
            }
        }
        Node::Pow(base, e) => {
            let k = e.eval(env)?;
            if k < 0 {
                return Err(TemplateError::NegativeExponent(k));
            }
            let mut once = Vec::new();
            expand(base, gens, env, &mut once)?;
            if once.len().saturating_mul(k as usize) > MAX_WORD_LEN {
                return Err(TemplateError::TooLong);
            }
            for _ in 0..k {
                out.extend_from_slice(&once);
            }
        }
        Node::Loop {
            var,
            lo,
            hi,
            descending,
            body,
        } => {
            let (lo, hi) = (lo.eval(env)?, hi.eval(env)?);
            let saved = env.get(var).copied();
            let run = |i: i64, env: &mut BTreeMap<String, i64>, out: &mut Vec<u32>| {
                env.insert(var.clone(), i);
                expand(body, gens, env, out)
            };
            if *descending {
                for i in (lo..=hi).rev() {
                    run(i, env, out)?;
                }
            } else {
                for i in lo..=hi {
                    run(i, env, out)?;
                }
            }
            match saved {
                Some(v) => env.insert(var.clone(), v),
                None => env.remove(var),
            };
        }
    }
    if out.len() > MAX_WORD_LEN {
        return Err(TemplateError::TooLong);
    }
    Ok(())
}

/// Names under which automaton states appear in templates.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorMap(pub BTreeMap<String, u32>);

impl GeneratorMap {
    /// `f0 .. f{n-1}` naming states `0 .. n-1`.
    pub fn standard(n: usize) -> Self {
        Self((0..n as u32).map(|i| (format!("f{i}"), i)).collect())
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.0.get(name).copied()
    }
}

/// One relation `lhs = rhs`, quantified over inclusive parameter ranges.
/// An absent upper bound means "up to the checker's bound".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, (i64, Option<i64>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Relation {
    pub fn new(lhs: &str, rhs: &str) -> Self {
        Self {
            lhs: lhs.to_owned(),
            rhs: rhs.to_owned(),
            params: BTreeMap::new(),
            note: None,
        }
    }

    pub fn param(mut self, name: &str, lo: i64, hi: Option<i64>) -> Self {
        self.params.insert(name.to_owned(), (lo, hi));
        self
    }

    pub fn note(mut self, note: &str) -> Self {
        self.note = Some(note.to_owned());
        self
    }

    /// Every assignment of the parameters, upper bounds capped at `pbound`,
    /// in lexicographic order of (parameter name, value).
    pub fn assignments(&self, pbound: i64) -> Result<Vec<BTreeMap<String, i64>>, TemplateError> {
        let mut all = vec![BTreeMap::new()];
        for (name, &(lo, hi)) in &self.params {
            let hi = hi.map_or(pbound, |h| h.min(pbound));
            if hi < lo {
                return Err(TemplateError::EmptyRange {
                    name: name.clone(),
                    lo,
                    hi,
                });
            }
            all = all
                .into_iter()
                .flat_map(|env| {
                    (lo..=hi).map(move |v| {
                        let mut env = env.clone();
                        env.insert(name.clone(), v);
                        env
                    })
                })
                .collect();
        }
        Ok(all)
    }
}

/// A named collection of relations with the generator naming they use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSet {
    pub anchor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<GeneratorMap>,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("relation sets serialize")
    }

    /// The set's own generator naming, or the standard one for `n` states.
    pub fn generator_map(&self, n: usize) -> GeneratorMap {
        self.generators
            .clone()
            .unwrap_or_else(|| GeneratorMap::standard(n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub relation: usize,
    pub params: BTreeMap<String, i64>,
    pub lhs: GeneratorWord,
    pub rhs: GeneratorWord,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub anchor: String,
    pub pbound: i64,
    pub instances: Vec<InstanceResult>,
}

impl RelationReport {
    pub fn failures(&self) -> impl Iterator<Item = &InstanceResult> {
        self.instances.iter().filter(|r| !r.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.instances.iter().all(|r| r.holds)
    }
}

/// Instantiates every relation for every parameter assignment and decides
/// each instance with [`words_equal`].
pub fn check_relations(
    a: &MealyAutomaton,
    set: &RelationSet,
    gens: &GeneratorMap,
    pbound: i64,
) -> Result<RelationReport, TemplateError> {
    let mut instances = Vec::new();
    for (idx, rel) in set.relations.iter().enumerate() {
        let lhs = parse_template(&rel.lhs)?;
        let rhs = parse_template(&rel.rhs)?;
        for env in rel.assignments(pbound)? {
            let lw = lhs.instantiate(gens, &env)?;
            let rw = rhs.instantiate(gens, &env)?;
            let holds = words_equal(a, &lw, &rw)?;
            instances.push(InstanceResult {
                relation: idx,
                params: env,
                lhs: lw,
                rhs: rw,
                holds,
            });
        }
    }
    Ok(RelationReport {
        anchor: set.anchor.clone(),
        pbound,
        instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(src: &str, env: &[(&str, i64)]) -> Result<Vec<u32>, TemplateError> {
        let env = env.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        parse_template(src)?
            .instantiate(&GeneratorMap::standard(3), &env)
            .map(|w| w.0)
    }

    #[test]
    fn expands_powers_and_groups() {
        assert_eq!(inst("f0 f1^2 f0", &[]).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(inst("(f1 f0)^3", &[]).unwrap(), vec![1, 0, 1, 0, 1, 0]);
        assert_eq!(
            inst("f0 f1^{2p+1} f0", &[("p", 2)]).unwrap(),
            vec![0, 1, 1, 1, 1, 1, 0]
        );
        assert_eq!(inst("f2^p", &[("p", 0)]).unwrap(), Vec::<u32>::new());
        assert_eq!(inst("1", &[]).unwrap(), Vec::<u32>::new());
        assert_eq!(inst("f1^{2^k - 1}", &[("k", 3)]).unwrap(), vec![1; 7]);
        assert_eq!(inst("f1^{2^2^2 - 15}", &[]).unwrap(), vec![1]);
        assert_eq!(inst("f1^{2(p+1)}", &[("p", 1)]).unwrap(), vec![1; 4]);
        assert_eq!(
            inst("f1^{p*2^(k+1)}", &[("p", 1), ("k", 1)]).unwrap(),
            vec![1; 4]
        );
        assert_eq!(inst("f0^2^3", &[]).unwrap(), vec![0; 6]);
    }

    #[test]
    fn loops_run_in_both_directions() {
        assert_eq!(
            inst("prod[i=1..3](f1^i f0)", &[]).unwrap(),
            vec![1, 0, 1, 1, 0, 1, 1, 1, 0]
        );
        assert_eq!(
            inst("rprod[i=1..k](f1^{i} f0)", &[("k", 2)]).unwrap(),
            vec![1, 1, 0, 1, 0]
        );
        assert_eq!(
            inst("f2 rprod[i=1..k](f1 f0) f2", &[("k", 0)]).unwrap(),
            vec![2, 2]
        );
        // The loop variable is scoped to its body.
        assert_eq!(
            inst("prod[p=1..2](f0^p) f1^p", &[("p", 3)]).unwrap(),
            vec![0, 0, 0, 1, 1, 1]
        );
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(
            parse_template("f0 (f1"),
            Err(TemplateError::Syntax { column: 7, .. })
        ));
        assert!(matches!(
            parse_template("f0 ) f1"),
            Err(TemplateError::Syntax { column: 4, .. })
        ));
        assert!(matches!(
            parse_template("f0 $"),
            Err(TemplateError::Syntax { column: 4, .. })
        ));
        assert!(matches!(
            parse_template("f0^"),
            Err(TemplateError::Syntax { .. })
        ));
        assert!(matches!(
            inst("g7", &[]),
            Err(TemplateError::UnknownGenerator(_))
        ));
        assert!(matches!(
            inst("f0^q", &[]),
            Err(TemplateError::UnboundVariable(_))
        ));
        assert!(matches!(
            inst("f0^{p-3}", &[("p", 1)]),
            Err(TemplateError::NegativeExponent(-2))
        ));
        assert!(matches!(
            inst("f0^{10^7}", &[]),
            Err(TemplateError::TooLong)
        ));
    }

    #[test]
    fn assignments_cap_at_bound() {
        let r = Relation::new("f0", "f0")
            .param("p", 1, None)
            .param("q", 0, Some(1));
        let all = r.assignments(3).unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(
            all[0],
            [("p".to_string(), 1), ("q".to_string(), 0)]
                .into_iter()
                .collect()
        );
        assert!(Relation::new("f0", "f0")
            .param("p", 5, None)
            .assignments(3)
            .is_err());
    }

    #[test]
    fn json_round_trip() {
        let set = RelationSet {
            anchor: "test".into(),
            generators: Some(GeneratorMap(
                [("e".to_string(), 0), ("f0".to_string(), 1)]
                    .into_iter()
                    .collect(),
            )),
            relations: vec![Relation::new("f0 f0", "e").param("p", 1, None).note("n")],
        };
        let text = set.to_json();
        assert!(text.contains("\"p\": [\n"));
        assert_eq!(RelationSet::from_json(&text).unwrap(), set);
    }

    #[test]
    fn a4_family_holds() {
        let a4 = MealyAutomaton::from_rows(
            None,
            &[
                vec![(0, 0), (0, 0), (0, 1), (0, 1)],
                vec![(0, 2), (1, 3), (1, 0), (1, 1)],
            ],
        )
        .unwrap();
        let set = RelationSet {
            anchor: "a4".into(),
            generators: None,
            relations: vec![
                Relation::new("f0 f1^{2p+1} f0", "f0 f1 f0").param("p", 1, None),
                Relation::new("f0 f1^p", "f1 f1^p").param("p", 0, Some(1)),
            ],
        };
        let report = check_relations(&a4, &set, &GeneratorMap::standard(2), 8).unwrap();
        assert_eq!(report.instances.len(), 10);
        assert_eq!(
            report.failures().map(|r| r.relation).collect::<Vec<_>>(),
            vec![1, 1]
        );
    }
}
