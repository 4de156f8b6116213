//! Text formats for processes (`.dproc`) and stakeholders (`.dstake`).
//!
//! Process files are line oriented:
//!
//! ```text
//! # comment
//! process FDAP
//! activities 10              # ids 1..=10, unlabeled
//! activity 11: Independent audit
//! prec 1 2
//! orresp 5 6 7               # subject, then one or more responders
//! mustexist 3
//! ```
//!
//! Stakeholder files hold definitions `NAME := expr`, where
//!
//! ```text
//! expr   := term ('or' term)*
//! term   := factor ('and' factor)*
//! factor := 'not' factor | '(' expr ')' | atom
//! atom   := contains(a) | mustexist(a) | prec(a,b) | resp(a,b) | succ(a,b)
//!         | weakresp(a,b) | orresp(a; b1,b2,...)
//! ```
//!
//! Definitions may span lines; `#` starts a comment.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::model::{
    Activity, ActivityId, Alphabet, Constraint, ConstraintKind, DeclarativeProcess, ModelError,
};
use crate::prefs::{check_unique_names, PreferenceExpr, PrefsError, Stakeholder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unknown constraint kind '{0}'")]
    UnknownKind(String),
    #[error("activity {0} is not declared")]
    UndeclaredActivity(ActivityId),
    #[error("{kind} expects {expected}, found {found}")]
    Arity {
        kind: ConstraintKind,
        expected: &'static str,
        found: usize,
    },
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Prefs(#[from] PrefsError),
}

impl ParseError {
    fn new(line: usize, column: usize, kind: impl Into<ParseErrorKind>) -> Self {
        ParseError {
            line,
            column,
            kind: kind.into(),
        }
    }

    fn syntax(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Self::new(line, column, ParseErrorKind::Syntax(msg.into()))
    }
}

/// Whitespace-separated words of one line with their 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, w)| (line[..byte].chars().count() + 1, w))
        .collect()
}

fn parse_id(line: usize, column: usize, word: &str) -> Result<ActivityId, ParseError> {
    word.parse::<u32>().map(ActivityId).map_err(|_| {
        ParseError::syntax(
            line,
            column,
            format!("expected an activity id, found '{word}'"),
        )
    })
}

fn arity_text(kind: ConstraintKind) -> &'static str {
    match kind {
        ConstraintKind::MustExist => "1 activity",
        ConstraintKind::OrResp => "a subject and at least 1 responder",
        _ => "2 activities",
    }
}

/// Parses a `.dproc` document.
pub fn parse_process(text: &str) -> Result<DeclarativeProcess, ParseError> {
    let mut name: Option<String> = None;
    let mut activities: Vec<Activity> = Vec::new();
    // constraint, line, and column of each argument
    let mut constraints: Vec<(Constraint, usize, Vec<usize>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut ws = words(raw);
        let Some(&(col, head)) = ws.first() else {
            continue;
        };
        if head.starts_with('#') {
            continue;
        }
        // names and labels may contain '#'; elsewhere it starts a comment
        if head != "process" && head != "activity" {
            if let Some(cut) = ws.iter().position(|(_, w)| w.starts_with('#')) {
                ws.truncate(cut);
            }
        }
        let rest_of = |col: usize| -> &str {
            let byte = raw
                .char_indices()
                .nth(col - 1)
                .map_or(raw.len(), |(b, _)| b);
            raw[byte + head.len()..].trim()
        };
        match head {
            "process" => {
                if name.is_some() {
                    return Err(ParseError::syntax(line, col, "process name declared twice"));
                }
                let rest = rest_of(col);
                if rest.is_empty() {
                    return Err(ParseError::new(line, col, ModelError::EmptyName));
                }
                name = Some(rest.to_string());
            }
            "activities" => {
                if ws.len() != 2 {
                    return Err(ParseError::syntax(
                        line,
                        col,
                        "expected 'activities <count>'",
                    ));
                }
                let (c, w) = ws[1];
                let n = w.parse::<u32>().map_err(|_| {
                    ParseError::syntax(line, c, format!("expected a count, found '{w}'"))
                })?;
                for id in 1..=n {
                    if activities.iter().any(|a| a.id() == ActivityId(id)) {
                        return Err(ParseError::new(
                            line,
                            c,
                            ModelError::DuplicateActivity(ActivityId(id)),
                        ));
                    }
                    activities.push(Activity::new(id));
                }
            }
            "activity" => {
                let rest = rest_of(col);
                let (id_part, label) = match rest.split_once(':') {
                    Some((i, l)) => (i.trim(), Some(l.trim())),
                    None => (rest, None),
                };
                let id_col = col + head.chars().count() + 1;
                let id = parse_id(line, id_col, id_part)?;
                if activities.iter().any(|a| a.id() == id) {
                    return Err(ParseError::new(
                        line,
                        id_col,
                        ModelError::DuplicateActivity(id),
                    ));
                }
                let activity = match label {
                    Some(l) => {
                        Activity::labeled(id, l).map_err(|e| ParseError::new(line, id_col, e))?
                    }
                    None => Activity::new(id),
                };
                activities.push(activity);
            }
            _ => {
                let kind = ConstraintKind::from_keyword(head).ok_or_else(|| {
                    ParseError::new(line, col, ParseErrorKind::UnknownKind(head.to_string()))
                })?;
                let args = &ws[1..];
                let ids = args
                    .iter()
                    .map(|&(c, w)| parse_id(line, c, w))
                    .collect::<Result<Vec<_>, _>>()?;
                let arity_ok = match kind {
                    ConstraintKind::MustExist => ids.len() == 1,
                    ConstraintKind::OrResp => ids.len() >= 2,
                    _ => ids.len() == 2,
                };
                if !arity_ok {
                    return Err(ParseError::new(
                        line,
                        col,
                        ParseErrorKind::Arity {
                            kind,
                            expected: arity_text(kind),
                            found: ids.len(),
                        },
                    ));
                }
                let c = Constraint::new(kind, ids[0], ids[1..].to_vec())
                    .map_err(|e| ParseError::new(line, col, e))?;
                constraints.push((c, line, args.iter().map(|&(c, _)| c).collect()));
            }
        }
    }

    let name = name.ok_or_else(|| ParseError::syntax(1, 1, "missing 'process <name>' line"))?;
    let alphabet = Alphabet::new(activities).map_err(|e| ParseError::new(1, 1, e))?;
    for (c, line, cols) in &constraints {
        for (pos, id) in c.activities().enumerate() {
            if !alphabet.contains(id) {
                return Err(ParseError::new(
                    *line,
                    cols[pos],
                    ParseErrorKind::UndeclaredActivity(id),
                ));
            }
        }
    }
    let lines: Vec<usize> = constraints.iter().map(|(_, l, _)| *l).collect();
    let constraints: Vec<Constraint> = constraints.into_iter().map(|(c, _, _)| c).collect();
    DeclarativeProcess::new(name, alphabet, constraints).map_err(|e| {
        let line = match &e {
            ModelError::DuplicateConstraint(dup) => constraints_line(dup, text, &lines),
            _ => 1,
        };
        ParseError::new(line, 1, e)
    })
}

/// Line of the second occurrence of a duplicated constraint.
fn constraints_line(dup: &Constraint, text: &str, lines: &[usize]) -> usize {
    let rendered = constraint_line(dup);
    lines
        .iter()
        .copied()
        .filter(|&l| {
            text.lines().nth(l - 1).is_some_and(|raw| {
                words(raw).iter().map(|w| w.1).collect::<Vec<_>>().join(" ") == rendered
            })
        })
        .nth(1)
        .unwrap_or(1)
}

fn constraint_line(c: &Constraint) -> String {
    let mut s = c.kind().keyword().to_string();
    for id in c.activities() {
        write!(s, " {id}").unwrap();
    }
    s
}

/// Renders a process so that [`parse_process`] yields an equal value.
pub fn serialize_process(process: &DeclarativeProcess) -> String {
    let mut out = String::new();
    writeln!(out, "process {}", process.name()).unwrap();
    let acts = process.alphabet().activities();
    let numbered = acts
        .iter()
        .enumerate()
        .all(|(i, a)| a.label().is_none() && a.id().0 as usize == i + 1);
    if numbered && !acts.is_empty() {
        writeln!(out, "activities {}", acts.len()).unwrap();
    } else {
        for a in acts {
            match a.label() {
                Some(l) => writeln!(out, "activity {}: {l}", a.id()).unwrap(),
                None => writeln!(out, "activity {}", a.id()).unwrap(),
            }
        }
    }
    for c in process.constraints() {
        writeln!(out, "{}", constraint_line(c)).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u32),
    LParen,
    RParen,
    Comma,
    Semi,
    Define,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Semi => f.write_str("';'"),
            Tok::Define => f.write_str("':='"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut last = (1, 1);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let single = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ',' => Some(Tok::Comma),
                ';' => Some(Tok::Semi),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Spanned { tok, line, column });
                i += 1;
            } else if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c == ':' {
                if chars.get(i + 1) != Some(&'=') {
                    return Err(ParseError::syntax(line, column, "expected ':='"));
                }
                out.push(Spanned {
                    tok: Tok::Define,
                    line,
                    column,
                });
                i += 2;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits.parse().map_err(|_| {
                    ParseError::syntax(line, column, format!("activity id '{digits}' is too large"))
                })?;
                out.push(Spanned {
                    tok: Tok::Int(n),
                    line,
                    column,
                });
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                    column,
                });
            } else {
                return Err(ParseError::syntax(
                    line,
                    column,
                    format!("unexpected character '{c}'"),
                ));
            }
        }
        last = (line, chars.len() + 1);
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line: last.0,
        column: last.1,
    });
    Ok(out)
}

const KEYWORDS: [&str; 3] = ["and", "or", "not"];

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        &self.toks[(self.pos + ahead).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError::syntax(
            t.line,
            t.column,
            format!("expected {expected}, found {}", t.tok),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.error_here(&tok.to_string()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn definitions(&mut self) -> Result<Vec<Stakeholder>, ParseError> {
        let mut out = Vec::new();
        while self.peek().tok != Tok::Eof {
            let at = self.peek().clone();
            let name = match &at.tok {
                Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => s.clone(),
                _ => return Err(self.error_here("a stakeholder name")),
            };
            self.bump();
            self.expect(Tok::Define)?;
            let expr = self.expr()?;
            if out.iter().any(|s: &Stakeholder| s.name() == name) {
                return Err(ParseError::new(
                    at.line,
                    at.column,
                    PrefsError::DuplicateName(name),
                ));
            }
            out.push(
                Stakeholder::new(name, expr).map_err(|e| ParseError::new(at.line, at.column, e))?,
            );
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<PreferenceExpr, ParseError> {
        let mut terms = vec![self.term()?];
        while self.is_keyword("or") {
            self.bump();
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            PreferenceExpr::Or(terms)
        })
    }

    fn term(&mut self) -> Result<PreferenceExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.is_keyword("and") {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            PreferenceExpr::And(factors)
        })
    }

    fn factor(&mut self) -> Result<PreferenceExpr, ParseError> {
        if self.is_keyword("not") {
            self.bump();
            return Ok(PreferenceExpr::not(self.factor()?));
        }
        if self.peek().tok == Tok::LParen {
            self.bump();
            let e = self.expr()?;
            self.expect(Tok::RParen)?;
            return Ok(e);
        }
        self.atom()
    }

    fn int(&mut self) -> Result<ActivityId, ParseError> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                Ok(ActivityId(n))
            }
            _ => Err(self.error_here("an activity id")),
        }
    }

    fn atom(&mut self) -> Result<PreferenceExpr, ParseError> {
        let at = self.peek().clone();
        let word = match &at.tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.error_here("an atom, 'not' or '('")),
        };
        let kind = match word.as_str() {
            "contains" => ConstraintKind::MustExist,
            w => ConstraintKind::from_keyword(w).ok_or_else(|| {
                ParseError::new(
                    at.line,
                    at.column,
                    ParseErrorKind::UnknownKind(word.clone()),
                )
            })?,
        };
        // a name followed by ':=' means the previous definition ended early
        if *self.peek_at(1) == Tok::Define {
            return Err(self.error_here("an atom"));
        }
        self.bump();
        self.expect(Tok::LParen)?;
        let subject = self.int()?;
        let mut objects = Vec::new();
        match kind {
            ConstraintKind::MustExist => {}
            ConstraintKind::OrResp => {
                self.expect(Tok::Semi)?;
                objects.push(self.int()?);
                while self.peek().tok == Tok::Comma {
                    self.bump();
                    objects.push(self.int()?);
                }
            }
            _ => {
                self.expect(Tok::Comma)?;
                objects.push(self.int()?);
            }
        }
        self.expect(Tok::RParen)?;
        Constraint::new(kind, subject, objects)
            .map(PreferenceExpr::Atom)
            .map_err(|e| ParseError::new(at.line, at.column, e))
    }
}

/// Parses a `.dstake` document into stakeholders in declaration order.
pub fn parse_stakeholders(text: &str) -> Result<Vec<Stakeholder>, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let out = p.definitions()?;
    check_unique_names(&out).map_err(|e| ParseError::new(1, 1, e))?;
    Ok(out)
}

fn write_atom(out: &mut String, c: &Constraint) {
    let s = c.subject();
    match c.kind() {
        ConstraintKind::MustExist => write!(out, "contains({s})"),
        ConstraintKind::OrResp => {
            let objs: Vec<String> = c.objects().iter().map(ToString::to_string).collect();
            write!(out, "orresp({s}; {})", objs.join(", "))
        }
        k => write!(out, "{}({s}, {})", k.keyword(), c.objects()[0]),
    }
    .unwrap();
}

fn write_expr(out: &mut String, e: &PreferenceExpr) {
    // parenthesize exactly the children the grammar would otherwise regroup
    let child = |out: &mut String, c: &PreferenceExpr, wrap: bool| {
        if wrap {
            out.push('(');
            write_expr(out, c);
            out.push(')');
        } else {
            write_expr(out, c);
        }
    };
    match e {
        PreferenceExpr::Atom(c) => write_atom(out, c),
        PreferenceExpr::Not(c) => {
            out.push_str("not ");
            child(
                out,
                c,
                matches!(**c, PreferenceExpr::And(_) | PreferenceExpr::Or(_)),
            );
        }
        PreferenceExpr::And(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" and ");
                }
                child(
                    out,
                    c,
                    matches!(c, PreferenceExpr::And(_) | PreferenceExpr::Or(_)),
                );
            }
        }
        PreferenceExpr::Or(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" or ");
                }
                child(out, c, matches!(c, PreferenceExpr::Or(_)));
            }
        }
    }
}

pub fn serialize_expr(e: &PreferenceExpr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

/// Renders stakeholders so that [`parse_stakeholders`] yields equal values.
pub fn serialize_stakeholders(stakeholders: &[Stakeholder]) -> String {
    stakeholders
        .iter()
        .map(|s| format!("{} := {}\n", s.name(), serialize_expr(s.expr())))
        .collect()
}
