//! Parser for the presentation DSL.
//!
//! ```text
//! # comment lines start with `#`
//! mode: discrete;            (optional; `discrete` or `pro-p`)
//! primes: 2 3;               (optional; defaults: {2,3} discrete, {2} pro-p)
//! gens x y;
//! rels [x, y], x^2 y^-1;
//! ```
//!
//! A word expression is a juxtaposition of terms; a term is a generator
//! name, a parenthesised expression or a commutator bracket `[u, v]`, each
//! optionally raised to a signed integer power. `()` denotes the identity.
//! Whitespace is insignificant everywhere.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::presentation::{Mode, Presentation, PresentationError, PresentationLimits};
use crate::word::{commutator, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.message)
    }
}

impl core::error::Error for ParseError {}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dash,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |chars: &mut core::iter::Peekable<core::str::Chars<'_>>,
                        line: &mut usize,
                        col: &mut usize| {
            let c = chars.next().unwrap();
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while let Some(&c2) = chars.peek() {
                bump(&mut chars, &mut line, &mut col);
                if c2 == '\n' {
                    break;
                }
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_alphanumeric() || c2 == '_' {
                    name.push(bump(&mut chars, &mut line, &mut col));
                } else {
                    break;
                }
            }
            out.push(Spanned { tok: Tok::Ident(name), line: tline, col: tcol });
            continue;
        }
        if c.is_ascii_digit() {
            let mut n: i64 = 0;
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_digit() {
                    bump(&mut chars, &mut line, &mut col);
                    n = n
                        .checked_mul(10)
                        .and_then(|m| m.checked_add((c2 as u8 - b'0') as i64))
                        .ok_or_else(|| ParseError::new(tline, tcol, "integer literal overflows"))?;
                } else {
                    break;
                }
            }
            out.push(Spanned { tok: Tok::Int(n), line: tline, col: tcol });
            continue;
        }
        let tok = match c {
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '-' => Tok::Dash,
            _ => {
                return Err(ParseError::new(tline, tcol, alloc::format!("unexpected character `{c}`")))
            }
        };
        bump(&mut chars, &mut line, &mut col);
        out.push(Spanned { tok, line: tline, col: tcol });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    gens: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or_else(|| {
                self.toks.last().map(|s| (s.line, s.col + 1)).unwrap_or((1, 1))
            })
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, message)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|s| &s.tok);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(alloc::format!("expected {what}")))
        }
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let neg = if self.peek() == Some(&Tok::Dash) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Int(n)) => Ok(if neg { -n } else { *n }),
            _ => {
                self.pos -= 1;
                Err(self.err("expected an integer"))
            }
        }
    }

    fn gen_index(&mut self, name: &str) -> Result<u16, ParseError> {
        match self.gens.iter().position(|g| g == name) {
            Some(i) => Ok(i as u16),
            None => Err(self.err(alloc::format!("undeclared generator `{name}`"))),
        }
    }

    /// factor := name | '(' wordexpr? ')' | '[' wordexpr ',' wordexpr ']'
    fn factor(&mut self) -> Result<Word, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                let g = self.gen_index(&name)?;
                self.pos += 1;
                Ok(Word::generator(g))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::RParen) {
                    self.pos += 1;
                    return Ok(Word::identity());
                }
                let w = self.word_expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(w)
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let u = self.word_expr()?;
                self.expect(&Tok::Comma, "`,` between commutator arguments")?;
                let v = self.word_expr()?;
                self.expect(&Tok::RBracket, "`]`")?;
                Ok(commutator(&u, &v))
            }
            _ => Err(self.err("expected a generator, `(` or `[`")),
        }
    }

    /// term := factor ('^' signed-int)?
    fn term(&mut self) -> Result<Word, ParseError> {
        let base = self.factor()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = self.signed_int()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    /// wordexpr := term+
    fn word_expr(&mut self) -> Result<Word, ParseError> {
        let mut w = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::LParen) | Some(Tok::LBracket) => {
                    let t = self.term()?;
                    w = w.mul(&t);
                }
                _ => return Ok(w),
            }
        }
    }
}

/// Parses a presentation from DSL text. `id` labels the result in reports.
pub fn parse_presentation(
    text: &str,
    id: &str,
    limits: &PresentationLimits,
) -> Result<Presentation, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0, gens: Vec::new() };
    let mut mode: Option<Mode> = None;
    let mut primes: Option<Vec<u64>> = None;
    let mut gens_seen = false;
    let mut relators: Vec<Word> = Vec::new();
    let mut rels_seen = false;

    while p.peek().is_some() {
        let kw = match p.next() {
            Some(Tok::Ident(w)) => w.clone(),
            _ => {
                p.pos -= 1;
                return Err(p.err("expected a statement keyword (mode, primes, gens, rels)"));
            }
        };
        match kw.as_str() {
            "mode" => {
                p.expect(&Tok::Colon, "`:` after `mode`")?;
                let value = match p.next().cloned() {
                    Some(Tok::Ident(v)) => {
                        if v == "pro" {
                            // `pro-p`
                            p.expect(&Tok::Dash, "`-` in `pro-p`")?;
                            match p.next() {
                                Some(Tok::Ident(s)) if s == "p" => "pro-p".to_string(),
                                _ => {
                                    p.pos -= 1;
                                    return Err(p.err("expected `p` after `pro-`"));
                                }
                            }
                        } else {
                            v
                        }
                    }
                    _ => {
                        p.pos -= 1;
                        return Err(p.err("expected `discrete` or `pro-p`"));
                    }
                };
                mode = Some(match value.as_str() {
                    "discrete" => Mode::Discrete,
                    "pro-p" => Mode::ProP,
                    other => {
                        return Err(p.err(alloc::format!(
                            "unknown mode `{other}` (expected `discrete` or `pro-p`)"
                        )))
                    }
                });
                p.expect(&Tok::Semi, "`;` after mode")?;
            }
            "primes" => {
                p.expect(&Tok::Colon, "`:` after `primes`")?;
                let mut list = Vec::new();
                while let Some(Tok::Int(n)) = p.peek() {
                    list.push(*n as u64);
                    p.pos += 1;
                }
                if list.is_empty() {
                    return Err(p.err("expected at least one prime"));
                }
                p.expect(&Tok::Semi, "`;` after primes")?;
                primes = Some(list);
            }
            "gens" => {
                if gens_seen {
                    return Err(p.err("duplicate `gens` statement"));
                }
                let mut names = Vec::new();
                while let Some(Tok::Ident(name)) = p.peek() {
                    if name == "rels" {
                        break;
                    }
                    names.push(name.clone());
                    p.pos += 1;
                }
                if names.is_empty() {
                    return Err(p.err("expected at least one generator name"));
                }
                p.expect(&Tok::Semi, "`;` after generator list")?;
                p.gens = names;
                gens_seen = true;
            }
            "rels" => {
                if !gens_seen {
                    return Err(p.err("`rels` before `gens`"));
                }
                if rels_seen {
                    return Err(p.err("duplicate `rels` statement"));
                }
                rels_seen = true;
                if p.peek() == Some(&Tok::Semi) {
                    p.pos += 1;
                    continue;
                }
                loop {
                    let w = p.word_expr()?;
                    relators.push(w);
                    match p.next() {
                        Some(Tok::Comma) => continue,
                        Some(Tok::Semi) => break,
                        _ => {
                            p.pos -= 1;
                            return Err(p.err("expected `,` or `;` in relator list"));
                        }
                    }
                }
            }
            other => {
                p.pos -= 1;
                return Err(p.err(alloc::format!("unknown statement `{other}`")));
            }
        }
    }

    if !gens_seen {
        let (line, col) = p.here();
        return Err(ParseError::new(line, col, "missing `gens` statement"));
    }
    if !rels_seen {
        let (line, col) = p.here();
        return Err(ParseError::new(line, col, "missing `rels` statement"));
    }
    let mode = mode.unwrap_or(Mode::Discrete);
    let primes = primes.unwrap_or_else(|| match mode {
        Mode::Discrete => alloc::vec![2, 3],
        Mode::ProP => alloc::vec![2],
    });
    Presentation::new(id, p.gens, relators, mode, primes, limits)
        .map_err(|e: PresentationError| ParseError::new(1, 1, e.to_string()))
}
