//! Text input: polynomials, 1-forms, arcs and algebraic constant
//! declarations.
//!
//! ```text
//! form    := [sign] term (sign term)*
//! term    := [product ['*']] ('dx' | 'dy')
//! poly    := [sign] product (sign product)*
//! product := power (('*' | '/') power)*
//! power   := atom ['^' integer]
//! atom    := integer | constant | variable | '(' poly ')'
//! decl    := name ':' poly-in-name ['~' hint]
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::foliation::OneForm;
use crate::numfield::{upoly, FieldTower, Node, Rational, TowerRef};
use crate::polyring::{Parameterization, Poly1, Poly2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at {position}: expected {}, found {found}", .expected.join(" or "))]
    Unexpected {
        position: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("at {position}: unknown symbol `{name}`")]
    UnknownSymbol { position: usize, name: String },
    #[error("at {position}: unknown differential `{name}`")]
    UnknownDifferential { position: usize, name: String },
    #[error("at {position}: {message}")]
    Invalid { position: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Unexpected { position, .. }
            | ParseError::UnknownSymbol { position, .. }
            | ParseError::UnknownDifferential { position, .. }
            | ParseError::Invalid { position, .. } => *position,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => n.to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let start = k;
        let tok = match c {
            _ if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '0'..='9' => {
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().collect();
                out.push((start, Tok::Num(s.parse().expect("digits"))));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                out.push((start, Tok::Ident(chars[start..k].iter().collect())));
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => {
                return Err(ParseError::Invalid {
                    position: start,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((start, tok));
        k += 1;
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

fn is_differential(name: &str) -> bool {
    name.len() == 2 && name.starts_with('d')
}

/// Names reserved for coordinates and the arc parameter.
const RESERVED: [&str; 3] = ["x", "y", "t"];

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    tower: &'a TowerRef,
    /// Variable names bound to the x slot and the y slot.
    vars: [Option<&'a str>; 2],
}

impl<'a> Parser<'a> {
    fn new(text: &str, tower: &'a TowerRef, vars: [Option<&'a str>; 2]) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            tower,
            vars,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].1
    }

    fn here(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::Unexpected {
            position: self.here(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => Err(self.unexpected(&["`+`", "`-`", "end of input"])),
        }
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Tok::Plus => {
                self.bump();
                Some(false)
            }
            Tok::Minus => {
                self.bump();
                Some(true)
            }
            _ => None,
        }
    }

    fn sum(&mut self) -> Result<Poly2> {
        let mut neg = self.sign().unwrap_or(false);
        let mut acc = Poly2::zero(self.tower.clone());
        loop {
            let p = self.product()?;
            acc = if neg { acc.sub(&p) } else { acc.add(&p) };
            match self.sign() {
                Some(n) => neg = n,
                None => return Ok(acc),
            }
        }
    }

    fn differential_ahead(&self, k: usize) -> bool {
        matches!(self.peek_at(k), Tok::Ident(s) if is_differential(s) && !self.is_symbol(s))
    }

    fn is_symbol(&self, name: &str) -> bool {
        self.vars.contains(&Some(name)) || self.tower.find(name).is_some()
    }

    fn product(&mut self) -> Result<Poly2> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Tok::Star if !self.differential_ahead(1) => {
                    self.bump();
                    acc = acc.mul(&self.power()?);
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.here();
                    let d = self.power()?;
                    let c = match d.total_degree() {
                        Some(0) => d.constant_term(),
                        _ => {
                            return Err(ParseError::Invalid {
                                position: at,
                                message: "division by a non-constant".into(),
                            }
                            .into())
                        }
                    };
                    let inv = self.tower.inv(&c).map_err(|e| match e {
                        crate::numfield::NumError::DivisionByZero => Error::Parse(ParseError::Invalid {
                            position: at,
                            message: "division by zero".into(),
                        }),
                        e => e.into(),
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly2> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.here();
        match self.bump() {
            Tok::Num(n) => {
                let e: u32 = n.try_into().map_err(|_| ParseError::Invalid {
                    position: at,
                    message: "exponent too large".into(),
                })?;
                Ok(base.pow(e))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected(&["integer exponent"]).into())
            }
        }
    }

    fn atom(&mut self) -> Result<Poly2> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Poly2::constant(self.tower.clone(), Node::Rat(Rational::from_integer(n))))
            }
            Tok::LParen => {
                self.bump();
                let p = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::Ident(name) => {
                self.bump();
                if self.vars[0] == Some(name.as_str()) {
                    return Ok(Poly2::x(self.tower.clone()));
                }
                if self.vars[1] == Some(name.as_str()) {
                    return Ok(Poly2::y(self.tower.clone()));
                }
                if let Some(level) = self.tower.find(&name) {
                    return Ok(Poly2::constant(self.tower.clone(), self.tower.generator(level)));
                }
                self.pos -= 1;
                if is_differential(&name) {
                    return Err(self.unexpected(&["number", "symbol", "`(`"]).into());
                }
                Err(ParseError::UnknownSymbol { position: at, name }.into())
            }
            _ => Err(self.unexpected(&["number", "symbol", "`(`"]).into()),
        }
    }

    /// Consumes a differential, returning 0 for `dx` and 1 for `dy`.
    fn differential(&mut self) -> Result<usize> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Ident(s) if s == "dx" => {
                self.bump();
                Ok(0)
            }
            Tok::Ident(s) if s == "dy" => {
                self.bump();
                Ok(1)
            }
            Tok::Ident(s) if is_differential(&s) && !self.is_symbol(&s) => {
                Err(ParseError::UnknownDifferential { position: at, name: s }.into())
            }
            _ => Err(self.unexpected(&["`*`", "`dx`", "`dy`"]).into()),
        }
    }

    fn form(&mut self) -> Result<(Poly2, Poly2)> {
        let mut neg = self.sign().unwrap_or(false);
        let mut parts = [Poly2::zero(self.tower.clone()), Poly2::zero(self.tower.clone())];
        loop {
            let coef = if self.differential_ahead(0) {
                Poly2::one(self.tower.clone())
            } else {
                let p = self.product()?;
                if *self.peek() == Tok::Star {
                    self.bump();
                }
                p
            };
            let slot = self.differential()?;
            parts[slot] = if neg {
                parts[slot].sub(&coef)
            } else {
                parts[slot].add(&coef)
            };
            match self.sign() {
                Some(n) => neg = n,
                None => break,
            }
        }
        self.finish()?;
        let [a, b] = parts;
        Ok((a, b))
    }
}

/// The field of constants and the names in scope for parsing.
#[derive(Clone, Debug)]
pub struct ParseContext {
    tower: TowerRef,
}

impl Default for ParseContext {
    fn default() -> Self {
        ParseContext::new()
    }
}

impl ParseContext {
    pub fn new() -> Self {
        ParseContext {
            tower: Arc::new(FieldTower::rationals()),
        }
    }

    pub fn with_tower(tower: TowerRef) -> Self {
        ParseContext { tower }
    }

    pub fn tower(&self) -> &TowerRef {
        &self.tower
    }

    /// Adjoins a constant from `name: minpoly [~ hint]`, e.g.
    /// `b: b^2 - 2 ~ 1.41421`. The polynomial is made monic.
    pub fn declare(&mut self, text: &str) -> Result<()> {
        let Some((name, rest)) = text.split_once(':') else {
            return Err(ParseError::Unexpected {
                position: text.len(),
                expected: vec!["`:`".into()],
                found: "end of input".into(),
            }
            .into());
        };
        let name = name.trim();
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || RESERVED.contains(&name) || is_differential(name) {
            return Err(ParseError::Invalid {
                position: 0,
                message: format!("`{name}` cannot name a constant"),
            }
            .into());
        }
        if self.tower.find(name).is_some() {
            return Err(crate::numfield::NumError::NameClash(name.to_string()).into());
        }
        let offset = text.len() - rest.len();
        let (poly_text, hint) = match rest.split_once('~') {
            Some((p, h)) => (p, Some(h.trim().to_string()).filter(|h| !h.is_empty())),
            None => (rest, None),
        };
        let p = parse_in(poly_text, &self.tower, [Some(name), None])
            .map_err(|e| shift_error(e, offset))?;
        let coeffs = p.restrict_y0();
        let monic = upoly::monic(&self.tower, &coeffs)?;
        self.tower = Arc::new(self.tower.extend(monic, name, hint)?);
        Ok(())
    }

    pub fn parse_poly(&self, text: &str) -> Result<Poly2> {
        parse_in(text, &self.tower, [Some("x"), Some("y")])
    }

    /// Parses `A dx + B dy` (terms may repeat and come in any order).
    pub fn parse_oneform(&self, text: &str) -> Result<OneForm> {
        let mut p = Parser::new(text, &self.tower, [Some("x"), Some("y")])?;
        let (a, b) = p.form()?;
        OneForm::new(a, b)
    }

    /// Parses an arc `x(t), y(t)`, optionally in parentheses.
    pub fn parse_parameterization(&self, text: &str) -> Result<Parameterization> {
        let trimmed = text.trim();
        let (body, offset) = match strip_outer_parens(trimmed) {
            Some(inner) => (inner, text.find('(').expect("paren") + 1),
            None => (trimmed, text.len() - text.trim_start().len()),
        };
        let mut p = Parser::new(body, &self.tower, [Some("t"), None]).map_err(|e| shift_error(e.into(), offset))?;
        let run = |p: &mut Parser| -> Result<(Poly2, Poly2)> {
            let x = p.sum()?;
            p.expect(Tok::Comma, "`,`")?;
            let y = p.sum()?;
            p.finish()?;
            Ok((x, y))
        };
        let (x, y) = run(&mut p).map_err(|e| shift_error(e, offset))?;
        let to1 = |q: &Poly2| Poly1::new(self.tower.clone(), q.restrict_y0());
        Parameterization::new(to1(&x), to1(&y)).ok_or_else(|| {
            ParseError::Invalid {
                position: 0,
                message: "an arc must pass through the origin and be nonconstant".into(),
            }
            .into()
        })
    }
}

fn parse_in(text: &str, tower: &TowerRef, vars: [Option<&str>; 2]) -> Result<Poly2> {
    let mut p = Parser::new(text, tower, vars)?;
    let out = p.sum()?;
    p.finish()?;
    Ok(out)
}

fn strip_outer_parens(s: &str) -> Option<&str> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    (depth == 0).then_some(inner)
}

fn shift_error(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse(mut p) => {
            match &mut p {
                ParseError::Unexpected { position, .. }
                | ParseError::UnknownSymbol { position, .. }
                | ParseError::UnknownDifferential { position, .. }
                | ParseError::Invalid { position, .. } => *position += offset,
            }
            Error::Parse(p)
        }
        e => e,
    }
}

pub fn parse_poly(text: &str, ctx: &ParseContext) -> Result<Poly2> {
    ctx.parse_poly(text)
}

pub fn parse_oneform(text: &str, ctx: &ParseContext) -> Result<OneForm> {
    ctx.parse_oneform(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rationals;

    fn q(terms: &[(u32, u32, i64)]) -> Poly2 {
        Poly2::from_int_terms(rationals(), terms)
    }

    #[test]
    fn example_forms() {
        let ctx = ParseContext::new();
        let w = ctx.parse_oneform("(x*y + y^2) dx - x^2 dy").unwrap();
        assert_eq!(w.a(), &q(&[(1, 1, 1), (0, 2, 1)]));
        assert_eq!(w.b(), &q(&[(2, 0, -1)]));
        let w = ctx.parse_oneform("x dy - y*dx + 3/4 dx").unwrap();
        assert_eq!(w.to_string(), "(-y + 3/4) dx + (x) dy");
    }

    #[test]
    fn declared_constants() {
        let mut ctx = ParseContext::new();
        ctx.declare("b: b^2 - 2 ~ 1.41421").unwrap();
        let w = ctx
            .parse_oneform("((b-1)*x*y - y^3) dx + (x*y - b*x^2 + x*y^2) dy")
            .unwrap();
        let text = w.to_string();
        assert_eq!(text, "(-y^3 + (b - 1)*x*y) dx + (x*y^2 - b*x^2 + x*y) dy");
        assert_eq!(ctx.parse_oneform(&text).unwrap(), w);
        assert_eq!(ctx.tower().declarations(), vec!["b: b^2 - 2 ~ 1.41421".to_string()]);
    }

    #[test]
    fn errors() {
        let ctx = ParseContext::new();
        match ctx.parse_oneform("dx + dz") {
            Err(Error::Parse(ParseError::UnknownDifferential { position: 5, name })) => assert_eq!(name, "dz"),
            r => panic!("unexpected {r:?}"),
        }
        assert!(matches!(
            ctx.parse_oneform("c*x dx"),
            Err(Error::Parse(ParseError::UnknownSymbol { position: 0, .. }))
        ));
        match ctx.parse_oneform("x dx + y") {
            Err(Error::Parse(ParseError::Unexpected { expected, .. })) => {
                assert!(expected.contains(&"`dy`".to_string()))
            }
            r => panic!("unexpected {r:?}"),
        }
        assert!(ctx.parse_poly("x y").is_err());
        assert!(ctx.parse_poly("x/0").is_err());
        assert!(ctx.parse_poly("1/x").is_err());
        assert!(matches!(ctx.parse_oneform("0 dx"), Err(Error::ZeroForm)));
        let mut ctx = ParseContext::new();
        assert!(ctx.declare("x: x^2 - 2").is_err());
        assert!(ctx.declare("a: a^2 - 1").is_ok());
        assert!(ctx.declare("c: c^2 - 4*c + 4").is_err());
    }

    #[test]
    fn arcs() {
        let ctx = ParseContext::new();
        let g = ctx.parse_parameterization("(t^2, t^3)").unwrap();
        assert_eq!(g.to_string(), "(t^2, t^3)");
        let g = ctx.parse_parameterization("(t+1)*t, -t").unwrap();
        assert_eq!(g.to_string(), "(t^2 + t, -t)");
        assert!(ctx.parse_parameterization("t + 1, t").is_err());
    }
}
