//! Line-oriented system text format.
//!
//! ```text
//! # comment
//! name circle
//! vars x, y
//! box x in [-2, 2]
//! box y in [-pi/2, pi/2]
//! eq x^2 + y^2 - 1
//! eq x - y
//! ineq x*y - 4 < 0
//! ```
//!
//! Statements end at a newline or `;`. `box [lo,hi]^n` (or `box [lo,hi]`)
//! gives every variable the same bounds. `meta <key> <value>` attaches
//! metadata and `nonsquare` lifts the square-system check. Decimal literals
//! that are not exactly representable become one-ulp enclosures, and an
//! interval constant may be written inline as `[lo, hi]`.

use std::collections::BTreeMap;

use super::system::{Relation, System};
use super::tree::{Expr, Func};
use crate::interval::{Interval, IntervalBox, PI_IV};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    Rel(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(line_no: usize, col0: usize, s: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: String| ParseError { line: line_no, col: col0 + col, msg };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            if text.matches('.').count() > 1 {
                return Err(err(col, format!("malformed number '{text}'")));
            }
            out.push(Token { tok: Tok::Num(text), line: line_no, col: col0 + col });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: line_no, col: col0 + col });
        } else if c == '<' || c == '>' {
            let two = chars.get(i + 1) == Some(&'=');
            let rel = match (c, two) {
                ('<', true) => "<=",
                ('<', false) => "<",
                ('>', true) => ">=",
                _ => ">",
            };
            i += if two { 2 } else { 1 };
            out.push(Token { tok: Tok::Rel(rel), line: line_no, col: col0 + col });
        } else if "+-*/^(),[]".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: line_no, col: col0 + col });
            i += 1;
        } else {
            return Err(err(col, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

/// Exact value of a decimal literal when it is a double, else a one-ulp
/// enclosure of the correctly rounded value.
pub(crate) fn decimal_literal(text: &str) -> Option<Interval> {
    let x: f64 = text.parse().ok()?;
    if !x.is_finite() {
        return None;
    }
    if decimal_is_exact(text, x) {
        Some(Interval::point(x))
    } else {
        Some(Interval::around(x))
    }
}

fn decimal_is_exact(text: &str, x: f64) -> bool {
    let (mant, exp) = match text.find(['e', 'E']) {
        Some(p) => (&text[..p], text[p + 1..].parse::<i32>().unwrap_or(i32::MAX)),
        None => (text, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: String = format!("{int}{frac}").trim_start_matches('0').to_string();
    let digits = digits.trim_end_matches('0');
    let trailing = format!("{int}{frac}").trim_start_matches('0').len() as i32 - digits.len() as i32;
    if digits.is_empty() {
        return true;
    }
    if digits.len() > 38 {
        return false;
    }
    let m: u128 = match digits.parse() {
        Ok(v) => v,
        Err(_) => return false,
    };
    let e = exp.saturating_sub(frac.len() as i32).saturating_add(trailing);
    let (num, pow2): (u128, i32) = if e >= 0 {
        let mut n = m;
        for _ in 0..e {
            n = match n.checked_mul(10) {
                Some(v) => v,
                None => return false,
            };
        }
        (n, 0)
    } else {
        // m / 10^k = (m / 5^k) / 2^k
        let k = -e;
        if k > 55 {
            return false;
        }
        let p5 = 5u128.pow(k as u32);
        if m % p5 != 0 {
            return false;
        }
        (m / p5, -k)
    };
    let tz = num.trailing_zeros();
    let odd = num >> tz;
    if 128 - odd.leading_zeros() > 53 {
        return false;
    }
    // the binary exponent must keep the value normal; the parsed value confirms
    let exact = (odd as f64) * 2f64.powi(tz as i32 + pow2);
    exact == x.abs() && exact.is_normal()
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    vars: &'a BTreeMap<String, usize>,
    line: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => (self.line, self.toks.last().map_or(1, |t| t.col + 1)),
        };
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat('-') {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.eat('/') {
                let rhs = self.unary()?;
                lhs = match rhs {
                    // keep x/0 as written; it is an evaluation-time matter
                    Expr::Const(c) if c.contains_zero() => Expr::Div(Box::new(lhs), Box::new(rhs)),
                    rhs => Expr::div(lhs, rhs),
                };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::neg(self.unary()?));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Expr::pow(base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = match self.toks.get(self.pos) {
            Some(t) => t.tok.clone(),
            None => return self.err("unexpected end of expression"),
        };
        match tok {
            Tok::Num(text) => {
                let Some(v) = decimal_literal(&text) else {
                    return self.err(format!("bad number '{text}'"));
                };
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if let Some(f) = Func::from_name(&name) {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::call(f, arg));
                }
                if name == "pi" {
                    return Ok(Expr::Const(PI_IV));
                }
                match self.vars.get(&name) {
                    Some(&i) => Ok(Expr::Var(i)),
                    None => {
                        self.pos -= 1;
                        self.err(format!("unknown identifier '{name}'"))
                    }
                }
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                self.pos += 1;
                let (lo, hi) = self.bounds_body()?;
                if lo > hi || !lo.is_finite() || !hi.is_finite() {
                    return self.err("invalid interval constant");
                }
                Ok(Expr::Const(Interval::new(lo, hi)))
            }
            _ => self.err("expected an expression"),
        }
    }

    /// `lo, hi]` after an opening bracket, each a constant expression or ±inf.
    fn bounds_body(&mut self) -> Result<(f64, f64), ParseError> {
        let lo = self.bound(true)?;
        self.expect(',')?;
        let hi = self.bound(false)?;
        self.expect(']')?;
        Ok((lo, hi))
    }

    fn bound(&mut self, lower: bool) -> Result<f64, ParseError> {
        let save = self.pos;
        let neg = self.eat('-');
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == "inf" {
                self.pos += 1;
                return Ok(if neg { f64::NEG_INFINITY } else { f64::INFINITY });
            }
        }
        // a plain literal bound is taken as its nearest double, so printed boxes round-trip
        if let Some(Tok::Num(text)) = self.peek() {
            let text = text.clone();
            if matches!(self.toks.get(self.pos + 1).map(|t| &t.tok), Some(Tok::Sym(',' | ']'))) {
                if let Ok(v) = text.parse::<f64>() {
                    self.pos += 1;
                    return Ok(if neg { -v } else { v });
                }
            }
        }
        self.pos = save;
        let e = self.expr()?;
        match e.as_const() {
            Some(c) if !c.is_empty() => Ok(if lower { c.lo() } else { c.hi() }),
            _ => self.err("bound must be a constant expression"),
        }
    }
}

fn split_statements(text: &str) -> Vec<(usize, usize, &str)> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        let mut col = 0;
        for part in line.split(';') {
            if !part.trim().is_empty() {
                out.push((ln + 1, col, part));
            }
            col += part.chars().count() + 1;
        }
    }
    out
}

/// Parses a system from text.
pub fn parse_system(text: &str) -> Result<System, ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut bounds: Vec<Option<Interval>> = Vec::new();
    let mut eqs: Vec<Expr> = Vec::new();
    let mut ineqs: Vec<(Expr, Relation)> = Vec::new();
    let mut metadata = BTreeMap::new();
    let mut name = String::new();
    let mut nonsquare = false;

    for (ln, col0, stmt) in split_statements(text) {
        let trimmed = stmt.trim_start();
        if let Some(body) = trimmed.strip_prefix("meta").filter(|b| b.starts_with(char::is_whitespace)) {
            let body = body.trim();
            let (k, v) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            metadata.insert(k.to_string(), v.trim().to_string());
            continue;
        }
        let toks = tokenize(ln, col0, stmt)?;
        let Some(Token { tok: Tok::Ident(kw), .. }) = toks.first().cloned() else {
            return Err(ParseError { line: ln, col: col0 + 1, msg: "expected a keyword".into() });
        };
        let rest = &toks[1..];
        let fail = |t: Option<&Token>, msg: &str| {
            let (line, col) = t.map_or((ln, col0 + stmt.len()), |t| (t.line, t.col));
            Err(ParseError { line, col, msg: msg.into() })
        };
        match kw.as_str() {
            "vars" => {
                let mut expect_name = true;
                for t in rest {
                    match (&t.tok, expect_name) {
                        (Tok::Ident(v), true) => {
                            if index.contains_key(v) || Func::from_name(v).is_some() || v == "pi" || v == "inf" {
                                return fail(Some(t), &format!("invalid or duplicate variable '{v}'"));
                            }
                            index.insert(v.clone(), names.len());
                            names.push(v.clone());
                            bounds.push(None);
                            expect_name = false;
                        }
                        (Tok::Sym(','), false) => expect_name = true,
                        _ => return fail(Some(t), "expected a variable list"),
                    }
                }
                if expect_name {
                    return fail(rest.last(), "expected a variable name");
                }
            }
            "box" => {
                let mut p = Parser { toks: rest, pos: 0, vars: &index, line: ln };
                let target = match p.peek() {
                    Some(Tok::Ident(v)) => {
                        let Some(&i) = index.get(v) else {
                            return p.err(format!("unknown variable '{v}'"));
                        };
                        p.pos += 1;
                        match p.peek() {
                            Some(Tok::Ident(k)) if k == "in" => p.pos += 1,
                            _ => return p.err("expected 'in'"),
                        }
                        Some(i)
                    }
                    _ => None,
                };
                p.expect('[')?;
                let (lo, hi) = p.bounds_body()?;
                let Some(iv) = Interval::try_new(lo, hi) else {
                    return p.err("empty or invalid box bounds");
                };
                if target.is_none() && p.eat('^') {
                    match p.peek() {
                        Some(Tok::Num(n)) if n.parse::<usize>().ok() == Some(names.len()) => p.pos += 1,
                        _ => return p.err(format!("exponent must equal the variable count {}", names.len())),
                    }
                }
                if !p.at_end() {
                    return p.err("trailing input");
                }
                match target {
                    Some(i) => {
                        if bounds[i].is_some() {
                            return fail(rest.first(), &format!("duplicate box for '{}'", names[i]));
                        }
                        bounds[i] = Some(iv);
                    }
                    None => bounds.iter_mut().for_each(|b| *b = Some(iv)),
                }
            }
            "eq" => {
                let mut p = Parser { toks: rest, pos: 0, vars: &index, line: ln };
                let e = p.expr()?;
                if !p.at_end() {
                    return p.err("trailing input");
                }
                eqs.push(e);
            }
            "ineq" => {
                let mut p = Parser { toks: rest, pos: 0, vars: &index, line: ln };
                let e = p.expr()?;
                let rel = match p.peek() {
                    Some(Tok::Rel(r)) => Relation::from_symbol(r).expect("lexer emits known relations"),
                    _ => return p.err("expected a relation"),
                };
                p.pos += 1;
                match p.peek() {
                    Some(Tok::Num(z)) if z.parse::<f64>().ok() == Some(0.0) => p.pos += 1,
                    _ => return p.err("right-hand side must be 0"),
                }
                if !p.at_end() {
                    return p.err("trailing input");
                }
                ineqs.push((e, rel));
            }
            "name" => match rest {
                [Token { tok: Tok::Ident(n), .. }] => name = n.clone(),
                _ => return fail(rest.first(), "expected a single identifier"),
            },
            "nonsquare" => {
                if !rest.is_empty() {
                    return fail(rest.first(), "unexpected input after 'nonsquare'");
                }
                nonsquare = true;
            }
            other => {
                return fail(toks.first(), &format!("unknown statement '{other}'"));
            }
        }
    }

    if !nonsquare && eqs.len() != names.len() {
        return Err(ParseError {
            line: text.lines().count().max(1),
            col: 1,
            msg: format!("system is not square: {} equations, {} variables", eqs.len(), names.len()),
        });
    }
    let initial = IntervalBox::new(bounds.into_iter().map(|b| b.unwrap_or(Interval::ENTIRE)).collect());
    let mut sys = System::from_parts(name, names, eqs, ineqs, initial, metadata);
    sys.set_nonsquare(nonsquare);
    Ok(sys)
}
