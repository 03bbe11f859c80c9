//! Expression grammar and canonical formatter.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*
//! factor  := atom ('^' uint)?
//! atom    := number | 'i' | 'pi' | 'z'<digits> | '(' expr ')'
//!          | 'exp(' expr ')' | 'sqrt(' expr ')' | 'ln(' expr ')' | '-' atom
//! ```
//!
//! Division requires both operands to fold to constants. `sqrt`/`ln`
//! arguments must fold to constants; `exp` arguments must reduce to a
//! polynomial; `^` exponents are literal non-negative integers. Constant
//! subexpressions are folded with complex scalar arithmetic.
//!
//! `format_expression` prints canonical form such that
//! `parse(format(f))` is structurally identical to `f`.

use crate::complex::{clog, csqrt, cx, Cx};
use crate::exppoly::ExpPoly;
use crate::poly::{MultiIndex, Poly};
use std::fmt;
use thiserror::Error;

/// Syntax or lowering error with the byte offset it occurred at.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at offset {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

// ---- Lexer ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    ImaginaryUnit,
    Pi,
    Var(usize),
    Ident(&'static str),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        let start = k;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                k += 1;
            }
            '(' => {
                toks.push((Tok::LParen, start));
                k += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                k += 1;
            }
            '+' => {
                toks.push((Tok::Plus, start));
                k += 1;
            }
            '-' => {
                toks.push((Tok::Minus, start));
                k += 1;
            }
            '*' => {
                toks.push((Tok::Star, start));
                k += 1;
            }
            '/' => {
                toks.push((Tok::Slash, start));
                k += 1;
            }
            '^' => {
                toks.push((Tok::Caret, start));
                k += 1;
            }
            '0'..='9' | '.' => {
                let mut end = k;
                while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                    end += 1;
                }
                if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                    let mut probe = end + 1;
                    if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                        probe += 1;
                    }
                    if probe < bytes.len() && bytes[probe].is_ascii_digit() {
                        while probe < bytes.len() && bytes[probe].is_ascii_digit() {
                            probe += 1;
                        }
                        end = probe;
                    }
                }
                let s = &text[k..end];
                match s.parse::<f64>() {
                    Ok(v) => toks.push((Tok::Num(v), start)),
                    Err(_) => return err(start, format!("invalid number literal '{s}'")),
                }
                k = end;
            }
            'a'..='z' | 'A'..='Z' => {
                let mut end = k;
                while end < bytes.len()
                    && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                let word = &text[k..end];
                let tok = match word {
                    "i" => Tok::ImaginaryUnit,
                    "pi" => Tok::Pi,
                    "exp" => Tok::Ident("exp"),
                    "sqrt" => Tok::Ident("sqrt"),
                    "ln" => Tok::Ident("ln"),
                    _ => {
                        if let Some(rest) = word.strip_prefix('z') {
                            match rest.parse::<usize>() {
                                Ok(n) if n >= 1 => Tok::Var(n - 1),
                                _ => {
                                    return err(
                                        start,
                                        format!("unknown identifier '{word}' (variables are z1, z2, ...)"),
                                    )
                                }
                            }
                        } else {
                            return err(start, format!("unknown identifier '{word}'"));
                        }
                    }
                };
                toks.push((tok, start));
                k = end;
            }
            _ => return err(start, format!("unexpected character '{c}'")),
        }
    }
    toks.push((Tok::Eof, text.len()));
    Ok(toks)
}

// ---- Values during lowering ----

/// Parse-time value: a folded constant or a general exponential polynomial.
#[derive(Debug, Clone)]
enum Val {
    Const(Cx),
    Ep(ExpPoly),
}

impl Val {
    fn into_ep(self, arity: usize) -> ExpPoly {
        match self {
            Val::Const(c) => ExpPoly::constant(arity, c),
            Val::Ep(f) => f,
        }
    }

    fn as_const(&self) -> Option<Cx> {
        match self {
            Val::Const(c) => Some(*c),
            Val::Ep(_) => None,
        }
    }
}

struct Parser {
    lx: Lexer,
    arity: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.lx.toks[self.lx.at].0
    }

    fn pos(&self) -> usize {
        self.lx.toks[self.lx.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.lx.toks[self.lx.at].0.clone();
        self.lx.at += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            err(self.pos(), format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = add_vals(acc, rhs, self.arity);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = add_vals(acc, neg_val(rhs, self.arity), self.arity);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = mul_vals(acc, rhs, self.arity);
                }
                Tok::Slash => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.factor()?;
                    let num = acc
                        .as_const()
                        .ok_or_else(|| ParseError {
                            pos,
                            message: "division requires constant operands".into(),
                        })?;
                    let den = rhs.as_const().ok_or_else(|| ParseError {
                        pos,
                        message: "division requires constant operands".into(),
                    })?;
                    if den == cx(0.0, 0.0) {
                        return err(pos, "division by zero");
                    }
                    acc = Val::Const(num / den);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Val, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            let pos = self.pos();
            self.bump();
            let n = match self.bump() {
                Tok::Num(v) if v.fract() == 0.0 && v >= 0.0 && v <= u32::MAX as f64 => v as u32,
                _ => {
                    return err(pos, "exponent must be a non-negative integer literal");
                }
            };
            return Ok(match base {
                Val::Const(c) => {
                    let mut acc = cx(1.0, 0.0);
                    for _ in 0..n {
                        acc *= c;
                    }
                    Val::Const(acc)
                }
                Val::Ep(f) => Val::Ep(f.pow(n)),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Val, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(v) => Ok(Val::Const(cx(v, 0.0))),
            Tok::ImaginaryUnit => Ok(Val::Const(cx(0.0, 1.0))),
            Tok::Pi => Ok(Val::Const(cx(std::f64::consts::PI, 0.0))),
            Tok::Var(k) => {
                if k >= self.arity {
                    err(
                        pos,
                        format!("variable z{} exceeds arity {}", k + 1, self.arity),
                    )
                } else {
                    Ok(Val::Ep(ExpPoly::from_poly(Poly::variable(self.arity, k))))
                }
            }
            Tok::Minus => {
                let inner = self.atom()?;
                Ok(neg_val(inner, self.arity))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.expect(Tok::LParen, "'(' after function name")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                match name {
                    "exp" => match inner {
                        Val::Const(c) => Ok(Val::Const(c.exp())),
                        Val::Ep(f) => {
                            let p = f.as_poly().ok_or_else(|| ParseError {
                                pos,
                                message: "exp argument must be a polynomial".into(),
                            })?;
                            Ok(Val::Ep(ExpPoly::exp_of_poly(p)))
                        }
                    },
                    "sqrt" => {
                        let c = inner.as_const().ok_or_else(|| ParseError {
                            pos,
                            message: "sqrt argument must be constant".into(),
                        })?;
                        Ok(Val::Const(csqrt(c)))
                    }
                    "ln" => {
                        let c = inner.as_const().ok_or_else(|| ParseError {
                            pos,
                            message: "ln argument must be constant".into(),
                        })?;
                        match clog(c) {
                            Ok(v) => Ok(Val::Const(v)),
                            Err(e) => err(pos, e.to_string()),
                        }
                    }
                    _ => unreachable!(),
                }
            }
            Tok::Eof => err(pos, "unexpected end of input"),
            other => err(pos, format!("unexpected token {other:?}")),
        }
    }
}

fn add_vals(a: Val, b: Val, arity: usize) -> Val {
    match (&a, &b) {
        (Val::Const(x), Val::Const(y)) => Val::Const(x + y),
        _ => Val::Ep(a.into_ep(arity).add(&b.into_ep(arity))),
    }
}

fn mul_vals(a: Val, b: Val, arity: usize) -> Val {
    match (&a, &b) {
        (Val::Const(x), Val::Const(y)) => Val::Const(x * y),
        (Val::Const(x), Val::Ep(f)) | (Val::Ep(f), Val::Const(x)) => Val::Ep(f.scale_mul(*x)),
        _ => Val::Ep(a.into_ep(arity).mul(&b.into_ep(arity))),
    }
}

fn neg_val(a: Val, _arity: usize) -> Val {
    match a {
        Val::Const(c) => Val::Const(-c),
        Val::Ep(f) => Val::Ep(f.neg()),
    }
}

/// Parse an expression into an exponential polynomial in `arity` variables.
pub fn parse_expression(text: &str, arity: usize) -> Result<ExpPoly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        lx: Lexer { toks, at: 0 },
        arity,
    };
    let v = p.expr()?;
    if *p.peek() != Tok::Eof {
        return err(p.pos(), "trailing input after expression");
    }
    Ok(v.into_ep(arity))
}

/// Parse an expression that must reduce to a plain polynomial.
pub fn parse_polynomial(text: &str, arity: usize) -> Result<Poly, ParseError> {
    let f = parse_expression(text, arity)?;
    f.as_poly().ok_or_else(|| ParseError {
        pos: 0,
        message: "expression must be a polynomial (no exp terms)".into(),
    })
}

/// Parse an expression that must fold to a single complex constant.
pub fn parse_constant(text: &str) -> Result<Cx, ParseError> {
    let f = parse_expression(text, 1)?;
    f.as_poly()
        .and_then(|p| p.as_constant())
        .ok_or_else(|| ParseError {
            pos: 0,
            message: "expression must be constant".into(),
        })
}

// ---- Canonical formatting ----

/// Shortest round-trip decimal for a float, via the standard formatter.
fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Canonical scalar spelling; always re-parses to the same value.
fn scalar_to_string(c: Cx) -> String {
    if c.im == 0.0 {
        if c.re < 0.0 {
            format!("({})", fmt_f64(c.re))
        } else {
            fmt_f64(c.re)
        }
    } else if c.re == 0.0 {
        if c.im < 0.0 {
            format!("({}*i)", fmt_f64(c.im))
        } else {
            format!("{}*i", fmt_f64(c.im))
        }
    } else {
        let sign = if c.im < 0.0 { "-" } else { "+" };
        format!("({}{sign}{}*i)", fmt_f64(c.re), fmt_f64(c.im.abs()))
    }
}

fn monomial_to_string(idx: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (axis, &e) in idx.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("z{}", axis + 1)),
            _ => parts.push(format!("z{}^{}", axis + 1, e)),
        }
    }
    parts.join("*")
}

/// Canonical polynomial spelling, terms in graded-lex order.
pub fn poly_to_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (idx, &c) in p.terms() {
        let mono = monomial_to_string(idx);
        if mono.is_empty() {
            parts.push(scalar_to_string(c));
        } else if c == cx(1.0, 0.0) {
            parts.push(mono);
        } else {
            parts.push(format!("{}*{}", scalar_to_string(c), mono));
        }
    }
    parts.join(" + ")
}

/// Canonical exponential-polynomial spelling; `parse_expression` of the
/// output is structurally identical to the input.
pub fn format_expression(f: &ExpPoly) -> String {
    if f.is_structural_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for t in f.terms() {
        if t.exponent.is_zero() {
            parts.push(poly_to_string(&t.coeff));
        } else {
            parts.push(format!(
                "({})*exp({})",
                poly_to_string(&t.coeff),
                poly_to_string(&t.exponent)
            ));
        }
    }
    parts.join(" + ")
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_expression(self))
    }
}
