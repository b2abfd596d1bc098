//! Polynomial expressions for inline metric entries.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' integer)?
//! atom  := decimal | 'i' | ('x' | 'y') '_'? integer | '(' expr ')'
//! ```
//!
//! Coordinates are 1-based (`x1` is the real part of `z_1`). Division is
//! series division, so the divisor must not vanish at the origin.

use crate::error::{Error, Result};
use crate::jet::{Jet, C64};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    I,
    X(usize),
    Y(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part, e.g. 1e-3
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
            let v = text
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{text}'")))?;
            out.push(Tok::Num(v));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{ch}' in '{src}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 && v <= 64.0 => {
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), v as u32))
                }
                other => Err(Error::Parse(format!(
                    "exponent must be a non-negative integer, got {other:?}"
                ))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Tok::Ident(name) => ident(&name),
            Tok::Op(op) => Err(Error::Parse(format!("unexpected '{op}'"))),
        }
    }
}

fn ident(name: &str) -> Result<Expr> {
    if name == "i" {
        return Ok(Expr::I);
    }
    let (head, rest) = name.split_at(1);
    let index = rest.strip_prefix('_').unwrap_or(rest);
    let k: usize = index
        .parse()
        .ok()
        .filter(|&k| k >= 1)
        .ok_or_else(|| Error::Parse(format!("unknown identifier '{name}'")))?;
    match head {
        "x" => Ok(Expr::X(k - 1)),
        "y" => Ok(Expr::Y(k - 1)),
        _ => Err(Error::Parse(format!("unknown identifier '{name}'"))),
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in '{src}'")));
    }
    Ok(e)
}

impl Expr {
    /// Taylor jet of the expression at the origin of `C^n`.
    pub fn to_jet(&self, n: usize, degree: usize) -> Result<Jet> {
        let check = |k: usize| {
            if k >= n {
                Err(Error::InvalidInput(format!("coordinate index {} exceeds n = {n}", k + 1)))
            } else {
                Ok(())
            }
        };
        Ok(match self {
            Expr::Num(v) => Jet::constant(n, degree, *v),
            Expr::I => Jet::constant(n, degree, C64::i()),
            Expr::X(k) => {
                check(*k)?;
                Jet::coordinate(n, degree, 2 * k)
            }
            Expr::Y(k) => {
                check(*k)?;
                Jet::coordinate(n, degree, 2 * k + 1)
            }
            Expr::Neg(a) => a.to_jet(n, degree)?.scale(-1.0),
            Expr::Add(a, b) => a.to_jet(n, degree)?.try_add(&b.to_jet(n, degree)?)?,
            Expr::Sub(a, b) => a.to_jet(n, degree)?.try_sub(&b.to_jet(n, degree)?)?,
            Expr::Mul(a, b) => a.to_jet(n, degree)?.try_mul(&b.to_jet(n, degree)?)?,
            Expr::Div(a, b) => a.to_jet(n, degree)?.try_div(&b.to_jet(n, degree)?)?,
            Expr::Pow(a, e) => a.to_jet(n, degree)?.powi(*e),
        })
    }
}
