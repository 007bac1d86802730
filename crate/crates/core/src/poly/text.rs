//! Text form of polynomials: `3/4*x1^2*x2 + -1*x2 + 5`.
//!
//! Printing lists terms in decreasing graded lexicographic order and omits
//! unit coefficients. Parsing accepts any expression built from `+ - * / ^`,
//! parentheses, numbers, field literals and variables.

use std::fmt;

use super::{Poly, Var};
use crate::error::{Error, Result};
use crate::field::Field;

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let field = self.field();
        for (i, (m, c)) in self.terms().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                f.write_str(&field.format_elem(c))?;
            } else if field.is_one(c) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", field.format_elem(c))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Lit(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Num(s[st..i].to_string())));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if c == '[' || c == '<' {
            let close = if c == '[' { ']' } else { '>' };
            let st = i;
            let mut depth = 0;
            loop {
                if i >= b.len() {
                    return Err(Error::Parse {
                        pos: st,
                        msg: "unterminated literal".into(),
                    });
                }
                let ch = b[i] as char;
                if ch == c {
                    depth += 1;
                } else if ch == close {
                    depth -= 1;
                }
                i += 1;
                if depth == 0 {
                    break;
                }
            }
            out.push((st, Tok::Lit(s[st..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a Field,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn loc(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.loc(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                acc.mul(&rhs)
            } else {
                if !rhs.is_constant() || rhs.is_zero() {
                    return Err(self.err("division by a non-constant or zero"));
                }
                acc.scale(&self.field.inv(&rhs.constant_term())?)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let f = self.field;
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(f, f.parse_elem(&n)?))
            }
            Some(Tok::Lit(l)) => {
                let at = self.loc();
                self.pos += 1;
                let e = f.parse_elem(&l).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::Parse { pos: at, msg },
                    other => other,
                })?;
                Ok(Poly::constant(f, e))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "eps" {
                    if let Some(eps) = f.eps() {
                        return Ok(Poly::constant(f, eps));
                    }
                }
                Ok(Poly::var(f, Var::parse(&name)?))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

impl Poly {
    /// Parses polynomial text over `field`.
    pub fn parse(field: &Field, s: &str) -> Result<Poly> {
        let toks = tokenize(s)?;
        let mut p = Parser {
            field,
            toks,
            pos: 0,
            len: s.len(),
        };
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}
