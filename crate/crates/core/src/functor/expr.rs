use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finitary Kripke-polynomial functor, optionally with finite multisets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctorExpr {
    Id,
    /// The constant functor on `{0..k-1}`.
    Const(usize),
    Pfin,
    /// Finite multisets; supported by relation lifting only.
    Mfin,
    Prod(Box<FunctorExpr>, Box<FunctorExpr>),
    Coprod(Box<FunctorExpr>, Box<FunctorExpr>),
    /// `T^d`, functions from `{0..d-1}`.
    Exp(Box<FunctorExpr>, usize),
    /// `outer ∘ inner`.
    Comp(Box<FunctorExpr>, Box<FunctorExpr>),
}

use FunctorExpr::*;

impl FunctorExpr {
    pub fn prod(l: FunctorExpr, r: FunctorExpr) -> Self {
        Prod(Box::new(l), Box::new(r))
    }

    pub fn coprod(l: FunctorExpr, r: FunctorExpr) -> Self {
        Coprod(Box::new(l), Box::new(r))
    }

    pub fn exp(body: FunctorExpr, d: usize) -> Self {
        Exp(Box::new(body), d)
    }

    pub fn comp(outer: FunctorExpr, inner: FunctorExpr) -> Self {
        Comp(Box::new(outer), Box::new(inner))
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_functor(text)
    }

    /// True iff `Mfin` does not occur.
    pub fn finite_to_finite(&self) -> bool {
        match self {
            Id | Const(_) | Pfin => true,
            Mfin => false,
            Prod(l, r) | Coprod(l, r) | Comp(l, r) => l.finite_to_finite() && r.finite_to_finite(),
            Exp(b, _) => b.finite_to_finite(),
        }
    }

    /// Pure-ASCII rendering (`.` for composition).
    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        self.render(&mut s, 0, ".");
        s
    }

    fn precedence(&self) -> u8 {
        match self {
            Coprod(..) => 0,
            Prod(..) => 1,
            Comp(..) => 2,
            Exp(..) => 3,
            _ => 4,
        }
    }

    fn render(&self, out: &mut String, ctx: u8, comp: &str) {
        let own = self.precedence();
        if own < ctx {
            out.push('(');
        }
        match self {
            Id => out.push_str("Id"),
            Const(k) => out.push_str(&format!("C[{k}]")),
            Pfin => out.push('P'),
            Mfin => out.push('M'),
            Coprod(l, r) => {
                l.render(out, 0, comp);
                out.push('+');
                r.render(out, 1, comp);
            }
            Prod(l, r) => {
                l.render(out, 1, comp);
                out.push('*');
                r.render(out, 2, comp);
            }
            Comp(l, r) => {
                l.render(out, 2, comp);
                out.push_str(comp);
                r.render(out, 3, comp);
            }
            Exp(b, d) => {
                b.render(out, 3, comp);
                out.push_str(&format!("^{d}"));
            }
        }
        if own < ctx {
            out.push(')');
        }
    }
}

impl fmt::Display for FunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(&mut s, 0, "∘");
        f.write_str(&s)
    }
}

impl std::str::FromStr for FunctorExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_functor(s)
    }
}

/// Parses the functor grammar
/// `T ::= Id | P | M | C[n] | T*T | T+T | T^n | T∘T | T.T | (T)`
/// with precedence `^` > `∘`/`.` > `*` > `+`, all left-associative.
pub fn parse_functor(text: &str) -> Result<FunctorExpr> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<usize> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.error("expected a natural number"));
        }
        let n = digits.parse().map_err(|_| self.error("number too large"))?;
        self.pos += digits.len();
        Ok(n)
    }

    fn sum(&mut self) -> Result<FunctorExpr> {
        let mut e = self.prod()?;
        while self.eat("+") {
            e = FunctorExpr::coprod(e, self.prod()?);
        }
        Ok(e)
    }

    fn prod(&mut self) -> Result<FunctorExpr> {
        let mut e = self.comp()?;
        while self.eat("*") || self.eat("×") {
            e = FunctorExpr::prod(e, self.comp()?);
        }
        Ok(e)
    }

    fn comp(&mut self) -> Result<FunctorExpr> {
        let mut e = self.pow()?;
        while self.eat("∘") || self.eat(".") {
            e = FunctorExpr::comp(e, self.pow()?);
        }
        Ok(e)
    }

    fn pow(&mut self) -> Result<FunctorExpr> {
        let mut e = self.atom()?;
        while self.eat("^") {
            e = FunctorExpr::exp(e, self.nat()?);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<FunctorExpr> {
        if self.eat("(") {
            let e = self.sum()?;
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            return Ok(e);
        }
        if self.eat("Id") {
            return Ok(Id);
        }
        if self.eat("C[") {
            let k = self.nat()?;
            if !self.eat("]") {
                return Err(self.error("expected `]`"));
            }
            return Ok(Const(k));
        }
        if self.eat("P") {
            return Ok(Pfin);
        }
        if self.eat("M") {
            return Ok(Mfin);
        }
        self.skip_ws();
        Err(self.error("expected a functor"))
    }
}
