//! Concrete ASCII syntax.
//!
//! ```text
//! var     := "p" digits
//! atom    := var | "(" formula ")"
//! unary   := ("~" | "[]")* atom
//! conj    := unary ("&" unary)*
//! disj    := conj ("|" conj)*
//! formula := disj ("->" formula)?
//! ```
//!
//! `&` and `|` associate to the left, `->` to the right. The keyword `one`
//! is accepted as an atom and expands to `p0 -> p0`; the printer never
//! produces it.

use alloc::vec::Vec;
use core::fmt;

use super::Formula;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: &'static str,
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

impl core::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &'static str) -> ParseError {
        ParseError {
            position: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conj()?;
        while self.eat("|") {
            acc = Formula::disj(acc, self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = Formula::conj(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let mut ops = Vec::new();
        loop {
            if self.eat("~") {
                ops.push(false);
            } else if self.eat("[]") {
                ops.push(true);
            } else {
                break;
            }
        }
        let mut f = self.atom()?;
        for is_box in ops.into_iter().rev() {
            f = if is_box { Formula::boxed(f) } else { Formula::neg(f) };
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        if self.eat("(") {
            let f = self.formula()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(f);
        }
        if self.eat("one") {
            return Ok(Formula::one());
        }
        if self.eat("p") {
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected variable index after 'p'"));
            }
            let digits = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
            return digits.parse().map(Formula::Var).map_err(|_| ParseError {
                position: start,
                message: "variable index out of range",
            });
        }
        Err(self.error("expected a variable, '(', '~' or '[]'"))
    }
}

const IMPL: u8 = 0;
const DISJ: u8 = 1;
const CONJ: u8 = 2;
const UNARY: u8 = 3;

fn write_at(out: &mut fmt::Formatter<'_>, f: &Formula, ctx: u8) -> fmt::Result {
    let level = match f {
        Formula::Impl(..) => IMPL,
        Formula::Disj(..) => DISJ,
        Formula::Conj(..) => CONJ,
        _ => UNARY,
    };
    if level < ctx {
        out.write_str("(")?;
    }
    match f {
        Formula::Var(k) => write!(out, "p{k}")?,
        Formula::Impl(l, r) => {
            write_at(out, l, DISJ)?;
            out.write_str(" -> ")?;
            write_at(out, r, IMPL)?;
        }
        Formula::Disj(l, r) => {
            write_at(out, l, DISJ)?;
            out.write_str(" | ")?;
            write_at(out, r, CONJ)?;
        }
        Formula::Conj(l, r) => {
            write_at(out, l, CONJ)?;
            out.write_str(" & ")?;
            write_at(out, r, UNARY)?;
        }
        Formula::Neg(x) => {
            out.write_str("~")?;
            write_at(out, x, UNARY)?;
        }
        Formula::Box(x) => {
            out.write_str("[]")?;
            write_at(out, x, UNARY)?;
        }
    }
    if level < ctx {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, IMPL)
    }
}
