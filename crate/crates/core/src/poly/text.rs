//! Parser for the polynomial text format.
//!
//! Accepts sums of terms such as `3/2 * x1^2 x3 - x2 + 7`, with implicit
//! multiplication by juxtaposition, parentheses, and division by constants.
//! The canonical printed form (see `MultiPoly`'s `Display`) is always
//! accepted back.

use num_traits::{One, Zero};

use super::multipoly::MultiPoly;
use super::rational::{parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'x' | 'X' => {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "variable needs an index, e.g. x1".into(),
                    });
                }
                let idx: usize = s[ds..i].parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: "bad variable index".into(),
                })?;
                out.push((start, Tok::Var(idx)));
                continue;
            }
            d if d.is_ascii_digit() || d == '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let v = parse_rational(&s[start..i]).map_err(|_| Error::Parse {
                    pos: start,
                    msg: format!("bad number {:?}", &s[start..i]),
                })?;
                out.push((start, Tok::Num(v)));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    num_vars: usize,
    base: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.to_string(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = &acc * &f;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    match f.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&(Rational::one() / c)),
                        _ => return self.err("division only by nonzero constants"),
                    }
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    let f = self.unary()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() && n >= Rational::zero() => {
                    self.pos += 1;
                    let k: u32 = n.to_integer().try_into().map_err(|_| Error::Parse {
                        pos: self.offset(),
                        msg: "exponent too large".into(),
                    })?;
                    Ok(base.pow(k))
                }
                _ => self.err("exponent must be a nonnegative integer"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.num_vars, v))
            }
            Some(Tok::Var(idx)) => {
                if idx < self.base || idx - self.base >= self.num_vars {
                    return self.err(&format!(
                        "variable x{idx} outside x{}..x{}",
                        self.base,
                        self.base + self.num_vars - 1
                    ));
                }
                self.pos += 1;
                Ok(MultiPoly::var(self.num_vars, idx - self.base))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

/// Parses `s` as a polynomial in `num_vars` variables named from `x{base}`.
pub fn parse_poly(s: &str, num_vars: usize, base: usize) -> Result<MultiPoly> {
    let toks = lex(s)?;
    let mut p = Parser {
        toks,
        pos: 0,
        num_vars,
        base,
        end: s.len(),
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, ratio};

    #[test]
    fn juxtaposition_and_parentheses() {
        let a = parse_poly("(x1 + x2)(x1 - x2)", 2, 1).unwrap();
        let b = parse_poly("x1^2 - x2^2", 2, 1).unwrap();
        assert_eq!(a, b);
        let c = parse_poly("3/4 * x1 x2^2 / 3", 2, 1).unwrap();
        assert_eq!(c.coefficient(&[1, 2]), ratio(1, 4));
    }

    #[test]
    fn unary_minus_and_constants() {
        let p = parse_poly("-x1 - -2", 1, 1).unwrap();
        assert_eq!(p.coefficient(&[0]), int(2));
        assert_eq!(p.coefficient(&[1]), int(-1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_poly("x4", 3, 1).is_err());
        assert!(parse_poly("x0", 3, 1).is_err());
        assert!(parse_poly("x1 +", 3, 1).is_err());
        assert!(parse_poly("x1 / x2", 3, 1).is_err());
        assert!(parse_poly("x1^-1", 3, 1).is_err());
        assert!(parse_poly("(x1", 3, 1).is_err());
    }

    #[test]
    fn base_zero_names() {
        let p = parse_poly("x0^2 - x1 x2", 3, 0).unwrap();
        assert_eq!(p.format_with_base(0), "-1 * x1 x2 + 1 * x0^2");
    }
}
