use num_bigint::BigInt;

use super::monomial::Monomial;
use super::poly::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        message: msg.into(),
    }
}

fn lex(nvars: usize, text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Num(s.parse().unwrap()));
            }
            'x' => {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let idx: usize = s
                    .parse()
                    .map_err(|_| err(format!("variable without index at column {start}")))?;
                if idx == 0 || idx > nvars {
                    return Err(err(format!("variable x{idx} outside x1..x{nvars}")));
                }
                out.push(Tok::Var(idx - 1));
            }
            other => return Err(err(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                // juxtaposition such as 3x1 or x1x2
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(err("expected integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Polynomial::constant(self.nvars, Rational::from_bigint(n))),
            Some(Tok::Var(i)) => Ok(Polynomial::monomial(
                Monomial::variable(self.nvars, i),
                Rational::one(),
            )),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(err("missing ')'")),
                }
            }
            Some(t) => Err(err(format!("unexpected token {t:?}"))),
            None => Err(err("unexpected end of expression")),
        }
    }
}

pub(crate) fn parse_polynomial(nvars: usize, text: &str) -> Result<Polynomial> {
    let toks = lex(nvars, text)?;
    if toks.is_empty() {
        return Err(err("empty polynomial"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        nvars,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_eta_syntax() {
        let f = parse_polynomial(3, "x1^2 + 2*x2*x3 - (x1 - x3)^2").unwrap();
        assert_eq!(f.render(), "2*x1*x3 + 2*x2*x3 - x3^2");
        let g = parse_polynomial(2, "-3x1x2 + 4").unwrap();
        assert_eq!(g.render(), "-3*x1*x2 + 4");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_polynomial(2, "x3").is_err());
        assert!(parse_polynomial(2, "x1 +").is_err());
        assert!(parse_polynomial(2, "x1 ^ x2").is_err());
        assert!(parse_polynomial(2, "").is_err());
    }
}
