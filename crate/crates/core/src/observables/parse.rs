//! Textual polynomial syntax: `x<i>_<c>`, `v<i>_<c>`, integer or rational literals,
//! `+ - * ^`, parentheses, and division by a literal.

use num::traits::Zero;

use super::poly::{Kind, Poly};
use crate::error::{Error, Result};
use crate::scalar::{int, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Var(Kind, usize, usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '/' => {
                out.push(Token::Slash);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            '(' => {
                out.push(Token::LParen);
                i += 1
            }
            ')' => {
                out.push(Token::RParen);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse().map_err(|_| Error::Parse(format!("bad integer `{text}`")))?;
                out.push(Token::Num(Rational::from_integer(n)));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let ident: String = chars[start..i].iter().collect();
                out.push(parse_variable(&ident)?);
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

fn parse_variable(ident: &str) -> Result<Token> {
    let unknown = || Error::Parse(format!("unknown identifier `{ident}`"));
    let kind = match ident.as_bytes()[0] {
        b'x' => Kind::Position,
        b'v' => Kind::Velocity,
        _ => return Err(unknown()),
    };
    let (p, c) = ident[1..].split_once('_').ok_or_else(unknown)?;
    let p: usize = p.parse().map_err(|_| unknown())?;
    let c: usize = c.parse().map_err(|_| unknown())?;
    if p == 0 || c == 0 {
        return Err(unknown());
    }
    Ok(Token::Var(kind, p, c))
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    k: usize,
    d: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Plus => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Token::Minus => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Star => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Token::Slash => {
                    self.pos += 1;
                    let den = self.unary()?;
                    if den.degree() > 0 {
                        return Err(Error::Parse("division by a non-constant".into()));
                    }
                    let c = den.constant_term();
                    if c.is_zero() {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    acc = acc.scale(&(int(1) / c));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        if self.peek() == Some(&Token::Plus) {
            self.pos += 1;
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Token::Num(n)) if n.is_integer() && n <= int(64) && n >= int(0) => {
                    let e: u32 = n.to_integer().to_string().parse().expect("small exponent");
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("exponent must be a small non-negative integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.next() {
            Some(Token::Num(n)) => Ok(Poly::constant(self.k, self.d, n)),
            Some(Token::Var(kind, p, c)) => {
                if p > self.k {
                    return Err(Error::Parse(format!("particle index {p} exceeds {}", self.k)));
                }
                if c > self.d {
                    return Err(Error::Parse(format!("coordinate index {c} exceeds {}", self.d)));
                }
                Ok(Poly::variable(self.k, self.d, p - 1, kind, c - 1))
            }
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(Error::Parse("missing `)`".into())),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

/// Parses a polynomial on `(R^{2d})^k`; variables beyond `k` or `d` are rejected.
pub fn parse_poly(s: &str, k: usize, d: usize) -> Result<Poly> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks: &toks, pos: 0, k, d };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

/// Highest particle index mentioned in an expression (at least 1).
pub fn max_particle_index(s: &str) -> Result<usize> {
    Ok(tokenize(s)?.iter().filter_map(|t| if let Token::Var(_, p, _) = t { Some(*p) } else { None }).max().unwrap_or(1))
}
