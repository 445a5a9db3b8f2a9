//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Expressions are evaluated into a [`Polynomial`] while parsing; there is
//! no intermediate syntax tree.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Polynomial, Rational, VarSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((pos, Tok::Int(digits.parse().expect("ascii digits"))));
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((pos, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(Error::Syntax { pos, msg: format!("unexpected character `{other}`") });
            }
        };
        out.push((pos, tok));
        i += 1;
    }
    out.push((chars.len() + 1, Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: &'a VarSet,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Int(n) => match u32::try_from(&n) {
                Ok(e) => Ok(base.pow(e)),
                Err(_) => self.fail("exponent too large"),
            },
            _ => {
                self.at -= 1;
                self.fail("exponent must be a nonnegative integer literal")
            }
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => {
                let mut value = Rational::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => value /= Rational::from_integer(d),
                        Tok::Int(_) => {
                            return Err(Error::Syntax { pos, msg: "zero denominator".into() });
                        }
                        _ => {
                            self.at -= 1;
                            return self.fail("`/` must be followed by an integer literal");
                        }
                    }
                }
                Ok(Polynomial::constant(self.vars, value))
            }
            Tok::Ident(name) => match self.vars.index_of(&name) {
                Ok(idx) => Ok(Polynomial::var(self.vars, idx)),
                Err(e) => Err(e),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if self.bump() != Tok::RParen {
                    self.at -= 1;
                    return self.fail("expected `)`");
                }
                Ok(inner)
            }
            Tok::End => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            t => Err(Error::Syntax { pos, msg: format!("unexpected token {t:?}") }),
        }
    }
}

pub(super) fn parse(src: &str, vars: &VarSet) -> Result<Polynomial> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, vars };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        Tok::Ident(_) | Tok::Int(_) | Tok::LParen => {
            p.fail("expected an operator (implicit multiplication is not allowed)")
        }
        t => {
            let msg = format!("unexpected token {t:?}");
            p.fail(msg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn vars() -> VarSet {
        VarSet::numbered(3)
    }

    #[test]
    fn precedence_and_unary_minus() {
        let v = vars();
        let a = parse("-x1^2 + 2*x2 - -3", &v).unwrap();
        assert_eq!(a.eval(&[rat(2), rat(1), rat(0)]).unwrap(), rat(1));
        let b = parse("1/2*x1 - 3/4", &v).unwrap();
        assert_eq!(b.to_string(), "1/2*x1 - 3/4");
        assert_eq!(parse("4/6", &v).unwrap().to_string(), "2/3");
    }

    #[test]
    fn errors_carry_positions() {
        let v = vars();
        assert_eq!(
            parse("2x1", &v),
            Err(Error::Syntax { pos: 2, msg: "expected an operator (implicit multiplication is not allowed)".into() })
        );
        assert!(matches!(parse("x1 + ", &v), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse("x1^x2", &v), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("x1/2", &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1/0", &v), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse("(x1", &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x1 $ 2", &v), Err(Error::Syntax { pos: 4, .. })));
        assert_eq!(parse("y + 1", &v), Err(Error::UnknownVariable("y".into())));
    }
}
