//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar over `+ - * ^ ( )` with integer coefficients and named
//! variables. Negative exponents are written `x^-2`. Multiplication is
//! always explicit.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::LaurentRat;
use crate::error::{Error, Result};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, start));
        }
        let c = self.src[self.pos] as char;
        let tok = match c {
            '+' => {
                self.pos += 1;
                Tok::Plus
            }
            '-' => {
                self.pos += 1;
                Tok::Minus
            }
            '*' => {
                self.pos += 1;
                Tok::Star
            }
            '^' => {
                self.pos += 1;
                Tok::Caret
            }
            '(' => {
                self.pos += 1;
                Tok::LParen
            }
            ')' => {
                self.pos += 1;
                Tok::RParen
            }
            '0'..='9' => {
                let mut end = self.pos;
                while end < self.src.len() && (self.src[end] as char).is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                Tok::Int(text.parse().unwrap())
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = self.pos;
                while end < self.src.len() {
                    let ch = self.src[end] as char;
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        end += 1;
                    } else {
                        break;
                    }
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                Tok::Ident(text)
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    look: (Tok, usize),
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, vars: &'a [String]) -> Result<Self> {
        let mut lexer = Lexer::new(src);
        let look = lexer.next()?;
        Ok(Parser { lexer, look, vars })
    }

    fn advance(&mut self) -> Result<()> {
        self.look = self.lexer.next()?;
        Ok(())
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.look.0 == t {
            self.advance()
        } else {
            Err(Error::Parse {
                pos: self.look.1,
                msg: format!("expected {t:?}, found {:?}", self.look.0),
            })
        }
    }

    // expr := ['-'] term  { ('+'|'-') term }
    fn expr(&mut self) -> Result<LaurentRat> {
        let n = self.vars.len();
        let mut acc;
        match self.look.0 {
            Tok::Minus => {
                self.advance()?;
                acc = self.term()?.neg();
            }
            _ => acc = self.term()?,
        }
        loop {
            match self.look.0 {
                Tok::Plus => {
                    self.advance()?;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.advance()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        debug_assert_eq!(acc.nvars(), n);
        Ok(acc)
    }

    // term := power { '*' power }
    fn term(&mut self) -> Result<LaurentRat> {
        let mut acc = self.power()?;
        while self.look.0 == Tok::Star {
            self.advance()?;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    // power := atom [ '^' ['-'] int ]
    fn power(&mut self) -> Result<LaurentRat> {
        let base = self.atom()?;
        if self.look.0 != Tok::Caret {
            return Ok(base);
        }
        self.advance()?;
        let mut sign = 1i64;
        if self.look.0 == Tok::Minus {
            sign = -1;
            self.advance()?;
        }
        let (tok, pos) = self.look.clone();
        let e = match tok {
            Tok::Int(v) => {
                self.advance()?;
                i64::try_from(v).map_err(|_| Error::Parse {
                    pos,
                    msg: "exponent out of range".into(),
                })?
            }
            other => {
                return Err(Error::Parse { pos, msg: format!("expected exponent, found {other:?}") })
            }
        };
        let e = sign * e;
        if e >= 0 {
            let mut acc = LaurentRat::constant(self.vars.len(), BigRational::from_integer(1.into()));
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            Ok(acc)
        } else {
            // negative powers only make sense for monomials
            if base.num_terms() != 1 {
                return Err(Error::Parse {
                    pos,
                    msg: "negative exponent on a non-monomial".into(),
                });
            }
            let (exp, c) = base.terms().next().map(|(e, c)| (e.0.clone(), c.clone())).unwrap();
            let mut out_exp = vec![0i64; self.vars.len()];
            for (j, k) in exp.iter().enumerate() {
                out_exp[j] = k * e;
            }
            let coeff = super::rat_powi(&c, e);
            Ok(LaurentRat::monomial(self.vars.len(), out_exp, coeff))
        }
    }

    fn atom(&mut self) -> Result<LaurentRat> {
        let (tok, pos) = self.look.clone();
        match tok {
            Tok::Int(v) => {
                self.advance()?;
                Ok(LaurentRat::constant(self.vars.len(), BigRational::from_integer(v)))
            }
            Tok::Ident(name) => {
                self.advance()?;
                match self.vars.iter().position(|v| *v == name) {
                    Some(j) => {
                        let mut exp = vec![0i64; self.vars.len()];
                        exp[j] = 1;
                        Ok(LaurentRat::monomial(self.vars.len(), exp, BigRational::from_integer(1.into())))
                    }
                    None => Err(Error::UnknownVariable { name, pos }),
                }
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(Error::Parse { pos, msg: format!("unexpected token {other:?}") }),
        }
    }
}

/// Parse an expression over the named variables into canonical form.
pub fn parse(text: &str, vars: &[String]) -> Result<LaurentRat> {
    let mut p = Parser::new(text, vars)?;
    let poly = p.expr()?;
    match p.look.0 {
        Tok::End => Ok(poly),
        ref other => Err(Error::Parse {
            pos: p.look.1,
            msg: format!("trailing input: {other:?}"),
        }),
    }
}
