//! Parser for the textual scalar grammar:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (['*'|'/'] power)*        (juxtaposition multiplies)
//! power  := atom ['^' exponent]
//! atom   := integer | 'q' | 's' | '(' expr ')'
//! exponent := integer | '{' ['-'] integer ['/' '2'] '}'
//! ```
//! Half-integer exponents are only allowed on `q`.

use num_rational::BigRational;

use super::{Scalar, ScalarError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Q,
    S,
    Caret,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

fn lex(input: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' => {}
            '0'..='9' => {
                let st = i;
                while i + 1 < cs.len() && cs[i + 1].is_ascii_digit() {
                    i += 1;
                }
                out.push(Tok::Num(cs[st..=i].iter().collect()));
            }
            'q' => out.push(Tok::Q),
            's' => out.push(Tok::S),
            '^' => out.push(Tok::Caret),
            '{' => out.push(Tok::LBrace),
            '}' => out.push(Tok::RBrace),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '+' => out.push(Tok::Plus),
            '-' | '\u{2212}' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            _ => return Err(format!("unexpected character `{c}`")),
        }
        i += 1;
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

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), String> {
        match self.next() {
            Some(ref x) if *x == t => Ok(()),
            other => Err(format!("expected {t:?}, found {other:?}")),
        }
    }

    fn expr(&mut self) -> Result<Scalar, String> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.next();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc += self.term()?;
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, String> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc * self.power()?;
                }
                Some(Tok::Slash) => {
                    self.next();
                    let d = self.power()?;
                    acc = acc.checked_div(&d).map_err(|e| e.to_string())?;
                }
                Some(Tok::Num(_)) | Some(Tok::Q) | Some(Tok::S) | Some(Tok::LParen) => {
                    acc = acc * self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// Exponent as (numerator, denominator in {1, 2}).
    fn exponent(&mut self) -> Result<(i64, i64), String> {
        match self.next() {
            Some(Tok::Num(n)) => Ok((n.parse().map_err(|_| "exponent overflow")?, 1)),
            Some(Tok::Minus) => match self.next() {
                Some(Tok::Num(n)) => Ok((-n.parse::<i64>().map_err(|_| "exponent overflow")?, 1)),
                t => Err(format!("bad exponent token {t:?}")),
            },
            Some(Tok::LBrace) => {
                let neg = if self.peek() == Some(&Tok::Minus) {
                    self.next();
                    true
                } else {
                    false
                };
                let n: i64 = match self.next() {
                    Some(Tok::Num(n)) => n.parse().map_err(|_| "exponent overflow")?,
                    t => return Err(format!("bad exponent token {t:?}")),
                };
                let mut d = 1;
                if self.peek() == Some(&Tok::Slash) {
                    self.next();
                    match self.next() {
                        Some(Tok::Num(x)) if x == "2" => d = 2,
                        Some(Tok::Num(x)) if x == "1" => d = 1,
                        t => return Err(format!("exponent denominator must be 2, found {t:?}")),
                    }
                }
                self.expect(Tok::RBrace)?;
                Ok((if neg { -n } else { n }, d))
            }
            t => Err(format!("bad exponent token {t:?}")),
        }
    }

    fn power(&mut self) -> Result<Scalar, String> {
        let (base, s_units) = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.next();
        let (n, d) = self.exponent()?;
        match s_units {
            // q^{n/d} = s^{2n/d}; s^{n/d} requires d = 1
            Some(u) => {
                if (u * n) % d != 0 {
                    return Err("fractional power of s".into());
                }
                Ok(Scalar::s_pow(u * n / d))
            }
            None => {
                if d != 1 {
                    return Err("fractional exponents only allowed on q".into());
                }
                if n < 0 && base.is_zero() {
                    return Err("negative power of zero".into());
                }
                Ok(base.pow(n))
            }
        }
    }

    /// Returns the atom, and for q/s the number of s-units it represents.
    fn atom(&mut self) -> Result<(Scalar, Option<i64>), String> {
        match self.next() {
            Some(Tok::Num(n)) => {
                let v: num_bigint::BigInt = n.parse().map_err(|_| "bad integer")?;
                Ok((Scalar::from_bigrational(BigRational::from_integer(v)), None))
            }
            Some(Tok::Q) => Ok((Scalar::s_pow(2), Some(2))),
            Some(Tok::S) => Ok((Scalar::s_pow(1), Some(1))),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok((v, None))
            }
            t => Err(format!("unexpected token {t:?}")),
        }
    }
}

pub(super) fn parse_scalar(input: &str) -> Result<Scalar, ScalarError> {
    let err = |msg: String| ScalarError::Parse { input: input.to_string(), msg };
    let toks = lex(input).map_err(err)?;
    if toks.is_empty() {
        return Err(err("empty input".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr().map_err(err)?;
    if p.pos != p.toks.len() {
        return Err(err(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_forms() {
        let q = Scalar::q();
        assert_eq!(parse_scalar("q").unwrap(), q);
        assert_eq!(parse_scalar("q^2").unwrap(), &q * &q);
        assert_eq!(parse_scalar("q^{-1}").unwrap(), q.inv().unwrap());
        assert_eq!(parse_scalar("q^{1/2}*q^{1/2}").unwrap(), q);
        assert_eq!(parse_scalar("2q - 3").unwrap(), Scalar::int(2) * &q - Scalar::int(3));
        assert_eq!(parse_scalar("(q - q^{-1})^{-1}").unwrap(), (&q - q.inv().unwrap()).inv().unwrap());
        assert!(parse_scalar("(1+q)^{1/2}").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("q^").is_err());
    }
}
