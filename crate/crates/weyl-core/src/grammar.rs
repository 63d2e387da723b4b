//! Text grammar for elements: sums of products of `c`, `x<i>^a`, `d<i>^b`,
//! and `E` (the Euler operator of the ambient algebra).  Whitespace is
//! insignificant and `*` between factors is optional.

use alloc::format;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::weyl::{Rat, WeylElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Num(BigInt),
    Var(u8, usize),
    Euler,
    End,
}

struct Lexer<'a> {
    b: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { b: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.b.len() && self.b[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Result<(usize, Tok), ParseError> {
        let save = self.pos;
        let t = self.next()?;
        self.pos = save;
        Ok(t)
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.b.len() {
            return Ok((start, Tok::End));
        }
        let c = self.b[self.pos];
        match c {
            b'+' => {
                self.pos += 1;
                Ok((start, Tok::Plus))
            }
            b'-' => {
                self.pos += 1;
                Ok((start, Tok::Minus))
            }
            b'*' => {
                self.pos += 1;
                Ok((start, Tok::Star))
            }
            b'^' => {
                self.pos += 1;
                Ok((start, Tok::Caret))
            }
            b'/' => {
                self.pos += 1;
                Ok((start, Tok::Slash))
            }
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.b.len() && self.b[end].is_ascii_digit() {
                    end += 1;
                }
                let s = core::str::from_utf8(&self.b[self.pos..end]).unwrap();
                self.pos = end;
                Ok((start, Tok::Num(s.parse::<BigInt>().unwrap())))
            }
            b'x' | b'd' => {
                let mut end = self.pos + 1;
                while end < self.b.len() && self.b[end].is_ascii_digit() {
                    end += 1;
                }
                if end == self.pos + 1 {
                    return Err(ParseError {
                        pos: start,
                        msg: format!("expected variable index after '{}'", c as char),
                    });
                }
                let s = core::str::from_utf8(&self.b[self.pos + 1..end]).unwrap();
                let idx: usize = s.parse().map_err(|_| ParseError {
                    pos: start,
                    msg: String::from("variable index out of range"),
                })?;
                self.pos = end;
                Ok((start, Tok::Var(c, idx)))
            }
            b'E' => {
                self.pos += 1;
                Ok((start, Tok::Euler))
            }
            other => Err(ParseError {
                pos: start,
                msg: format!("unexpected character '{}'", other as char),
            }),
        }
    }
}

fn starts_factor(t: &Tok) -> bool {
    matches!(t, Tok::Num(_) | Tok::Var(_, _) | Tok::Euler)
}

struct Parser<'a> {
    lx: Lexer<'a>,
    n: usize,
}

impl<'a> Parser<'a> {
    fn parse_uint(&mut self) -> Result<u32, ParseError> {
        let (pos, t) = self.lx.next()?;
        match t {
            Tok::Num(v) => {
                use num_traits::ToPrimitive;
                v.to_u32().ok_or(ParseError {
                    pos,
                    msg: String::from("exponent too large"),
                })
            }
            _ => Err(ParseError { pos, msg: String::from("expected an exponent") }),
        }
    }

    fn parse_primary(&mut self) -> Result<WeylElement, ParseError> {
        let (pos, t) = self.lx.next()?;
        match t {
            Tok::Num(v) => {
                let (_, peeked) = self.lx.peek()?;
                if peeked == Tok::Slash {
                    self.lx.next()?;
                    let (dpos, dt) = self.lx.next()?;
                    match dt {
                        Tok::Num(den) => {
                            if den.is_zero() {
                                return Err(ParseError {
                                    pos: dpos,
                                    msg: String::from("zero denominator"),
                                });
                            }
                            Ok(WeylElement::scalar(self.n, Rat::new(v, den)))
                        }
                        _ => Err(ParseError {
                            pos: dpos,
                            msg: String::from("expected a denominator"),
                        }),
                    }
                } else {
                    Ok(WeylElement::scalar(self.n, Rat::from_integer(v)))
                }
            }
            Tok::Var(kind, idx) => {
                if idx == 0 || idx > self.n {
                    return Err(ParseError {
                        pos,
                        msg: format!(
                            "unknown variable index {}{} (ambient n = {})",
                            kind as char, idx, self.n
                        ),
                    });
                }
                Ok(if kind == b'x' {
                    WeylElement::var_x(self.n, idx - 1)
                } else {
                    WeylElement::var_d(self.n, idx - 1)
                })
            }
            Tok::Euler => Ok(WeylElement::euler(self.n)),
            _ => Err(ParseError { pos, msg: String::from("expected a factor") }),
        }
    }

    fn parse_factor(&mut self) -> Result<WeylElement, ParseError> {
        let base = self.parse_primary()?;
        let (_, peeked) = self.lx.peek()?;
        if peeked == Tok::Caret {
            self.lx.next()?;
            let e = self.parse_uint()?;
            Ok(base.power(e))
        } else {
            Ok(base)
        }
    }

    fn parse_term(&mut self) -> Result<WeylElement, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            let (_, peeked) = self.lx.peek()?;
            if peeked == Tok::Star {
                self.lx.next()?;
                let f = self.parse_factor()?;
                acc = acc.mul(&f);
            } else if starts_factor(&peeked) {
                let f = self.parse_factor()?;
                acc = acc.mul(&f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_expr(&mut self) -> Result<WeylElement, ParseError> {
        let mut sign_neg = false;
        let (_, first) = self.lx.peek()?;
        if first == Tok::Plus || first == Tok::Minus {
            self.lx.next()?;
            sign_neg = first == Tok::Minus;
        }
        let t = self.parse_term()?;
        let mut acc = if sign_neg { t.neg() } else { t };
        loop {
            let (pos, t) = self.lx.next()?;
            match t {
                Tok::Plus => {
                    let rhs = self.parse_term()?;
                    acc = acc.add(&rhs);
                }
                Tok::Minus => {
                    let rhs = self.parse_term()?;
                    acc = acc.sub(&rhs);
                }
                Tok::End => return Ok(acc),
                _ => {
                    return Err(ParseError {
                        pos,
                        msg: String::from("expected '+', '-', or end of input"),
                    })
                }
            }
        }
    }
}

/// Parse an element in the ambient algebra A_n.
pub fn parse_element(n: usize, input: &str) -> Result<WeylElement, ParseError> {
    let mut p = Parser { lx: Lexer::new(input), n };
    p.parse_expr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    use crate::weyl::Mono;

    #[test]
    fn basic_forms() {
        let e = parse_element(2, "x1*d1 + x2*d2").unwrap();
        assert_eq!(e, WeylElement::euler(2));
        let e2 = parse_element(2, "E").unwrap();
        assert_eq!(e2, WeylElement::euler(2));
        let f = parse_element(1, "3/2 x1^2").unwrap();
        assert_eq!(f.to_string(), "3/2*x1^2");
        let g = parse_element(1, "-x1 + 1").unwrap();
        assert_eq!(g.to_string(), "-x1 + 1");
        let h = parse_element(1, "d1x1").unwrap();
        assert_eq!(h.to_string(), "x1*d1 + 1");
    }

    #[test]
    fn juxtaposition_and_whitespace() {
        let a = parse_element(2, "  2 x1 x2 ^ 2 d1  ").unwrap();
        let b = parse_element(2, "2*x1*x2^2*d1").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_position() {
        let err = parse_element(1, "x1 + ?").unwrap_err();
        assert_eq!(err.pos, 5);
        let err = parse_element(2, "x3").unwrap_err();
        assert!(err.msg.contains("unknown variable index"));
        let err = parse_element(1, "1/0").unwrap_err();
        assert!(err.msg.contains("zero denominator"));
        assert!(parse_element(1, "x").is_err());
        assert!(parse_element(1, "x1 *").is_err());
    }

    #[test]
    fn euler_expands_per_ambient() {
        for n in 1..=3 {
            assert_eq!(parse_element(n, "E").unwrap(), WeylElement::euler(n));
        }
        let sq = parse_element(1, "E^2").unwrap();
        assert_eq!(sq, WeylElement::euler(1).power(2));
    }

    #[test]
    fn roundtrip_on_canonical_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
        for _ in 0..80 {
            let n = 1 + (rng.next_u32() % 3) as usize;
            let t = 1 + (rng.next_u32() % 4) as usize;
            let mut e = WeylElement::zero(n);
            for _ in 0..t {
                let mono = Mono {
                    x: (0..n).map(|_| rng.next_u32() % 4).collect(),
                    d: (0..n).map(|_| rng.next_u32() % 4).collect(),
                };
                let num = (rng.next_u32() % 11) as i64 - 5;
                let den = 1 + (rng.next_u32() % 4) as i64;
                if num != 0 {
                    e.add_term(mono, Rat::new(num.into(), den.into()));
                }
            }
            let printed = e.to_string();
            let back = parse_element(n, &printed).unwrap();
            assert_eq!(back, e, "roundtrip failed for {}", printed);
        }
    }
}
