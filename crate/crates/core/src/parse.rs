//! Text form of polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := var ('^' int)?
//! coeff  := int ('/' posint)?
//! var    := 'z' posint
//! ```
//!
//! Whitespace is ignored and a leading sign is accepted. Negative exponents
//! are only legal in Laurent rings.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly, RingKind};
use crate::scalar::{format_scalar, Scalar};

pub fn parse_poly(text: &str, kind: RingKind, n: usize) -> Result<MultiPoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, kind, n };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    kind: RingKind,
    n: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut terms = Vec::new();
        let mut negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let (mono, c) = self.term()?;
            terms.push((mono, if negate { -c } else { c }));
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        MultiPoly::from_terms(self.kind, self.n, terms)
    }

    fn term(&mut self) -> Result<(Monomial, Scalar)> {
        let mut exps = vec![0i32; self.n];
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let c = self.coeff()?;
                if !self.eat(b'*') {
                    return Ok((Monomial::from_exponents(&exps), c));
                }
                c
            }
            Some(b'z') => Scalar::one(),
            Some(_) => return Err(self.err("expected a coefficient or variable")),
            None => return Err(self.err("unexpected end of input")),
        };
        loop {
            self.factor(&mut exps)?;
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((Monomial::from_exponents(&exps), coeff))
    }

    fn factor(&mut self, exps: &mut [i32]) -> Result<()> {
        if !self.eat(b'z') {
            return Err(self.err("expected a variable z<k>"));
        }
        let start = self.pos;
        let idx = self.unsigned()?;
        let idx: usize = idx
            .try_into()
            .map_err(|_| Error::Parse { pos: start, msg: "variable index too large".into() })?;
        if idx == 0 || idx > self.n {
            return Err(Error::Parse { pos: start, msg: format!("variable z{idx} out of range for arity {}", self.n) });
        }
        let mut e: i64 = 1;
        if self.eat(b'^') {
            let epos = self.pos;
            let neg = self.eat(b'-');
            let v: i64 = self
                .unsigned()?
                .try_into()
                .map_err(|_| Error::Parse { pos: epos, msg: "exponent too large".into() })?;
            e = if neg { -v } else { v };
            if e < 0 && self.kind == RingKind::Polynomial {
                return Err(Error::NegativeExponent { pos: epos });
            }
        }
        let slot = &mut exps[idx - 1];
        *slot = i32::try_from(*slot as i64 + e).map_err(|_| self.err("exponent too large"))?;
        Ok(())
    }

    fn unsigned(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("validated digits"))
    }

    fn coeff(&mut self) -> Result<Scalar> {
        let num = self.unsigned()?;
        if self.eat(b'/') {
            let dpos = self.pos;
            let den = self.unsigned()?;
            if den.is_zero() {
                return Err(Error::Parse { pos: dpos, msg: "zero denominator".into() });
            }
            Ok(Scalar::new(num, den))
        } else {
            Ok(Scalar::from_integer(num))
        }
    }
}

/// Prints terms in descending graded-lex order, e.g. `z1^2 - 3/2*z2`.
pub fn format_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (mono, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        let mono_txt = format_monomial(mono);
        if mono_txt.is_empty() {
            out.push_str(&format_scalar(&abs));
        } else if abs.is_one() {
            out.push_str(&mono_txt);
        } else {
            out.push_str(&format_scalar(&abs));
            out.push('*');
            out.push_str(&mono_txt);
        }
    }
    out
}

pub fn format_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("z{}", i + 1)),
            _ => parts.push(format!("z{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    #[test]
    fn reads_two_terms() {
        let p = parse_poly("z1^2 - 3/2*z2", RingKind::Polynomial, 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Monomial::from_exponents(&[0, 1])), frac(-3, 2));
        assert_eq!(format_poly(&p), "z1^2 - 3/2*z2");
    }

    #[test]
    fn negative_exponent_depends_on_ring() {
        let p = parse_poly("z1^-1", RingKind::Laurent, 2).unwrap();
        assert_eq!(p.leading_term().unwrap().0.exponents(), &[-1, 0]);
        assert!(matches!(parse_poly("z1^-1", RingKind::Polynomial, 2), Err(Error::NegativeExponent { .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_poly("z1 + * z2", RingKind::Polynomial, 2) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("z3", RingKind::Polynomial, 2), Err(Error::Parse { pos: 1, .. })));
        assert!(parse_poly("", RingKind::Polynomial, 2).is_err());
        assert!(parse_poly("z1 z2", RingKind::Polynomial, 2).is_err());
        assert!(parse_poly("1/0*z1", RingKind::Polynomial, 2).is_err());
    }

    #[test]
    fn repeated_variables_and_constants() {
        let p = parse_poly(" -2*z1*z1^2 + 7 - 7 ", RingKind::Polynomial, 1).unwrap();
        assert_eq!(format_poly(&p), "-2*z1^3");
        assert_eq!(format_poly(&parse_poly("0", RingKind::Laurent, 3).unwrap()), "0");
    }
}
