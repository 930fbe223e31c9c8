//! Text grammar for algebra elements:
//!
//!   element  := term (('+' | '-') term)*
//!   term     := (rational '*')? factor ('*' factor)*  |  rational
//!   factor   := 'T[' level ',' i ',' j ']'
//!   rational := integer ('/' positive-integer)?
//!
//! e.g. `1/2 * T[-2,1,1] * T[1,2,2] - T[3,1,2]`. Parsed elements are
//! normalized; serialization round-trips with the JSON format.

use num_traits::One;

use crate::algebra::{normal_form, AlgElement, AlgError, DualTrunc, GenId, RawElement};
use crate::rat::{parse_rational, Rational};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("parse error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("level 0 at byte {0}: T^(0) is the scalar delta, write a rational instead")]
    ZeroLevel(usize),
    #[error("index {idx} at byte {pos} outside 1..={n}")]
    IndexRange { idx: i64, pos: usize, n: u32 },
    #[error(transparent)]
    Alg(#[from] AlgError),
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ParseError::Syntax {
                pos: self.pos,
                msg: format!("expected `{}`", b as char),
            }),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        if self.pos < bytes.len() && (bytes[self.pos] == b'-' || bytes[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.text[start..self.pos].parse().map_err(|_| ParseError::Syntax {
            pos: start,
            msg: "expected an integer".into(),
        })
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        if self.pos < bytes.len() && (bytes[self.pos] == b'-' || bytes[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < bytes.len() && bytes[self.pos] == b'/' {
            self.pos += 1;
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        parse_rational(&self.text[start..self.pos])
            .map_err(|msg| ParseError::Syntax { pos: start, msg })
    }

    fn generator(&mut self, n: u32) -> Result<GenId, ParseError> {
        self.skip_ws();
        if self.peek() != Some(b'T') {
            return Err(ParseError::Syntax { pos: self.pos, msg: "expected `T[`".into() });
        }
        self.pos += 1;
        self.eat(b'[')?;
        let lev_pos = self.pos;
        let level = self.integer()?;
        if level == 0 {
            return Err(ParseError::ZeroLevel(lev_pos));
        }
        self.eat(b',')?;
        let i_pos = self.pos;
        let i = self.integer()?;
        self.eat(b',')?;
        let j_pos = self.pos;
        let j = self.integer()?;
        self.eat(b']')?;
        for (idx, pos) in [(i, i_pos), (j, j_pos)] {
            if idx < 1 || idx > n as i64 {
                return Err(ParseError::IndexRange { idx, pos, n });
            }
        }
        let level = i32::try_from(level).map_err(|_| ParseError::Syntax {
            pos: lev_pos,
            msg: "level out of range".into(),
        })?;
        Ok(GenId::new(level, i as u8, j as u8))
    }
}

/// Parse an element; `n` bounds the indices and `d` is the truncation of
/// the result.
pub fn parse_element(text: &str, n: u32, d: DualTrunc) -> Result<AlgElement, ParseError> {
    let mut cur = Cursor { text, pos: 0 };
    let mut raw: RawElement = Vec::new();
    let mut sign = Rational::one();
    let mut first = true;
    loop {
        match cur.peek() {
            None => {
                if first {
                    return Err(ParseError::Syntax { pos: cur.pos, msg: "empty expression".into() });
                }
                break;
            }
            Some(b'+') => {
                cur.pos += 1;
                sign = Rational::one();
            }
            Some(b'-') if !first => {
                cur.pos += 1;
                sign = -Rational::one();
            }
            Some(_) if first => {}
            Some(c) => {
                return Err(ParseError::Syntax {
                    pos: cur.pos,
                    msg: format!("expected `+` or `-`, found `{}`", c as char),
                })
            }
        }
        first = false;
        // term: optional coefficient, then factors
        let mut coeff = sign.clone();
        let mut word: Vec<GenId> = Vec::new();
        let mut saw_factor = false;
        match cur.peek() {
            Some(b'T') => {
                word.push(cur.generator(n)?);
                saw_factor = true;
            }
            Some(_) => {
                coeff *= cur.rational()?;
            }
            None => {
                return Err(ParseError::Syntax { pos: cur.pos, msg: "dangling sign".into() })
            }
        }
        while cur.peek() == Some(b'*') {
            cur.pos += 1;
            word.push(cur.generator(n)?);
            saw_factor = true;
        }
        let _ = saw_factor;
        raw.push((coeff, word));
        sign = Rational::one();
    }
    Ok(normal_form(raw, n, d)?)
}

/// Canonical text form of an element, grammar-compatible.
pub fn element_to_text(x: &AlgElement) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn single_generator() {
        let e = parse_element("T[1,1,2]", 2, DualTrunc::Infinite).unwrap();
        assert_eq!(e, AlgElement::generator(GenId::new(1, 1, 2), 2, DualTrunc::Infinite));
    }

    #[test]
    fn coefficient_and_product() {
        let e = parse_element("1/2 * T[-2,1,1] * T[1,2,2]", 2, DualTrunc::Finite(5)).unwrap();
        assert_eq!(e.num_terms(), 1);
        let (m, c) = e.terms().next().unwrap();
        assert_eq!(*c, rat(1, 2));
        assert_eq!(m.0, vec![GenId::new(-2, 1, 1), GenId::new(1, 2, 2)]);
    }

    #[test]
    fn sums_and_scalars() {
        let e = parse_element("3 - 2 * T[1,1,1] + T[1,1,1]", 2, DualTrunc::Infinite).unwrap();
        assert_eq!(e.constant_term(), rat_int(3));
        assert_eq!(
            e.coeff(&crate::algebra::Monomial(vec![GenId::new(1, 1, 1)])),
            rat_int(-1)
        );
    }

    #[test]
    fn error_cases() {
        assert_eq!(
            parse_element("T[0,1,1]", 2, DualTrunc::Infinite).unwrap_err(),
            ParseError::ZeroLevel(2)
        );
        assert!(matches!(
            parse_element("T[1,3,1]", 2, DualTrunc::Infinite).unwrap_err(),
            ParseError::IndexRange { idx: 3, .. }
        ));
        assert!(matches!(
            parse_element("T[1,1", 2, DualTrunc::Infinite).unwrap_err(),
            ParseError::Syntax { .. }
        ));
        assert!(matches!(
            parse_element("", 2, DualTrunc::Infinite).unwrap_err(),
            ParseError::Syntax { .. }
        ));
    }

    #[test]
    fn round_trip_with_display() {
        for text in ["T[1,1,2]", "1/2 * T[-2,1,1] * T[1,2,2]", "3 + T[2,2,1]"] {
            let e = parse_element(text, 2, DualTrunc::Finite(6)).unwrap();
            let printed = element_to_text(&e);
            let back = parse_element(&printed, 2, DualTrunc::Finite(6)).unwrap();
            assert_eq!(back, e, "{text} -> {printed}");
        }
    }
}
