//! Text grammar for rational polynomials.
//!
//! terms joined by `+` / `-`; term = [rational][*]monomial-product;
//! rational = integer or integer/integer; monomial = var[^positive-integer];
//! whitespace insignificant. Variable names are declared by the caller and
//! fix the variable order.

use super::{Monomial, RationalPolynomial};
use crate::error::{Error, Result};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<UBig> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse {
                position: start,
                message: "expected an integer".into(),
            });
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        digits.parse().map_err(|_| Error::Parse {
            position: start,
            message: "integer out of range".into(),
        })
    }

    fn identifier(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.text.len() {
            return None;
        }
        let c = self.text[self.pos];
        if !(c.is_ascii_alphabetic() || c == b'_') {
            return None;
        }
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Some((
            start,
            std::str::from_utf8(&self.text[start..self.pos]).unwrap(),
        ))
    }
}

/// Parse `text` over the ordered variable list.
pub fn parse_poly(text: &str, variables: &[&str]) -> Result<RationalPolynomial> {
    let nvars = variables.len();
    let mut cur = Cursor::new(text);
    let mut poly = RationalPolynomial::zero(nvars);

    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.pos >= cur.text.len() {
            if first {
                return Err(Error::Parse {
                    position: cur.pos,
                    message: "empty input".into(),
                });
            }
            break;
        }
        // sign joiner (optional for the leading term)
        let mut sign = 1i64;
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
            }
            Some(b'-') => {
                cur.bump();
                sign = -1;
            }
            _ if first => {}
            Some(c) => {
                return Err(Error::Parse {
                    position: cur.pos,
                    message: format!("expected `+` or `-`, found `{}`", c as char),
                });
            }
            None => break,
        }
        first = false;

        let (coeff, mono) = parse_term(&mut cur, variables)?;
        let coeff = if sign < 0 { -coeff } else { coeff };
        poly.add_term(Monomial(mono), coeff);
    }
    Ok(poly)
}

fn parse_term(cur: &mut Cursor, variables: &[&str]) -> Result<(RBig, Vec<u32>)> {
    let nvars = variables.len();
    let mut exps = vec![0u32; nvars];

    let mut coeff = RBig::ONE;
    let mut saw_number = false;
    if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        let num = cur.integer()?;
        let den = if cur.eat(b'/') {
            let pos = cur.pos;
            let d = cur.integer()?;
            if d == UBig::ZERO {
                return Err(Error::Parse {
                    position: pos,
                    message: "zero denominator".into(),
                });
            }
            d
        } else {
            UBig::ONE
        };
        coeff = RBig::from_parts(IBig::from(num), den);
        saw_number = true;
        // optional `*` between coefficient and monomials
        if cur.peek() == Some(b'*') {
            cur.bump();
            parse_monomials(cur, variables, &mut exps, true)?;
            return Ok((coeff, exps));
        }
    }

    let saw_vars = parse_monomials(cur, variables, &mut exps, false)?;
    if !saw_number && !saw_vars {
        return Err(Error::Parse {
            position: cur.pos,
            message: "expected a coefficient or a variable".into(),
        });
    }
    Ok((coeff, exps))
}

/// Parse `var[^k] (* var[^k])*`; returns whether any factor was consumed.
fn parse_monomials(
    cur: &mut Cursor,
    variables: &[&str],
    exps: &mut [u32],
    required: bool,
) -> Result<bool> {
    let mut any = false;
    loop {
        let save = cur.pos;
        let ident = cur.identifier();
        let (pos, name) = match ident {
            Some(x) => x,
            None => {
                if !any && required {
                    return Err(Error::Parse {
                        position: cur.pos,
                        message: "expected a variable".into(),
                    });
                }
                cur.pos = save;
                break;
            }
        };
        let idx =
            variables
                .iter()
                .position(|v| *v == name)
                .ok_or_else(|| Error::UnknownVariable {
                    name: name.to_string(),
                    position: pos,
                })?;
        let mut exp = 1u32;
        if cur.eat(b'^') {
            let pos = cur.pos;
            let e = cur.integer()?;
            let e = u32::try_from(&e).map_err(|_| Error::Parse {
                position: pos,
                message: "exponent out of range".into(),
            })?;
            if e == 0 {
                return Err(Error::Parse {
                    position: pos,
                    message: "exponent must be a positive integer".into(),
                });
            }
            exp = e;
        }
        exps[idx] += exp;
        any = true;
        if cur.peek() == Some(b'*') {
            cur.bump();
            // after `*` a variable is mandatory
            continue;
        }
        break;
    }
    Ok(any)
}
