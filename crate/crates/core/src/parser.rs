//! Textual polynomial expressions: parsing and canonical printing.
//!
//! Grammar (ASCII bytes, whitespace ignored between tokens, multiplication
//! always explicit):
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') ['-'] term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' natural)?
//! base     := rational | 'x' | '(' expr ')'
//!           | 'ff(' expr ',' natural ')' | 'C(' expr ',' natural ')'
//! rational := natural ('/' natural)?
//! ```
//!
//! `ff(e, k)` is the falling factorial `e·(e−1)···(e−k+1)` and `C(e, k)` is
//! `ff(e, k)/k!`. Parsing is total: every input either yields a polynomial
//! or a structured error carrying the byte offset of the failure, and a
//! degree cap ([`DEGREE_LIMIT`]) rejects exponents that would make the
//! dense representation blow up. [`print_poly`] emits the canonical form
//! (descending powers, explicit `*`), and `parse_poly(print_poly(p)) == p`
//! for every polynomial.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::polynomial::{Poly, Polynomial};

/// Largest degree (and largest literal exponent) the parser accepts.
pub const DEGREE_LIMIT: usize = 1024;

// ---- Errors ----

/// The input deviated from the grammar at a specific byte.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    /// Byte offset of the offending position (equals the input length when
    /// the input ended too early).
    pub offset: usize,
    /// What the parser would have accepted at that position.
    pub expected: &'static [&'static str],
    /// Human-readable description of what was actually there.
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {}: expected {}, found {}",
            self.offset,
            self.expected.join(", "),
            self.found
        )
    }
}

/// Any way [`parse_poly`] can fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    /// Input does not match the grammar.
    Syntax(SyntaxError),
    /// A rational literal had denominator 0.
    DivisionByZero { offset: usize },
    /// An exponent would push some intermediate past [`DEGREE_LIMIT`].
    DegreeLimit { offset: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax(e) => e.fmt(f),
            ParseError::DivisionByZero { offset } => {
                write!(f, "division by zero at offset {offset}: denominators must be positive")
            }
            ParseError::DegreeLimit { offset } => write!(
                f,
                "degree limit exceeded at offset {offset}: exponents are capped so that \
                 degrees stay at or below {DEGREE_LIMIT}"
            ),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<SyntaxError> for ParseError {
    fn from(e: SyntaxError) -> Self {
        ParseError::Syntax(e)
    }
}

// ---- Parsing ----

/// Parses an expression in the module grammar into a polynomial.
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p
            .syntax_error(&["'+'", "'-'", "'*'", "'^'", "end of input"])
            .into());
    }
    Ok(poly)
}

const BASE_EXPECTED: &[&str] = &["a rational number", "'x'", "'('", "'ff('", "'C('"];

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Error at the current position; callers position `pos` first.
    fn syntax_error(&self, expected: &'static [&'static str]) -> SyntaxError {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(b) if (0x20..0x7f).contains(&b) => format!("'{}'", b as char),
            Some(b) => format!("byte 0x{b:02X}"),
        };
        SyntaxError { offset: self.pos, expected, found }
    }

    fn expect_byte(&mut self, byte: u8, expected: &'static [&'static str]) -> Result<(), SyntaxError> {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax_error(expected))
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.signed_term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.signed_term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.signed_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// One optional unary minus, then a product of factors.
    fn signed_term(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            Ok(-self.term()?)
        } else {
            self.term()
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() != Some(b'*') {
                return Ok(acc);
            }
            let star = self.pos;
            self.pos += 1;
            let rhs = self.factor()?;
            if acc.degree().unwrap_or(0) + rhs.degree().unwrap_or(0) > DEGREE_LIMIT {
                return Err(ParseError::DegreeLimit { offset: star });
            }
            acc = acc * rhs;
        }
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let (exp, exp_offset) = self.natural()?;
        let exp = self.checked_scale(&base, &exp, exp_offset)?;
        Ok(base.pow(exp))
    }

    /// Checks `deg(base)·k ≤ DEGREE_LIMIT` (and `k` itself against the cap,
    /// so constant bases cannot smuggle in astronomical powers either).
    fn checked_scale(&self, base: &Poly, k: &BigUint, offset: usize) -> Result<usize, ParseError> {
        let limit = ParseError::DegreeLimit { offset };
        let Some(k) = k.to_usize() else { return Err(limit) };
        if k > DEGREE_LIMIT || base.degree().unwrap_or(0) * k > DEGREE_LIMIT {
            return Err(limit);
        }
        Ok(k)
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'0'..=b'9') => self.rational(),
            Some(b'x') => {
                self.pos += 1;
                Ok(Poly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_byte(b')', &["')'"])?;
                Ok(inner)
            }
            Some(b'f') => {
                self.keyword(b"ff(")?;
                let (inner, k) = self.call_arguments()?;
                Ok(Poly::falling_factorial(k).compose(&inner))
            }
            Some(b'C') => {
                self.keyword(b"C(")?;
                let (inner, k) = self.call_arguments()?;
                Ok(Poly::binomial(k).compose(&inner))
            }
            _ => Err(self.syntax_error(BASE_EXPECTED).into()),
        }
    }

    /// A keyword is a single token: no whitespace before its parenthesis.
    fn keyword(&mut self, word: &'static [u8]) -> Result<(), SyntaxError> {
        if self.bytes[self.pos..].starts_with(word) {
            self.pos += word.len();
            Ok(())
        } else {
            Err(self.syntax_error(BASE_EXPECTED))
        }
    }

    /// `expr ',' natural ')'` after a keyword's opening parenthesis.
    fn call_arguments(&mut self) -> Result<(Poly, usize), ParseError> {
        let inner = self.expr()?;
        self.expect_byte(b',', &["','"])?;
        let (k, k_offset) = self.natural()?;
        self.expect_byte(b')', &["')'"])?;
        let k = self.checked_scale(&inner, &k, k_offset)?;
        Ok((inner, k))
    }

    /// Decimal digit run; returns the value and its starting offset.
    fn natural(&mut self) -> Result<(BigUint, usize), SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax_error(&["a natural number"]));
        }
        let value = BigUint::parse_bytes(&self.bytes[start..self.pos], 10)
            .expect("digit runs parse as naturals");
        Ok((value, start))
    }

    fn rational(&mut self) -> Result<Poly, ParseError> {
        let (numer, _) = self.natural()?;
        self.skip_ws();
        if self.peek() != Some(b'/') {
            return Ok(Poly::constant(BigRational::from_integer(numer.into())));
        }
        self.pos += 1;
        let (denom, denom_offset) = self.natural()?;
        if denom.is_zero() {
            return Err(ParseError::DivisionByZero { offset: denom_offset });
        }
        Ok(Poly::constant(BigRational::new(numer.into(), denom.into())))
    }
}

// ---- Printing ----

/// Canonical text: descending powers, explicit `*`, unit coefficients
/// elided, rationals as `p/q`. [`parse_poly`] maps the output back to `p`.
pub fn print_poly(p: &Poly) -> String {
    let Some(degree) = p.degree() else {
        return "0".to_string();
    };
    let mut out = String::new();
    for k in (0..=degree).rev() {
        let c = p.coeff(k);
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let magnitude = c.abs();
        match k {
            0 => out.push_str(&magnitude.to_string()),
            _ => {
                if !magnitude.is_one() {
                    out.push_str(&magnitude.to_string());
                    out.push('*');
                }
                out.push('x');
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
    }
    out
}

impl fmt::Display for Polynomial<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn parsed(text: &str) -> Poly {
        parse_poly(text).unwrap_or_else(|e| panic!("{text:?} should parse: {e}"))
    }

    #[test]
    fn parses_integer_quadratic() {
        assert_eq!(parsed("2*x^2 - 3*x + 1"), Polynomial::from_int_coeffs(&[1, -3, 2]));
    }

    #[test]
    fn parses_falling_factorial_keyword() {
        assert_eq!(parsed("ff(x,3)"), Polynomial::from_int_coeffs(&[0, 2, -3, 1]));
    }

    #[test]
    fn parses_binomial_keyword() {
        let expected = Polynomial::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)]);
        assert_eq!(parsed("C(x,2)"), expected);
    }

    #[test]
    fn parses_rational_coefficients() {
        let expected = Polynomial::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)]);
        assert_eq!(parsed("1/2*x^2 - 1/2*x"), expected);
    }

    #[test]
    fn parses_nested_composition() {
        // ff(x^2, 2) = x^2·(x^2 − 1).
        assert_eq!(parsed("ff(x^2,2)"), Polynomial::from_int_coeffs(&[0, 0, -1, 0, 1]));
        assert_eq!(parsed("(x - 1)^2"), Polynomial::from_int_coeffs(&[1, -2, 1]));
    }

    #[test]
    fn unary_minus_binds_to_whole_terms() {
        assert_eq!(parsed("-x^2 + 3"), Polynomial::from_int_coeffs(&[3, 0, -1]));
        assert_eq!(parsed("2 - -3"), Polynomial::from_int_coeffs(&[5]));
        assert_eq!(parsed("-2*x"), Polynomial::from_int_coeffs(&[0, -2]));
    }

    #[test]
    fn whitespace_is_insignificant_between_tokens() {
        assert_eq!(parsed(" 2 * x ^ 2 - 1 "), Polynomial::from_int_coeffs(&[-1, 0, 2]));
    }

    #[test]
    fn dangling_operator_reports_end_offset() {
        match parse_poly("x +") {
            Err(ParseError::Syntax(e)) => {
                assert_eq!(e.offset, 3);
                assert_eq!(e.found, "end of input");
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        match parse_poly("2x") {
            Err(ParseError::Syntax(e)) => assert_eq!(e.offset, 1),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_rejected_at_offset_zero() {
        match parse_poly("") {
            Err(ParseError::Syntax(e)) => {
                assert_eq!(e.offset, 0);
                assert_eq!(e.expected, BASE_EXPECTED);
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn zero_denominator_is_its_own_error() {
        assert_eq!(parse_poly("1/0*x"), Err(ParseError::DivisionByZero { offset: 2 }));
    }

    #[test]
    fn keywords_take_no_interior_whitespace() {
        match parse_poly("ff (x,2)") {
            Err(ParseError::Syntax(e)) => assert_eq!(e.offset, 0),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn degree_cap_rejects_blowups_and_admits_the_limit() {
        assert_eq!(parse_poly("x^1025"), Err(ParseError::DegreeLimit { offset: 2 }));
        assert_eq!(parse_poly("2^99999999999999999999"), Err(ParseError::DegreeLimit { offset: 2 }));
        assert_eq!(parse_poly("ff(x^2,513)"), Err(ParseError::DegreeLimit { offset: 7 }));
        assert!(parse_poly("(x^32)^32").is_ok());
        assert_eq!(
            parse_poly("x^600 * x^600"),
            Err(ParseError::DegreeLimit { offset: 6 })
        );
    }

    #[test]
    fn prints_descending_canonical_form() {
        assert_eq!(print_poly(&Polynomial::from_int_coeffs(&[1, -3, 2])), "2*x^2 - 3*x + 1");
        assert_eq!(
            print_poly(&Polynomial::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)])),
            "1/2*x^2 - 1/2*x"
        );
        assert_eq!(print_poly(&Polynomial::from_int_coeffs(&[])), "0");
        assert_eq!(print_poly(&Polynomial::from_int_coeffs(&[-5])), "-5");
        assert_eq!(print_poly(&Polynomial::from_int_coeffs(&[0, -1])), "-x");
        assert_eq!(print_poly(&Polynomial::from_int_coeffs(&[2, 0, 0, 1])), "x^3 + 2");
        assert_eq!(
            print_poly(&Polynomial::from_coeffs(vec![rat(-7, 3), rat(0, 1), rat(5, 1), rat(-1, 1)])),
            "-x^3 + 5*x^2 - 7/3"
        );
    }

    #[test]
    fn printing_round_trips_through_the_parser() {
        let samples = [
            Polynomial::from_int_coeffs(&[]),
            Polynomial::from_int_coeffs(&[7]),
            Polynomial::from_int_coeffs(&[-7]),
            Polynomial::from_int_coeffs(&[0, 1]),
            Polynomial::from_int_coeffs(&[1, -3, 2]),
            Polynomial::from_coeffs(vec![rat(5, 6), rat(-1, 2), rat(0, 1), rat(9, 4)]),
        ];
        for p in samples {
            assert_eq!(parse_poly(&print_poly(&p)).unwrap(), p, "round trip of {p}");
        }
    }
}
