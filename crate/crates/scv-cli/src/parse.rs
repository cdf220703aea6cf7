//! Parsers for the textual mini-language: domains, complex scalars, points,
//! jet polynomials, multi-indices and numeric grids.
//!
//! Every parser is total — malformed input produces a [`ParseError`] whose
//! byte position points into the original string — and inverts the core
//! `Display` forms exactly: `parse(x.to_string()) == x` for every canonical
//! value.  Whitespace may appear between any two tokens and is ignored.
//!
//! Grammar sketch:
//!
//! ```text
//! domain   := disc:c=<complex>,r=<number>
//!           | ball:n=<uint>
//!           | polydisc:r=<number>,...
//!           | ellipsoid:p=<number>,...
//!           | gauge:<name>
//!           | product(<domain>;<domain>;...)
//! complex  := <number> | <number>i | <number><sign><number>i
//! point    := <complex>,...  |  (<complex>, ...)
//! poly     := 1  |  <index>:<complex>,...       index := (<uint>,...)
//! grid     := <number>,...
//! ```

use num_complex::Complex64;
use scv_core::domains::{DomainSpec, HomogeneousPoly, MultiIndex, Point};

/// Largest supported complex dimension for parsed domains (products
/// included).  Series enumeration is exponential in the dimension, so the
/// front end refuses anything larger up front.
pub const MAX_DIM: usize = 8;

/// A parse failure, positioned in the original input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the original string (whitespace included).
    pub pos: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (at byte {})", self.msg, self.pos)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

fn err<T>(pos: usize, msg: impl Into<String>) -> PResult<T> {
    Err(ParseError { pos, msg: msg.into() })
}

/// Character-level scanner that skips whitespace between tokens and tracks
/// byte positions in the original input.
struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Next non-whitespace character, without consuming it.
    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.src[self.pos..].chars().next()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: char) -> PResult<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => err(self.pos, format!("expected '{want}', found '{c}'")),
            None => err(self.pos, format!("expected '{want}', found end of input")),
        }
    }

    /// `key=` prefix of a named field, e.g. `c=` or `r=`.
    fn expect_key(&mut self, key: char) -> PResult<()> {
        self.expect(key)?;
        self.expect('=')
    }

    fn expect_end(&mut self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => err(self.pos, format!("unexpected trailing input starting at '{c}'")),
        }
    }

    /// Identifier: letters, digits, `-` and `_`, starting with a letter.
    fn ident(&mut self) -> PResult<(usize, &'a str)> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => return err(self.pos, format!("expected a name, found '{c}'")),
            None => return err(self.pos, "expected a name, found end of input"),
        }
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        Ok((start, &self.src[start..self.pos]))
    }

    /// Unsigned decimal integer.
    fn uint(&mut self) -> PResult<(usize, u32)> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {}
            Some(c) => return err(self.pos, format!("expected an integer, found '{c}'")),
            None => return err(self.pos, "expected an integer, found end of input"),
        }
        let start = self.pos;
        while matches!(self.src[self.pos..].chars().next(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        match self.src[start..self.pos].parse() {
            Ok(v) => Ok((start, v)),
            Err(_) => err(start, "integer out of range"),
        }
    }

    /// Signed decimal float with an optional exponent.  Whitespace is
    /// allowed between a leading sign and the digits, never inside them.
    fn number(&mut self) -> PResult<(usize, f64)> {
        self.skip_ws();
        let start = self.pos;
        let mut text = String::new();
        if self.peek() == Some('+') || self.peek() == Some('-') {
            if self.bump() == Some('-') {
                text.push('-');
            }
            self.skip_ws();
        }
        let digits_from = self.pos;
        let mut seen_dot = false;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_ascii_digit() || (c == '.' && !seen_dot) {
                seen_dot |= c == '.';
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == digits_from {
            return match self.src[self.pos..].chars().next() {
                Some(c) => err(self.pos, format!("expected a number, found '{c}'")),
                None => err(self.pos, "expected a number, found end of input"),
            };
        }
        text.push_str(&self.src[digits_from..self.pos]);
        // Exponent, consumed greedily when well formed ('e' then digits,
        // optionally signed); otherwise the 'e' is left for the caller.
        let before_exp = self.pos;
        if matches!(self.src[self.pos..].chars().next(), Some('e' | 'E')) {
            self.pos += 1;
            let mut exp = String::from("e");
            if matches!(self.src[self.pos..].chars().next(), Some('+' | '-')) {
                if self.src[self.pos..].starts_with('-') {
                    exp.push('-');
                }
                self.pos += 1;
            }
            let exp_digits = self.pos;
            while matches!(self.src[self.pos..].chars().next(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == exp_digits {
                self.pos = before_exp;
            } else {
                exp.push_str(&self.src[exp_digits..self.pos]);
                text.push_str(&exp);
            }
        }
        match text.parse() {
            Ok(v) => Ok((start, v)),
            Err(_) => err(start, format!("malformed number '{text}'")),
        }
    }

    /// Complex scalar: `a`, `bi`, or `a+bi` / `a-bi`.
    fn complex(&mut self) -> PResult<Complex64> {
        let (_, first) = self.number()?;
        if self.eat('i') {
            return Ok(Complex64::new(0.0, first));
        }
        match self.peek() {
            Some('+') | Some('-') => {
                let (_, im) = self.number()?;
                self.expect('i')?;
                Ok(Complex64::new(first, im))
            }
            _ => Ok(Complex64::new(first, 0.0)),
        }
    }

    /// Parenthesized multi-index `(a,b,...)`.
    fn multi_index(&mut self) -> PResult<MultiIndex> {
        self.expect('(')?;
        let mut entries = vec![self.uint()?.1];
        while self.eat(',') {
            entries.push(self.uint()?.1);
        }
        self.expect(')')?;
        Ok(MultiIndex::new(entries))
    }

    fn domain(&mut self) -> PResult<DomainSpec> {
        let (start, word) = self.ident()?;
        match word {
            "product" => {
                self.expect('(')?;
                let mut factors = vec![self.domain()?];
                while self.eat(';') {
                    factors.push(self.domain()?);
                }
                self.expect(')')?;
                DomainSpec::product(factors).map_err(|e| ParseError {
                    pos: start,
                    msg: e.to_string(),
                })
            }
            "disc" => {
                self.expect(':')?;
                self.expect_key('c')?;
                let center = self.complex()?;
                self.expect(',')?;
                self.expect_key('r')?;
                let (rp, radius) = self.number()?;
                DomainSpec::disc(center, radius)
                    .map_err(|e| ParseError { pos: rp, msg: e.to_string() })
            }
            "ball" => {
                self.expect(':')?;
                self.expect_key('n')?;
                let (np, n) = self.uint()?;
                DomainSpec::ball(n as usize)
                    .map_err(|e| ParseError { pos: np, msg: e.to_string() })
            }
            "polydisc" => {
                self.expect(':')?;
                self.expect_key('r')?;
                let (p, radii) = self.number_list()?;
                DomainSpec::polydisc(radii)
                    .map_err(|e| ParseError { pos: p, msg: e.to_string() })
            }
            "ellipsoid" => {
                self.expect(':')?;
                self.expect_key('p')?;
                let (p, exponents) = self.number_list()?;
                DomainSpec::ellipsoid(exponents)
                    .map_err(|e| ParseError { pos: p, msg: e.to_string() })
            }
            "gauge" => {
                self.expect(':')?;
                let (gp, name) = self.ident()?;
                match name {
                    "model-z1z2" => Ok(DomainSpec::model_z1z2()),
                    other => err(gp, format!("unknown gauge name '{other}' (known: model-z1z2)")),
                }
            }
            other => err(
                start,
                format!(
                    "unknown domain variant '{other}' (expected disc, ball, polydisc, \
                     ellipsoid, gauge or product)"
                ),
            ),
        }
    }

    fn number_list(&mut self) -> PResult<(usize, Vec<f64>)> {
        let (p, first) = self.number()?;
        let mut values = vec![first];
        while self.eat(',') {
            values.push(self.number()?.1);
        }
        Ok((p, values))
    }
}

/// Parses a domain expression; see the module docs for the grammar.
pub fn parse_domain(text: &str) -> PResult<DomainSpec> {
    let mut s = Scanner::new(text);
    let d = s.domain()?;
    s.expect_end()?;
    if d.dim() > MAX_DIM {
        return err(
            0,
            format!("dimension overflow: n = {} exceeds the supported cap of {MAX_DIM}", d.dim()),
        );
    }
    Ok(d)
}

/// Parses a single complex scalar, e.g. `0.5`, `-2i`, `1.5-0.25i`.
pub fn parse_complex(text: &str) -> PResult<Complex64> {
    let mut s = Scanner::new(text);
    let z = s.complex()?;
    s.expect_end()?;
    Ok(z)
}

/// Parses a point: comma-separated complex scalars, with or without a
/// surrounding parenthesis pair.
pub fn parse_point(text: &str) -> PResult<Point> {
    let mut s = Scanner::new(text);
    let wrapped = s.eat('(');
    let mut coords = vec![s.complex()?];
    while s.eat(',') {
        coords.push(s.complex()?);
    }
    if wrapped {
        s.expect(')')?;
    }
    s.expect_end()?;
    Point::new(coords).map_err(|e| ParseError { pos: 0, msg: e.to_string() })
}

/// Parses a homogeneous polynomial for the given ambient dimension.  The
/// input is either the literal `1` (the constant jet) or a comma-separated
/// list of `(index):coefficient` terms, all of one total degree:
/// `(1,1):1`, `(2,0):0.5+0.5i,(0,2):1-1i`.
pub fn parse_poly(text: &str, dim: usize) -> PResult<HomogeneousPoly> {
    let mut s = Scanner::new(text);
    if s.peek() != Some('(') {
        let (p, v) = s.number()?;
        s.expect_end()?;
        if v == 1.0 {
            return Ok(HomogeneousPoly::one(dim));
        }
        return err(p, format!("expected '1' or a '(index):coefficient' term list, found '{v}'"));
    }
    let start = s.pos;
    let mut terms = Vec::new();
    loop {
        let alpha = s.multi_index()?;
        s.expect(':')?;
        let a = s.complex()?;
        terms.push((alpha, a));
        if !s.eat(',') {
            break;
        }
    }
    s.expect_end()?;
    let degree = terms[0].0.order();
    HomogeneousPoly::new(dim, degree, terms)
        .map_err(|e| ParseError { pos: start, msg: e.to_string() })
}

/// Canonical printed form of a jet polynomial; [`parse_poly`] inverts it.
pub fn print_poly(p: &HomogeneousPoly) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    for (j, (alpha, a)) in p.terms().enumerate() {
        if j > 0 {
            out.push(',');
        }
        write!(out, "{alpha}:{}", scv_core::domains::format_complex(a)).unwrap();
    }
    out
}

/// Parses a comma-separated list of real numbers.
pub fn parse_grid(text: &str) -> PResult<Vec<f64>> {
    let mut s = Scanner::new(text);
    let (_, values) = s.number_list()?;
    s.expect_end()?;
    Ok(values)
}

/// Parses a standalone multi-index `(a,b,...)`.
pub fn parse_multi_index(text: &str) -> PResult<MultiIndex> {
    let mut s = Scanner::new(text);
    let alpha = s.multi_index()?;
    s.expect_end()?;
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use scv_core::domains::catalog;

    #[test]
    fn catalog_display_forms_round_trip() {
        for entry in catalog() {
            let printed = entry.domain.to_string();
            let parsed = parse_domain(&printed).unwrap();
            assert_eq!(parsed, entry.domain, "{printed}");
            assert_eq!(parsed.to_string(), printed);
        }
    }

    #[test]
    fn whitespace_is_insensitive_everywhere() {
        let tight = parse_domain("disc:c=0.3-0.2i,r=1.25").unwrap();
        let airy = parse_domain(" disc : c = 0.3 - 0.2 i , r = 1.25 ").unwrap();
        assert_eq!(tight, airy);
        let p = parse_point(" ( 0.5 + 0 i , - 0.25 i ) ").unwrap();
        assert_eq!(p.coords()[0], Complex64::new(0.5, 0.0));
        assert_eq!(p.coords()[1], Complex64::new(0.0, -0.25));
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("1.5e-1+2e0i").unwrap(), Complex64::new(0.15, 2.0));
        assert_eq!(parse_complex("0+0i").unwrap(), Complex64::new(0.0, 0.0));
        assert!(parse_complex("1+2").is_err());
        assert!(parse_complex("i").is_err());
        assert!(parse_complex("1 2").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_domain("disc:c=0+0i,q=1").unwrap_err();
        assert_eq!(e.pos, 12);
        let e = parse_domain("ball:n=0").unwrap_err();
        assert_eq!(e.pos, 7);
        let e = parse_domain("torus:r=1").unwrap_err();
        assert_eq!(e.pos, 0);
        assert!(e.msg.contains("torus"));
        let e = parse_domain("gauge:model-z9").unwrap_err();
        assert_eq!(e.pos, 6);
        let e = parse_complex("0.5+badi").unwrap_err();
        assert_eq!(e.pos, 4);
    }

    #[test]
    fn dimension_cap_applies_to_products_too() {
        assert!(parse_domain("ball:n=8").is_ok());
        assert!(parse_domain("ball:n=9").is_err());
        let five = "product(ball:n=5;ball:n=4)";
        let e = parse_domain(five).unwrap_err();
        assert!(e.msg.contains("overflow"), "{e}");
    }

    #[test]
    fn poly_terms_round_trip() {
        let p = parse_poly("(1,1):1", 2).unwrap();
        assert_eq!(p.degree(), 2);
        let printed = print_poly(&p);
        assert_eq!(parse_poly(&printed, 2).unwrap(), p);

        let q = parse_poly("(2,0):0.5+0.5i,(0,2):1-1i", 2).unwrap();
        let printed = print_poly(&q);
        assert_eq!(parse_poly(&printed, 2).unwrap(), q);

        assert_eq!(parse_poly("1", 3).unwrap(), HomogeneousPoly::one(3));
        assert!(parse_poly("(1,0):1,(0,2):1", 2).is_err());
        assert!(parse_poly("2", 2).is_err());
    }

    #[test]
    fn grids_and_indices() {
        assert_eq!(parse_grid("-3,-2,-1,-0.25").unwrap(), vec![-3.0, -2.0, -1.0, -0.25]);
        assert!(parse_grid("").is_err());
        assert_eq!(parse_multi_index("(2,0,1)").unwrap(), MultiIndex::new(vec![2, 0, 1]));
        assert!(parse_multi_index("(2,)").is_err());
    }
}
