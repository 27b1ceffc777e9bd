//! Text format for polynomial pairs.
//!
//! A document binds `f` and `g`, separated by newlines or semicolons, with
//! `#` comments:
//!
//! ```text
//! # an example map
//! f = x + 3*y^2
//! g = y
//! ```
//!
//! Expressions use explicit `*`, `^` with non-negative integer exponents
//! (right-associative), unary minus, parentheses, and rational literals
//! `a` or `a/b`. Precedence: `^`, then unary minus, then `*`, then binary
//! `+`/`-`. Printing uses [`BivarPoly`]'s canonical form (graded order, `x`
//! before `y`), so print-then-parse is the identity.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use planeinv_core::{BivarPoly, Rational};
use std::fmt;

/// A located syntax error with the token found and what was legal there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub found: String,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: found {}, expected {}",
            self.line, self.col, self.found, self.expected
        )
    }
}

impl std::error::Error for ParseError {}

/// A parsed input file: both bindings plus their source text as written.
#[derive(Clone, Debug)]
pub struct MapDocument {
    pub f_source: String,
    pub g_source: String,
    pub f: BivarPoly,
    pub g: BivarPoly,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Equals,
    /// Newline or semicolon.
    Sep,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("the number {}", n),
            Tok::Ident(s) => format!("'{}'", s),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Equals => "'='".into(),
            Tok::Sep => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
    /// Byte offset into the source, for slicing binding sources back out.
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut toks = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut it = text.char_indices().peekable();
    while let Some((offset, ch)) = it.next() {
        let here = (line, col, offset);
        match ch {
            '\n' => {
                toks.push(Spanned { tok: Tok::Sep, line, col, offset });
                line += 1;
                col = 1;
                continue;
            }
            ' ' | '\t' | '\r' => {}
            '#' => {
                while let Some((_, c)) = it.peek() {
                    if *c == '\n' {
                        break;
                    }
                    it.next();
                    col += 1;
                }
            }
            ';' => toks.push(Spanned { tok: Tok::Sep, line, col, offset }),
            '+' => toks.push(Spanned { tok: Tok::Plus, line, col, offset }),
            '-' => toks.push(Spanned { tok: Tok::Minus, line, col, offset }),
            '*' => toks.push(Spanned { tok: Tok::Star, line, col, offset }),
            '/' => toks.push(Spanned { tok: Tok::Slash, line, col, offset }),
            '^' => toks.push(Spanned { tok: Tok::Caret, line, col, offset }),
            '(' => toks.push(Spanned { tok: Tok::LParen, line, col, offset }),
            ')' => toks.push(Spanned { tok: Tok::RParen, line, col, offset }),
            '=' => toks.push(Spanned { tok: Tok::Equals, line, col, offset }),
            '0'..='9' => {
                let mut digits = String::from(ch);
                while let Some((_, c)) = it.peek() {
                    if c.is_ascii_digit() {
                        digits.push(*c);
                        it.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let n = digits.parse::<BigInt>().expect("digit string");
                toks.push(Spanned { tok: Tok::Number(n), line: here.0, col: here.1, offset });
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::from(c);
                while let Some((_, c2)) = it.peek() {
                    if c2.is_alphanumeric() || *c2 == '_' {
                        name.push(*c2);
                        it.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push(Spanned { tok: Tok::Ident(name), line: here.0, col: here.1, offset });
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    found: format!("'{}'", other),
                    expected: "a number, 'x', 'y', an operator, or '#'".into(),
                })
            }
        }
        col += 1;
    }
    toks.push(Spanned { tok: Tok::Eof, line, col, offset: text.len() });
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
}

const ATOM_EXPECTED: &str = "a number, 'x', 'y', '-', or '('";

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> &Spanned {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            col: t.col,
            found: t.tok.describe(),
            expected: expected.into(),
        }
    }

    fn expr(&mut self) -> Result<BivarPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BivarPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BivarPoly, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            Ok(self.factor()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<BivarPoly, ParseError> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    // Right-associative tower of non-negative integers, overflow-checked.
    fn exponent(&mut self) -> Result<u32, ParseError> {
        let too_large = |p: &Parser<'a>| {
            let t = &p.toks[p.pos - 1];
            ParseError {
                line: t.line,
                col: t.col,
                found: t.tok.describe(),
                expected: "an exponent that fits in 32 bits".into(),
            }
        };
        match self.peek().tok.clone() {
            Tok::Number(n) => {
                self.bump();
                let lo = n.to_u32().ok_or_else(|| too_large(self))?;
                if self.peek().tok == Tok::Caret {
                    self.bump();
                    let hi = self.exponent()?;
                    lo.checked_pow(hi).ok_or_else(|| too_large(self))
                } else {
                    Ok(lo)
                }
            }
            _ => Err(self.err("a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<BivarPoly, ParseError> {
        match self.peek().tok.clone() {
            Tok::Number(n) => {
                self.bump();
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    match self.peek().tok.clone() {
                        Tok::Number(d) if !d.is_zero() => {
                            self.bump();
                            Ok(BivarPoly::constant(Rational::new(n, d)))
                        }
                        Tok::Number(_) => Err(self.err("a nonzero denominator")),
                        _ => Err(self.err("a denominator")),
                    }
                } else {
                    Ok(BivarPoly::constant(Rational::from(n)))
                }
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => {
                    self.bump();
                    Ok(BivarPoly::var_x())
                }
                "y" => {
                    self.bump();
                    Ok(BivarPoly::var_y())
                }
                _ => Err(self.err(ATOM_EXPECTED)),
            },
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.err("')'"));
                }
                self.bump();
                Ok(e)
            }
            _ => Err(self.err(ATOM_EXPECTED)),
        }
    }

    fn skip_seps(&mut self) {
        while self.peek().tok == Tok::Sep {
            self.bump();
        }
    }
}

/// Parse a single polynomial expression (trailing separators allowed).
pub fn parse_poly(text: &str) -> Result<BivarPoly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    p.skip_seps();
    let poly = p.expr()?;
    p.skip_seps();
    if p.peek().tok != Tok::Eof {
        return Err(p.err("'+', '-', '*', '^', or end of input"));
    }
    Ok(poly)
}

/// Canonical text for a polynomial; the inverse of [`parse_poly`] on
/// canonical forms.
pub fn print_poly(p: &BivarPoly) -> String {
    p.to_string()
}

/// Parse a two-binding document (see the module header for the format).
pub fn parse_document(text: &str) -> Result<MapDocument, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let mut f: Option<(String, BivarPoly)> = None;
    let mut g: Option<(String, BivarPoly)> = None;
    loop {
        p.skip_seps();
        if p.peek().tok == Tok::Eof {
            break;
        }
        let name = match p.peek().tok.clone() {
            Tok::Ident(n) if n == "f" || n == "g" => n,
            _ => return Err(p.err("a binding 'f = ...' or 'g = ...'")),
        };
        let name_err = p.err("one binding per name");
        p.bump();
        if p.peek().tok != Tok::Equals {
            return Err(p.err("'='"));
        }
        p.bump();
        let start = p.peek().offset;
        let poly = p.expr()?;
        if p.peek().tok != Tok::Sep && p.peek().tok != Tok::Eof {
            return Err(p.err("'+', '-', '*', '^', ';', or end of line"));
        }
        let source = text[start..p.peek().offset].trim().to_string();
        let slot = if name == "f" { &mut f } else { &mut g };
        if slot.is_some() {
            return Err(ParseError {
                found: format!("a second binding for '{}'", name),
                ..name_err
            });
        }
        *slot = Some((source, poly));
    }
    let (f_source, f) = f.ok_or_else(|| p.err("a binding for 'f'"))?;
    let (g_source, g) = g.ok_or_else(|| p.err("a binding for 'g'"))?;
    Ok(MapDocument { f_source, g_source, f, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_the_module_header_examples() {
        let p = parse_poly("x + 3*y^2").unwrap();
        assert_eq!(print_poly(&p), "x + 3*y^2");

        let q = parse_poly("-(1/2)*x^3*y + y").unwrap();
        assert_eq!(q.coefficient(3, 1), rat(-1, 2));
        assert_eq!(q.coefficient(0, 1), rat(1, 1));
        assert_eq!(q.term_count(), 2);
    }

    #[test]
    fn precedence_and_associativity() {
        // unary minus binds looser than ^
        assert_eq!(parse_poly("-x^2").unwrap(), parse_poly("-(x^2)").unwrap());
        // ^ is right-associative on integer towers
        assert_eq!(parse_poly("x^2^3").unwrap(), parse_poly("x^8").unwrap());
        // * binds tighter than +
        assert_eq!(parse_poly("1 + 2*x").unwrap().coefficient(1, 0), rat(2, 1));
        // rational literal vs parenthesized division
        assert_eq!(parse_poly("1/2*x").unwrap(), parse_poly("(1/2)*x").unwrap());
    }

    #[test]
    fn stray_operator_is_located() {
        let e = parse_poly("x + * y").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        assert_eq!(e.found, "'*'");
        assert!(e.expected.contains("'x'"));
    }

    #[test]
    fn zero_prints_and_reparses() {
        assert_eq!(print_poly(&BivarPoly::zero()), "0");
        assert!(parse_poly("0").unwrap().is_zero());
        assert_eq!(print_poly(&BivarPoly::term(1, 0, rat(-1, 2))), "-1/2*x");
    }

    #[test]
    fn document_with_comments_and_semicolons() {
        let doc = parse_document("# a map\nf = x + 3*y^2; g = y\n").unwrap();
        assert_eq!(doc.f_source, "x + 3*y^2");
        assert_eq!(doc.g_source, "y");
        assert_eq!(doc.g, BivarPoly::var_y());
    }

    #[test]
    fn document_errors_are_located() {
        let e = parse_document("f = x\n").unwrap_err();
        assert!(e.expected.contains("'g'"));

        let e = parse_document("f = x\nf = y\ng = y\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
        assert!(e.found.contains("second binding"));

        let e = parse_document("h = x\n").unwrap_err();
        assert!(e.expected.contains("binding"));

        let e = parse_document("f = x + 1.5\ng = y\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 10));
    }

    #[test]
    fn division_by_zero_literal_is_rejected() {
        let e = parse_poly("1/0").unwrap_err();
        assert!(e.expected.contains("nonzero"));
    }

    #[test]
    fn exponent_errors() {
        assert!(parse_poly("x^y").is_err());
        assert!(parse_poly("x^(2)").is_err());
        assert!(parse_poly("x^99999999999999999999").is_err());
        // 10^10 overflows the u32 exponent range
        assert!(parse_poly("x^10^10").is_err());
    }
}
