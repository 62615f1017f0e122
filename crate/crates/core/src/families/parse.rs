//! A small text syntax for sequences.
//!
//! ```text
//! spec   := "table:[" list "]" [ "+tail:" ( "const:" scalar | expr ) ]
//!         | "const:" scalar
//!         | "koornwinder:" rat "," rat
//!         | "norm:" rat | "invnorm:" rat
//!         | expr
//! expr   := ["+"|"-"] term (("+"|"-") term)*
//! term   := unary (("*"|"/")? unary)*          juxtaposition multiplies
//! unary  := "-" unary | atom ["^" unary]
//! atom   := integer | "n" | "i" | "(" expr ")"
//! ```
//!
//! Exponents are integers or integer-affine in `n` (`2^(-n)`, `(-1)^(n+1)`),
//! the latter only over a constant base. Expressions must be sums of
//! `b^n · polynomial` over a common polynomial denominator. Tables index from
//! `n = 0`; a tail expression is evaluated at the absolute index.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::asymptotic::ExpRational;
use super::sequence::SequenceSpec;
use crate::error::Error;
use crate::exactcore::{ExactScalar, Poly, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::BadParameter(format!("sequence syntax, {e}"))
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

fn err<T>(column: usize, message: impl Into<String>) -> PResult<T> {
    Err(ParseError { column, message: message.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    N,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer;

impl Lexer {
    fn lex(s: &str, base_col: usize) -> PResult<Vec<(Tok, usize)>> {
        let chars: Vec<char> = s.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = base_col + i;
            match c {
                ' ' | '\t' => {
                    i += 1;
                    continue;
                }
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let text: String = chars[start..i].iter().collect();
                    out.push((Tok::Int(text.parse().unwrap()), col));
                    continue;
                }
                'n' => out.push((Tok::N, col)),
                'i' => out.push((Tok::I, col)),
                '+' => out.push((Tok::Plus, col)),
                '-' => out.push((Tok::Minus, col)),
                '*' => out.push((Tok::Star, col)),
                '/' => out.push((Tok::Slash, col)),
                '^' => out.push((Tok::Caret, col)),
                '(' => out.push((Tok::LParen, col)),
                ')' => out.push((Tok::RParen, col)),
                other => return err(col, format!("unexpected character '{other}'")),
            }
            i += 1;
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> PResult<ExpRational> {
        let mut acc = match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            Some(Tok::Minus) => {
                self.bump();
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<ExpRational> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let col = self.col();
                    let d = self.unary()?;
                    if d.is_zero() {
                        return err(col, "division by zero");
                    }
                    acc = match acc.div(&d) {
                        Some(v) => v,
                        None => return err(col, "can only divide by a single b^n·polynomial term"),
                    };
                }
                Some(Tok::Int(_)) | Some(Tok::N) | Some(Tok::I) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<ExpRational> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        let e = self.unary()?;
        power(&base, &e, col)
    }

    fn atom(&mut self) -> PResult<ExpRational> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(ExpRational::constant(ExactScalar::real(v.into()))),
            Some(Tok::N) => Ok(ExpRational::poly(Poly::x())),
            Some(Tok::I) => Ok(ExpRational::constant(ExactScalar::i())),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                let c = self.col();
                match self.bump() {
                    Some(Tok::RParen) => Ok(v),
                    _ => err(c, "expected ')'"),
                }
            }
            Some(t) => err(col, format!("unexpected {t:?}")),
            None => err(col, "unexpected end of input"),
        }
    }
}

/// A constant value of a form, if it is one.
fn as_constant(e: &ExpRational) -> Option<ExactScalar> {
    if e.is_zero() {
        return Some(ExactScalar::zero());
    }
    if e.den().degree().finite() != Some(0) || e.terms().len() != 1 {
        return None;
    }
    let (b, p) = &e.terms()[0];
    (b.is_one() && p.degree().finite() == Some(0)).then(|| &p.leading() / &e.den().leading())
}

fn small_int(c: &ExactScalar) -> Option<i64> {
    if !c.is_real() || !c.re().is_integer() {
        return None;
    }
    c.re().to_integer().to_i64()
}

fn power(base: &ExpRational, e: &ExpRational, col: usize) -> PResult<ExpRational> {
    if let Some(k) = as_constant(e) {
        let k = match small_int(&k) {
            Some(k) if k.abs() <= 64 => k,
            _ => return err(col, "exponent must be a small integer or affine in n"),
        };
        let mut acc = ExpRational::constant(ExactScalar::one());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(base);
        }
        if k < 0 {
            return match ExpRational::constant(ExactScalar::one()).div(&acc) {
                Some(v) => Ok(v),
                None => err(col, "negative power of a non-monomial"),
            };
        }
        return Ok(acc);
    }
    // exponent a·n + b with integer a, b
    let affine = (e.den().degree().finite() == Some(0) && e.terms().len() == 1 && e.terms()[0].0.is_one())
        .then(|| e.terms()[0].1.scale(&e.den().leading().inv().unwrap()))
        .filter(|p| p.degree().finite().is_some_and(|d| d <= 1));
    let Some(p) = affine else {
        return err(col, "exponent must be a small integer or affine in n");
    };
    let (Some(b0), Some(a)) = (small_int(&p.coeff(0)), small_int(&p.coeff(1))) else {
        return err(col, "exponent coefficients must be integers");
    };
    let Some(c) = as_constant(base) else {
        return err(col, "only a constant may be raised to a power involving n");
    };
    if c.is_zero() {
        return err(col, "zero base with exponent in n");
    }
    let g = c.pow(a);
    Ok(ExpRational::new(vec![(g, Poly::constant(c.pow(b0)))], Poly::one()))
}

/// Parses an expression in `n` into its exact form.
pub fn parse_expr(s: &str) -> Result<ExpRational, ParseError> {
    parse_expr_at(s, 1, 0)
}

/// Poles below `from` are allowed; they fall inside a table prefix.
fn parse_expr_at(s: &str, base_col: usize, from: usize) -> PResult<ExpRational> {
    let toks = Lexer::lex(s, base_col)?;
    let mut p = Parser { toks, pos: 0, end_col: base_col + s.chars().count() };
    if p.peek().is_none() {
        return err(base_col, "empty expression");
    }
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return err(p.col(), "unexpected trailing input");
    }
    if let Some(n) = v.den_root_from(from) {
        return err(base_col, format!("denominator vanishes at n={n}"));
    }
    Ok(v)
}

/// The canonical catalog entry for an exact form.
pub fn spec_from_form(e: &ExpRational) -> SequenceSpec {
    if e.is_zero() {
        return SequenceSpec::int(0);
    }
    let den = e.den();
    let monomial = |b: &ExactScalar, p: &Poly| -> SequenceSpec {
        if b.is_one() {
            if p.degree().finite() == Some(0) {
                SequenceSpec::constant(p.leading())
            } else {
                SequenceSpec::poly(p.clone())
            }
        } else if *b == ExactScalar::from_int(-1) {
            SequenceSpec::SignAlternating { factor: p.clone() }
        } else {
            SequenceSpec::Geometric { base: b.clone(), factor: p.clone() }
        }
    };
    if den.degree().finite() == Some(0) {
        let inv = den.leading().inv().unwrap();
        let parts: Vec<SequenceSpec> = e.terms().iter().map(|(b, p)| monomial(b, &p.scale(&inv))).collect();
        return if parts.len() == 1 { parts.into_iter().next().unwrap() } else { SequenceSpec::Sum { terms: parts } };
    }
    if e.terms().len() == 1 && e.terms()[0].0.is_one() {
        return SequenceSpec::RationalInN { num: e.terms()[0].1.clone(), den: den.clone() };
    }
    let parts: Vec<SequenceSpec> = e.terms().iter().map(|(b, p)| monomial(b, p)).collect();
    let num = if parts.len() == 1 { parts.into_iter().next().unwrap() } else { SequenceSpec::Sum { terms: parts } };
    SequenceSpec::Product {
        factors: vec![num, SequenceSpec::RationalInN { num: Poly::one(), den: den.clone() }],
    }
}

fn parse_scalar(s: &str, col: usize) -> PResult<ExactScalar> {
    match s.trim().parse::<ExactScalar>() {
        Ok(v) => Ok(v),
        Err(m) => err(col, m),
    }
}

fn parse_rat(s: &str, col: usize) -> PResult<Rat> {
    match s.trim().parse::<Rat>() {
        Ok(v) => Ok(v),
        Err(m) => err(col, m),
    }
}

fn parse_list(s: &str, col: usize) -> PResult<Vec<ExactScalar>> {
    let inner = s.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for item in inner.split(',') {
        out.push(parse_scalar(item, col + offset)?);
        offset += item.chars().count() + 1;
    }
    Ok(out)
}

/// Parses the text syntax into a sequence.
pub fn parse_sequence(src: &str) -> Result<SequenceSpec, ParseError> {
    let s = src.trim_end();
    let lead = s.len() - s.trim_start().len();
    let s = s.trim_start();
    let col0 = 1 + lead;
    if let Some(rest) = s.strip_prefix("table:") {
        let c = col0 + 6;
        let Some(body) = rest.strip_prefix('[') else {
            return err(c, "expected '['");
        };
        let Some(close) = body.find(']') else {
            return err(c + rest.chars().count(), "expected ']'");
        };
        let list = parse_list(&body[..close], c + 1)?;
        let after = &body[close + 1..];
        let ac = c + 1 + body[..close].chars().count() + 1;
        if after.trim().is_empty() {
            return Ok(SequenceSpec::finite(list));
        }
        let Some(tail) = after.trim_start().strip_prefix("+tail:") else {
            return err(ac, "expected '+tail:' after table");
        };
        let tc = ac + (after.len() - after.trim_start().len()) + 6;
        let tail_spec = if let Some(v) = tail.strip_prefix("const:") {
            SequenceSpec::constant(parse_scalar(v, tc + 6)?)
        } else {
            spec_from_form(&parse_expr_at(tail, tc, list.len())?)
        };
        return Ok(match tail_spec {
            SequenceSpec::EventuallyConstant { prefix, c } if prefix.is_empty() => {
                SequenceSpec::EventuallyConstant { prefix: list, c }
            }
            t => SequenceSpec::UserTableWithTail { prefix: list, tail: Box::new(t) },
        });
    }
    if let Some(rest) = s.strip_prefix("const:") {
        return Ok(SequenceSpec::constant(parse_scalar(rest, col0 + 6)?));
    }
    if let Some(rest) = s.strip_prefix("koornwinder:") {
        let c = col0 + 12;
        let Some((a, k)) = rest.split_once(',') else {
            return err(c, "expected 'alpha,K'");
        };
        return Ok(SequenceSpec::KoornwinderEigenvalues {
            alpha: parse_rat(a, c)?,
            k: parse_rat(k, c + a.chars().count() + 1)?,
        });
    }
    if let Some(rest) = s.strip_prefix("invnorm:") {
        return Ok(SequenceSpec::LaguerreNormReciprocal { beta: parse_rat(rest, col0 + 8)? });
    }
    if let Some(rest) = s.strip_prefix("norm:") {
        return Ok(SequenceSpec::LaguerreNorm { beta: parse_rat(rest, col0 + 5)? });
    }
    Ok(spec_from_form(&parse_expr_at(s, col0, 0)?))
}

impl std::str::FromStr for SequenceSpec {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_sequence(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::sequence::Decision;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    fn vals(s: &str, k: usize) -> Vec<ExactScalar> {
        parse_sequence(s).unwrap().scalar_table(k).unwrap()
    }

    #[test]
    fn canonical_tags() {
        assert_eq!(parse_sequence("-2n+1").unwrap(), SequenceSpec::poly(Poly::from_ints(&[1, -2])));
        assert_eq!(parse_sequence("(-1)^n").unwrap(), SequenceSpec::alternating());
        assert_eq!(parse_sequence("3").unwrap(), SequenceSpec::int(3));
        assert!(matches!(parse_sequence("1/(n+1)").unwrap(), SequenceSpec::RationalInN { .. }));
        assert!(matches!(parse_sequence("(1/2)^n").unwrap(), SequenceSpec::Geometric { .. }));
    }

    #[test]
    fn values() {
        assert_eq!(vals("-2n+1", 3), vec![q(1, 1), q(-1, 1), q(-3, 1)]);
        assert_eq!(vals("n+(-1)^n", 3), vec![q(1, 1), q(0, 1), q(3, 1)]);
        assert_eq!(vals("2^(-n)", 3), vec![q(1, 1), q(1, 2), q(1, 4)]);
        assert_eq!(vals("(-1)^n/(n+1)", 3), vec![q(1, 1), q(-1, 2), q(1, 3)]);
        assert_eq!(vals("n^2 - 3n", 3), vec![q(0, 1), q(-2, 1), q(-2, 1)]);
        assert_eq!(vals("(1+(1/2)^n)(1+(-1)^n)/2 + n(1-(-1)^n)/2", 4), vec![q(2, 1), q(1, 1), q(5, 4), q(3, 1)]);
        assert_eq!(vals("table:[1,2]+tail:const:7", 4), vec![q(1, 1), q(2, 1), q(7, 1), q(7, 1)]);
        assert_eq!(vals("table:[5]+tail:n", 3), vec![q(5, 1), q(1, 1), q(2, 1)]);
        assert_eq!(vals("table:[1,0]+tail:1/n", 4), vec![q(1, 1), q(0, 1), q(1, 2), q(1, 3)]);
        assert!(parse_sequence("table:[1]+tail:1/(n-1)").is_err());
        assert_eq!(vals("table:[1,-1/2]", 3), vec![q(1, 1), q(-1, 2), q(0, 1)]);
        assert_eq!(vals("koornwinder:1/2,1", 2), vec![q(1, 1), q(-1, 1)]);
    }

    #[test]
    fn complex_values() {
        let v = vals("i^n", 4);
        assert_eq!(v[1], ExactScalar::i());
        assert_eq!(v[2], q(-1, 1));
    }

    #[test]
    fn errors_cite_columns() {
        let e = parse_sequence("2n + x").unwrap_err();
        assert_eq!(e.column, 6);
        let e = parse_sequence("1/(n-2)").unwrap_err();
        assert!(e.message.contains("n=2"));
        let e = parse_sequence("n^n").unwrap_err();
        assert_eq!(e.column, 3);
        let e = parse_sequence("(n+1").unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse_sequence("table:[1,x]").unwrap_err();
        assert_eq!(e.column, 10);
    }

    #[test]
    fn l2_of_parsed() {
        assert_eq!(parse_sequence("1/(n+1)").unwrap().l2_membership(), Decision::Yes);
        assert_eq!(parse_sequence("(-1)^n/(n+1)").unwrap().l2_membership(), Decision::Yes);
        assert_eq!(parse_sequence("1/(2n+1)^(0)").unwrap().l2_membership(), Decision::No);
        assert_eq!(parse_sequence("invnorm:3/2").unwrap().l2_membership(), Decision::Yes);
    }
}
