//! Text form of rational maps.
//!
//! Grammar: complex literals (`2`, `0.5`, `3i`, `i`), the variable `z`,
//! `+ - * /`, `^` with an integer exponent, and parentheses. Decimal
//! literals are read exactly, so every parsed map has rational coefficients.

use std::fmt;

use dxm_core::numeric::ExactComplex;
use dxm_core::poly::Poly;
use dxm_core::{DomainSpec, RationalMap};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(ExactComplex),
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        let tok = match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'z' | b'Z' => Tok::Z,
            b'i' => Tok::Num(ExactComplex::new(BigRational::zero(), BigRational::one())),
            b'0'..=b'9' | b'.' => {
                let (value, len) = decimal(&text[i..]).ok_or_else(|| SyntaxError {
                    offset: start,
                    message: "malformed number".into(),
                })?;
                i += len;
                if bytes.get(i) == Some(&b'i') {
                    i += 1;
                    out.push((Tok::Num(ExactComplex::new(BigRational::zero(), value)), start));
                } else {
                    out.push((Tok::Num(ExactComplex::new(value, BigRational::zero())), start));
                }
                continue;
            }
            _ => {
                return Err(SyntaxError {
                    offset: start,
                    message: format!("unexpected character `{}`", text[i..].chars().next().unwrap_or('?')),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Exact value of a decimal literal such as `12`, `0.25` or `1.5e-3`, and
/// the number of bytes it spans.
fn decimal(s: &str) -> Option<(BigRational, usize)> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut digits = String::new();
    let mut frac = 0i64;
    while i < b.len() && b[i].is_ascii_digit() {
        digits.push(b[i] as char);
        i += 1;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            digits.push(b[i] as char);
            frac += 1;
            i += 1;
        }
    }
    if digits.is_empty() {
        return None;
    }
    let mut exp = 0i64;
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        let neg = match b.get(j) {
            Some(b'-') => {
                j += 1;
                true
            }
            Some(b'+') => {
                j += 1;
                false
            }
            _ => false,
        };
        let from = j;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        if j == from {
            return None;
        }
        exp = s[from..j].parse().ok()?;
        if neg {
            exp = -exp;
        }
        i = j;
    }
    let mantissa: BigInt = digits.parse().ok()?;
    let shift = exp - frac;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    let value = if shift >= 0 {
        BigRational::from_integer(mantissa * scale)
    } else {
        BigRational::new(mantissa, scale)
    };
    Some((value, i))
}

/// `num / den` during parsing.
#[derive(Clone)]
struct Ratio {
    num: Poly<ExactComplex>,
    den: Poly<ExactComplex>,
}

impl Ratio {
    fn constant(c: ExactComplex) -> Self {
        Ratio {
            num: Poly::constant(c),
            den: one_poly(),
        }
    }

    fn add(&self, o: &Ratio, sign: i64) -> Ratio {
        let s = ExactComplex::new(BigRational::from_integer(BigInt::from(sign)), BigRational::zero());
        let rhs = (&o.num * &self.den).scale(&s);
        Ratio {
            num: &(&self.num * &o.den) + &rhs,
            den: &self.den * &o.den,
        }
    }

    fn mul(&self, o: &Ratio) -> Ratio {
        Ratio {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }

    fn inv(&self) -> Option<Ratio> {
        (!self.num.is_zero()).then(|| Ratio {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }
}

fn one_poly() -> Poly<ExactComplex> {
    Poly::constant(ExactComplex::new(BigRational::one(), BigRational::zero()))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Ratio, SyntaxError> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term()?;
            acc = acc.add(&rhs, sign);
        }
    }

    fn term(&mut self) -> Result<Ratio, SyntaxError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let rhs = self.unary()?;
                    let inv = rhs.inv().ok_or(SyntaxError {
                        offset: at,
                        message: "division by zero".into(),
                    })?;
                    acc = acc.mul(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Ratio, SyntaxError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let v = self.unary()?;
                Ok(Ratio::constant(ExactComplex::new(BigRational::zero(), BigRational::zero())).add(&v, -1))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ratio, SyntaxError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        let k = match self.bump() {
            Tok::Num(c) if c.im.is_zero() && c.re.is_integer() && !c.re.is_negative() => {
                c.re.to_integer()
                    .try_into()
                    .ok()
                    .filter(|k: &u32| *k <= 64)
                    .ok_or(SyntaxError {
                        offset: at,
                        message: "exponent must be at most 64".into(),
                    })?
            }
            _ => {
                return Err(SyntaxError {
                    offset: at,
                    message: "expected an integer exponent".into(),
                })
            }
        };
        let mut out = Ratio::constant(ExactComplex::new(BigRational::one(), BigRational::zero()));
        for _ in 0..k {
            out = out.mul(&base);
        }
        if negative {
            out = out.inv().ok_or(SyntaxError {
                offset: at,
                message: "negative power of zero".into(),
            })?;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Ratio, SyntaxError> {
        match self.bump() {
            Tok::Num(c) => Ok(Ratio::constant(c)),
            Tok::Z => Ok(Ratio {
                num: Poly::new(vec![
                    ExactComplex::new(BigRational::zero(), BigRational::zero()),
                    ExactComplex::new(BigRational::one(), BigRational::zero()),
                ]),
                den: one_poly(),
            }),
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected a number, `z` or `(`")
            }
        }
    }
}

fn parse_ratio(text: &str) -> Result<Ratio, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let r = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(r)
}

/// Numerator and denominator of `text`, not yet reduced.
pub fn parse_fraction(text: &str) -> Result<(Poly<ExactComplex>, Poly<ExactComplex>), SyntaxError> {
    let r = parse_ratio(text)?;
    Ok((r.num, r.den))
}

/// A validated map on `domain`.
pub fn parse_map(text: &str, domain: DomainSpec) -> anyhow::Result<RationalMap> {
    let (num, den) = parse_fraction(text)?;
    Ok(RationalMap::from_exact(num, den, domain)?)
}

fn parse_constant(text: &str, offset: usize) -> Result<ExactComplex, SyntaxError> {
    let r = parse_ratio(text).map_err(|e| SyntaxError {
        offset: e.offset + offset,
        ..e
    })?;
    if r.num.degree() > 0 || r.den.degree() > 0 {
        return Err(SyntaxError {
            offset,
            message: "expected a constant".into(),
        });
    }
    Ok(r.num.coeff(0) / r.den.coeff(0))
}

/// Comma separated constants `c_0, c_1, ...` in ascending powers of `z`.
pub fn parse_coefficients(text: &str) -> Result<Poly<ExactComplex>, SyntaxError> {
    let mut offset = 0;
    let mut coeffs = Vec::new();
    for part in text.split(',') {
        coeffs.push(parse_constant(part, offset)?);
        offset += part.len() + 1;
    }
    Ok(Poly::new(coeffs))
}

/// A complex constant such as `1`, `-1` or `0.6+0.8i`.
pub fn parse_point(text: &str) -> Result<num_complex::Complex64, SyntaxError> {
    let v = parse_constant(text, 0)?;
    Ok(num_complex::Complex64::new(
        dxm_core::numeric::rational_to_f64(&v.re),
        dxm_core::numeric::rational_to_f64(&v.im),
    ))
}

fn rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn coefficient(c: &ExactComplex) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => format!("({})", rational(&c.re)),
        (true, false) => format!("({})*i", rational(&c.im)),
        (false, false) => format!("({}+({})*i)", rational(&c.re), rational(&c.im)),
    }
}

fn float_coefficient(c: &num_complex::Complex64) -> String {
    if c.im == 0.0 {
        format!("({})", c.re)
    } else {
        format!("({}+({})*i)", c.re, c.im)
    }
}

fn poly_text<T>(coeffs: &[T], is_zero: impl Fn(&T) -> bool, show: impl Fn(&T) -> String) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !is_zero(c))
        .map(|(k, c)| match k {
            0 => show(c),
            1 => format!("{}*z", show(c)),
            _ => format!("{}*z^{k}", show(c)),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Text that parses back to the same normalized map.
pub fn print_map(phi: &RationalMap) -> String {
    let (n, d) = match phi.exact() {
        Some((num, den)) => (
            poly_text(num.coeffs(), |c| c.is_zero(), coefficient),
            poly_text(den.coeffs(), |c| c.is_zero(), coefficient),
        ),
        None => (
            poly_text(phi.num().coeffs(), |c| c.norm() == 0.0, float_coefficient),
            poly_text(phi.den().coeffs(), |c| c.norm() == 0.0, float_coefficient),
        ),
    };
    format!("({n})/({d})")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactComplex {
        ExactComplex::new(BigRational::new(n.into(), d.into()), BigRational::zero())
    }

    #[test]
    fn cubic() {
        let phi = parse_map("(1 - z^3)/2", DomainSpec::disc()).unwrap();
        let (num, den) = phi.exact().unwrap();
        assert_eq!(num.coeffs(), &[q(1, 2), q(0, 1), q(0, 1), q(-1, 2)]);
        assert_eq!(den.coeffs(), &[q(1, 1)]);
    }

    #[test]
    fn mobius() {
        let phi = parse_map("(2*z - 1)/(z - 2)", DomainSpec::disc()).unwrap();
        let (num, den) = phi.exact().unwrap();
        assert_eq!(num.coeffs(), &[q(1, 2), q(-1, 1)]);
        assert_eq!(den.coeffs(), &[q(1, 1), q(-1, 2)]);
    }

    #[test]
    fn syntax_errors() {
        let e = parse_fraction("z/(z").unwrap_err();
        assert_eq!(e.offset, 4);
        assert_eq!(parse_fraction("z + $").unwrap_err().offset, 4);
        assert_eq!(parse_fraction("z^z").unwrap_err().offset, 2);
        assert_eq!(parse_fraction("1/(z-z)").unwrap_err().offset, 2);
    }

    #[test]
    fn literals() {
        assert_eq!(decimal("0.25").unwrap(), (BigRational::new(1.into(), 4.into()), 4));
        assert_eq!(decimal("15e-1x").unwrap(), (BigRational::new(3.into(), 2.into()), 5));
        let p = parse_point("0.6+0.8i").unwrap();
        assert!((p - num_complex::Complex64::new(0.6, 0.8)).norm() < 1e-16);
        assert_eq!(parse_point("-1").unwrap(), num_complex::Complex64::new(-1.0, 0.0));
        assert!(parse_point("z").is_err());
    }

    #[test]
    fn coefficient_lists() {
        let p = parse_coefficients("1/2, 0, 0, -1/2").unwrap();
        assert_eq!(p.coeffs(), &[q(1, 2), q(0, 1), q(0, 1), q(-1, 2)]);
        assert_eq!(parse_coefficients("1,2,z").unwrap_err().offset, 4);
        assert_eq!(parse_coefficients("1,,2").unwrap_err().offset, 2);
    }

    #[test]
    fn round_trip() {
        for text in [
            "(1 - z^3)/2",
            "(2*z - 1)/(z - 2)",
            "(3/5 + 4/5*i)*z",
            "(z + ((1+i)*z - 1)/(z + (i - 1)))/2",
            "z^2",
            "0.25 + z/4 - 0.125i*z^2",
        ] {
            let phi = parse_map(text, DomainSpec::disc()).unwrap();
            let again = parse_map(&print_map(&phi), DomainSpec::disc()).unwrap();
            assert_eq!(phi.exact(), again.exact(), "{text} -> {}", print_map(&phi));
        }
    }

    #[test]
    fn float_maps_round_trip() {
        let c = num_complex::Complex64::new;
        let phi = RationalMap::from_coeffs(&[c(0.1, -0.2), c(0.3, 0.0)], &[c(1.0, 0.0)], DomainSpec::disc()).unwrap();
        let again = parse_map(&print_map(&phi), DomainSpec::disc()).unwrap();
        assert_eq!(phi.num().coeffs(), again.num().coeffs());
    }
}
