//! Text syntax for field specs and elements.
//!
//! Field specs:
//!
//! ```text
//! spec    := "p=" prime
//!          | "q=" prime-power [ ":" poly ]
//!          | "Q"
//!          | "Q[x]/(" poly ")"
//! ```
//!
//! Elements and moduli are polynomials in `x`:
//!
//! ```text
//! poly    := ["-"] term { ("+" | "-") term }
//! term    := coeff [ ["*"] mono ] | mono
//! mono    := "x" [ "^" digits ]
//! coeff   := digits [ "/" digits ]
//! ```
//!
//! Whitespace is ignored. Elements print with the highest degree first, e.g.
//! `2*x^2+x+1`, `-3/2*x-1/2`, `5`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{poly, prime_power, Element, Field, FieldError, FieldSpec, Kind, Rational, Value};

fn parse_err(msg: impl Into<String>) -> FieldError {
    FieldError::Parse(msg.into())
}

/// Parses a polynomial in `x` with rational coefficients. The result is dense
/// and trimmed, constant term first.
pub fn parse_poly(s: &str) -> Result<Vec<Rational>, FieldError> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(parse_err("empty polynomial"));
    }
    let mut pos = 0;
    let mut out: Vec<Rational> = Vec::new();
    let mut first = true;
    while pos < chars.len() {
        let mut negative = false;
        match chars[pos] {
            '+' if !first => pos += 1,
            '-' => {
                negative = true;
                pos += 1;
            }
            _ if first => {}
            c => return Err(parse_err(alloc::format!("expected '+' or '-', found '{c}'"))),
        }
        first = false;

        let coeff = parse_coeff(&chars, &mut pos)?;
        if coeff.is_some() && pos < chars.len() && chars[pos] == '*' {
            pos += 1;
            if pos >= chars.len() || chars[pos] != 'x' {
                return Err(parse_err("expected 'x' after '*'"));
            }
        }
        let degree = if pos < chars.len() && chars[pos] == 'x' {
            pos += 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let digits = take_digits(&chars, &mut pos);
                if digits.is_empty() {
                    return Err(parse_err("expected exponent after '^'"));
                }
                digits.parse::<usize>().map_err(|_| parse_err("exponent too large"))?
            } else {
                1
            }
        } else if coeff.is_none() {
            return Err(parse_err(alloc::format!("unexpected input at position {pos}")));
        } else {
            0
        };
        if degree > 4096 {
            return Err(parse_err("exponent too large"));
        }
        let mut c = coeff.unwrap_or_else(Rational::one);
        if negative {
            c = -c;
        }
        if out.len() <= degree {
            out.resize(degree + 1, Rational::zero());
        }
        out[degree] += c;
    }
    Ok(poly::q_trim(out))
}

fn take_digits(chars: &[char], pos: &mut usize) -> String {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    chars[start..*pos].iter().collect()
}

fn parse_coeff(chars: &[char], pos: &mut usize) -> Result<Option<Rational>, FieldError> {
    let num = take_digits(chars, pos);
    if num.is_empty() {
        return Ok(None);
    }
    let num: BigInt = num.parse().map_err(|_| parse_err("bad integer"))?;
    if *pos < chars.len() && chars[*pos] == '/' {
        *pos += 1;
        let den = take_digits(chars, pos);
        let den: BigInt = den.parse().map_err(|_| parse_err("bad denominator"))?;
        if den.is_zero() {
            return Err(parse_err("zero denominator"));
        }
        return Ok(Some(Rational::new(num, den)));
    }
    Ok(Some(Rational::from_integer(num)))
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[Rational]) -> fmt::Result {
    let mut wrote = false;
    for (deg, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if neg {
            f.write_str("-")?;
        } else if wrote {
            f.write_str("+")?;
        }
        match deg {
            0 => write!(f, "{mag}")?,
            _ => {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if deg == 1 {
                    f.write_str("x")?;
                } else {
                    write!(f, "x^{deg}")?;
                }
            }
        }
        wrote = true;
    }
    if !wrote {
        f.write_str("0")?;
    }
    Ok(())
}

struct PolyDisplay<'a>(&'a [Rational]);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.0)
    }
}

/// Formats a polynomial (constant term first) in the element syntax.
pub fn format_poly(coeffs: &[Rational]) -> String {
    PolyDisplay(coeffs).to_string()
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Finite(a) if matches!(self.field.0.kind, Kind::Prime { .. }) => write!(f, "{a}"),
            Value::Rational(r) => write!(f, "{r}"),
            _ => write_poly(f, &self.coefficients()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "p={p}"),
            FieldSpec::Extension { p, k, modulus } => {
                let q = p.checked_pow(*k).map(|q| q.to_string()).unwrap_or_else(|| alloc::format!("{p}^{k}"));
                write!(f, "q={q}")?;
                if let Some(m) = modulus {
                    let m: Vec<Rational> = m.iter().map(|&c| Rational::from_integer(c.into())).collect();
                    write!(f, ":{}", PolyDisplay(&m))?;
                }
                Ok(())
            }
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::NumberField(m) => write!(f, "Q[x]/({})", PolyDisplay(m)),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix("Q[x]/(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| parse_err("missing ')' in number-field spec"))?;
            return Ok(FieldSpec::NumberField(parse_poly(inner)?));
        }
        if let Some(rest) = s.strip_prefix("p=") {
            let p = rest.trim().parse::<u64>().map_err(|_| parse_err("bad prime"))?;
            return Ok(FieldSpec::Prime(p));
        }
        if let Some(rest) = s.strip_prefix("q=") {
            let (q, modulus) = match rest.split_once(':') {
                Some((q, m)) => (q, Some(m)),
                None => (rest, None),
            };
            let q = q.trim().parse::<u64>().map_err(|_| parse_err("bad field order"))?;
            let (p, k) = prime_power(q).ok_or(FieldError::CompositeCharacteristic(q))?;
            let modulus = modulus
                .map(|m| {
                    parse_poly(m)?
                        .iter()
                        .map(|c| super::rational_mod(c, p))
                        .collect::<Result<Vec<u64>, _>>()
                })
                .transpose()?;
            return Ok(FieldSpec::Extension { p, k, modulus });
        }
        Err(parse_err(alloc::format!("unrecognised field spec '{s}'")))
    }
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Field::new(s.parse()?)
    }
}

impl Field {
    /// Parses an element in the element syntax.
    pub fn parse_element(&self, s: &str) -> Result<Element, FieldError> {
        self.from_poly(&parse_poly(s)?)
    }

    /// Parses a rational number `a` or `a/b` (optionally signed).
    pub fn parse_rational(s: &str) -> Result<Rational, FieldError> {
        let c = parse_poly(s)?;
        match c.len() {
            0 => Ok(Rational::zero()),
            1 => Ok(c[0].clone()),
            _ => Err(parse_err("expected a rational number")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_round_trip() {
        for s in ["0", "5", "-1/2", "x", "-x", "x^2+1", "2*x^2+x+1", "-3/2*x-1/2", "x^3-x^2+7/3"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(format_poly(&p), s);
        }
        let ints = |v: &[i64]| v.iter().map(|&c| Rational::from_integer(c.into())).collect::<Vec<_>>();
        assert_eq!(parse_poly("2x + 3 x^2").unwrap(), ints(&[0, 2, 3]));
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x^").is_err());
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("y").is_err());
    }

    #[test]
    fn spec_round_trip() {
        for s in ["p=7", "q=9:x^2+1", "Q", "Q[x]/(x^2+1)"] {
            let spec: FieldSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        let f: Field = "q=9".parse().unwrap();
        assert_eq!(f.spec().to_string(), "q=9:x^2+1");
        assert!("q=12".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn element_parsing() {
        let f: Field = "p=7".parse().unwrap();
        assert_eq!(f.parse_element("-1").unwrap(), f.from_int(6));
        assert_eq!(f.parse_element("1/2").unwrap(), f.from_int(4));
        assert!(f.parse_element("x").is_err());
        let g: Field = "q=9:x^2+1".parse().unwrap();
        let e = g.parse_element("x^2").unwrap();
        assert_eq!(e.to_string(), "2");
        assert_eq!(g.parse_element("2*x+1").unwrap().index(), Some(1 + 2 * 3));
        let k: Field = "Q[x]/(x^2+1)".parse().unwrap();
        assert_eq!(k.parse_element("x^3").unwrap().to_string(), "-x");
    }
}
