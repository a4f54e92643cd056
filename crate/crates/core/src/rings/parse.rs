//! Ring spec strings and element literals.
//!
//! Rings: `Z`, `GF(p)[x]`, `Z[i]`, `Z_(p)`, `Z[1/S]` (S comma separated, e.g.
//! `Z[1/2,3]`), `Z[x]`. Elements: decimal integers, polynomials such as
//! `x^3+2x+1`, Gaussian integers `a+bi`, fractions `a/b`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{fp, intpoly, Element, RingId, Value};
use crate::error::{Error, Result};
use crate::rings::Gaussian;

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingId::Int => write!(f, "Z"),
            RingId::PolyOverFp(p) => write!(f, "GF({p})[x]"),
            RingId::GaussianInt => write!(f, "Z[i]"),
            RingId::PLocal(p) => write!(f, "Z_({p})"),
            RingId::SInverted(s) => {
                let list: Vec<String> = s.iter().map(u64::to_string).collect();
                write!(f, "Z[1/{}]", list.join(","))
            }
            RingId::IntPoly => write!(f, "Z[x]"),
        }
    }
}

fn parse_prime_list(body: &str, spec: &str) -> Result<Vec<u64>> {
    let body = body.trim().trim_start_matches('{').trim_end_matches('}');
    body.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Error::InvalidRing(spec.to_string())))
        .collect()
}

impl FromStr for RingId {
    type Err = Error;

    fn from_str(spec: &str) -> Result<RingId> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidRing(spec.to_string());
        match s.as_str() {
            "Z" => return Ok(RingId::Int),
            "Z[i]" => return Ok(RingId::GaussianInt),
            "Z[x]" => return Ok(RingId::IntPoly),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(")[x]")) {
            let p = rest.parse::<u64>().map_err(|_| bad())?;
            return RingId::poly_over_fp(p);
        }
        if let Some(rest) = s.strip_prefix("Z_(").and_then(|r| r.strip_suffix(')')) {
            let p = rest.parse::<u64>().map_err(|_| bad())?;
            return RingId::p_local(p);
        }
        if let Some(rest) = s.strip_prefix("Z[1/").and_then(|r| r.strip_suffix(']')) {
            return RingId::s_inverted(parse_prime_list(rest, spec)?);
        }
        Err(bad())
    }
}

/// Writes `sum c_i v^i` from the top degree down, with signed coefficients.
fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt], var: &str) -> fmt::Result {
    if coeffs.iter().all(Zero::is_zero) {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let magnitude = c.abs();
        if c.is_negative() {
            write!(f, "-")?;
        } else if !first {
            write!(f, "+")?;
        }
        first = false;
        match i {
            0 => write!(f, "{magnitude}")?,
            _ => {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}")?;
                }
                write!(f, "{var}")?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
    }
    Ok(())
}

fn write_gaussian(f: &mut fmt::Formatter<'_>, z: &Gaussian) -> fmt::Result {
    if z.im.is_zero() {
        return write!(f, "{}", z.re);
    }
    if !z.re.is_zero() {
        write!(f, "{}", z.re)?;
        if z.im.is_positive() {
            write!(f, "+")?;
        }
    }
    if z.im.is_negative() {
        write!(f, "-")?;
    }
    let magnitude = z.im.abs();
    if !magnitude.is_one() {
        write!(f, "{magnitude}")?;
    }
    write!(f, "i")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Value::Int(n) => write!(f, "{n}"),
            Value::Poly(cs) => {
                let cs: Vec<BigInt> = cs.iter().map(|&c| BigInt::from(c)).collect();
                write_poly(f, &cs, "x")
            }
            Value::Gauss(z) => write_gaussian(f, z),
            Value::Frac(n, d) if d.is_one() => write!(f, "{n}"),
            Value::Frac(n, d) => write!(f, "{n}/{d}"),
            Value::IntPoly(cs) => write_poly(f, cs, "x"),
        }
    }
}

/// Parses `c0 + c1 v + c2 v^2 + ...` in any term order into little-endian
/// integer coefficients. Accepts `*` between coefficient and variable.
fn parse_poly(src: &str, var: char, max_degree: usize) -> std::result::Result<Vec<BigInt>, String> {
    let s: String = src.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if s.is_empty() {
        return Err("empty literal".into());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !s[..i].ends_with('^') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut coeffs: Vec<BigInt> = Vec::new();
    for term in terms {
        let (negative, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term.strip_prefix('+').unwrap_or(term)),
        };
        if body.is_empty() {
            return Err(format!("dangling sign in `{src}`"));
        }
        let (coeff, degree) = match body.find(var) {
            None => (
                body.parse::<BigInt>().map_err(|_| format!("bad term `{term}`"))?,
                0usize,
            ),
            Some(pos) => {
                let head = &body[..pos];
                let tail = &body[pos + var.len_utf8()..];
                let coeff = if head.is_empty() {
                    BigInt::one()
                } else {
                    head.parse::<BigInt>().map_err(|_| format!("bad coefficient in `{term}`"))?
                };
                let degree = match tail.strip_prefix('^') {
                    None if tail.is_empty() => 1,
                    None => return Err(format!("bad term `{term}`")),
                    Some(e) => e.parse::<usize>().map_err(|_| format!("bad exponent in `{term}`"))?,
                };
                (coeff, degree)
            }
        };
        if degree > max_degree {
            return Err(format!("degree {degree} exceeds {max_degree}"));
        }
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, BigInt::zero());
        }
        coeffs[degree] += if negative { -coeff } else { coeff };
    }
    Ok(intpoly::trim(coeffs))
}

impl Element {
    /// Parses a literal in the given ring.
    pub fn parse(ring: &RingId, literal: &str) -> Result<Element> {
        let invalid = |reason: String| Error::InvalidElement {
            literal: literal.to_string(),
            ring: ring.to_string(),
            reason,
        };
        let limits = super::Limits::DEFAULT;
        let element = match ring {
            RingId::Int => {
                let n = literal.trim().parse::<BigInt>().map_err(|e| invalid(e.to_string()))?;
                Element::from_parts(ring.clone(), Value::Int(n))
            }
            RingId::PolyOverFp(p) => {
                let cs = parse_poly(literal, 'x', limits.max_degree).map_err(invalid)?;
                let pb = BigInt::from(*p);
                let reduced = cs
                    .iter()
                    .map(|c| c.mod_floor(&pb).to_u64().expect("reduced"))
                    .collect();
                Element::from_parts(ring.clone(), Value::Poly(fp::trim(reduced)))
            }
            RingId::GaussianInt => {
                let cs = parse_poly(literal, 'i', 1).map_err(invalid)?;
                let re = cs.first().cloned().unwrap_or_default();
                let im = cs.get(1).cloned().unwrap_or_default();
                Element::from_parts(ring.clone(), Value::Gauss(Gaussian::new(re, im)))
            }
            RingId::PLocal(_) | RingId::SInverted(_) => {
                let t = literal.trim();
                let (num, den) = match t.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (t, "1"),
                };
                let num = num.parse::<BigInt>().map_err(|e| invalid(e.to_string()))?;
                let den = den.parse::<BigInt>().map_err(|e| invalid(e.to_string()))?;
                Element::fraction(ring, num, den).map_err(|e| invalid(e.to_string()))?
            }
            RingId::IntPoly => {
                let cs = parse_poly(literal, 'x', limits.max_degree).map_err(invalid)?;
                Element::from_parts(ring.clone(), Value::IntPoly(cs))
            }
        };
        element.check_limits(&limits)?;
        Ok(element)
    }
}
