//! Exact arithmetic over the supported integral domains behind one uniform
//! element type.
//!
//! Every ring except `Z[x]` is a principal ideal domain with a Euclidean (or
//! valuation-theoretic) gcd, so Bezout coefficients and prime factorizations
//! are available. `Z[x]` only supports two-generator coprimality.

pub(crate) mod fp;
pub(crate) mod gauss;
pub(crate) mod int;
pub(crate) mod intpoly;
mod parse;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::enumeration::PrimeClass;
use crate::error::{Error, Result};

pub use gauss::Gaussian;

/// Largest prime accepted as the characteristic of `GF(p)[x]` or as the
/// localized prime of `Z_(p)` and `Z[1/S]`.
pub const MAX_RING_PRIME: u64 = (1 << 31) - 1;

/// Representation bounds enforced at operation entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_int_bits: u64,
    pub max_degree: usize,
}

impl Limits {
    pub const DEFAULT: Limits = Limits {
        max_int_bits: 256,
        max_degree: 64,
    };
}

impl Default for Limits {
    fn default() -> Self {
        Limits::DEFAULT
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingId {
    Int,
    PolyOverFp(u64),
    GaussianInt,
    PLocal(u64),
    SInverted(Arc<[u64]>),
    IntPoly,
}

/// Cardinality of a countable set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinal {
    Finite(u64),
    CountablyInfinite,
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::CountablyInfinite => write!(f, "countably infinite"),
        }
    }
}

impl Serialize for Cardinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cardinal::Finite(n) => s.serialize_u64(*n),
            Cardinal::CountablyInfinite => s.serialize_str("countably-infinite"),
        }
    }
}

fn check_prime(p: u64) -> Result<u64> {
    if int::is_prime_u64(p) && p <= MAX_RING_PRIME {
        Ok(p)
    } else {
        Err(Error::InvalidRing(format!("{p} is not a prime below 2^31")))
    }
}

impl RingId {
    pub fn poly_over_fp(p: u64) -> Result<Self> {
        check_prime(p).map(RingId::PolyOverFp)
    }

    pub fn p_local(p: u64) -> Result<Self> {
        check_prime(p).map(RingId::PLocal)
    }

    pub fn s_inverted(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set: Vec<u64> = primes.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidRing("Z[1/S] needs a nonempty S".into()));
        }
        for &q in &set {
            check_prime(q)?;
        }
        set.sort_unstable();
        let before = set.len();
        set.dedup();
        if set.len() != before {
            return Err(Error::InvalidRing("Z[1/S] primes must be distinct".into()));
        }
        Ok(RingId::SInverted(set.into()))
    }

    /// All supported rings except `Z[x]` are principal ideal domains.
    pub fn is_pid(&self) -> bool {
        !matches!(self, RingId::IntPoly)
    }

    pub fn require_pid(&self, op: &'static str) -> Result<()> {
        if self.is_pid() {
            Ok(())
        } else {
            Err(self.unsupported(op))
        }
    }

    pub(crate) fn unsupported(&self, op: &'static str) -> Error {
        Error::UnsupportedForRing {
            op,
            ring: self.to_string(),
        }
    }

    pub fn one(&self) -> Element {
        self.from_i64(1)
    }

    /// Image of an ordinary integer under the canonical map `Z -> R`.
    pub fn from_i64(&self, n: i64) -> Element {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(&self, n: BigInt) -> Element {
        let value = match self {
            RingId::Int => Value::Int(n),
            RingId::PolyOverFp(p) => {
                let c = n.mod_floor(&BigInt::from(*p)).to_u64().unwrap();
                Value::Poly(fp::trim(vec![c]))
            }
            RingId::GaussianInt => Value::Gauss(Gaussian::new(n, 0)),
            RingId::PLocal(_) | RingId::SInverted(_) => Value::Frac(n, BigInt::one()),
            RingId::IntPoly => Value::IntPoly(intpoly::trim(vec![n])),
        };
        Element {
            ring: self.clone(),
            value,
        }
    }

    /// The localized primes of `Z[1/S]`, empty for every other ring.
    pub fn inverted_primes(&self) -> &[u64] {
        match self {
            RingId::SInverted(s) => s,
            _ => &[],
        }
    }

    pub fn units_cardinality(&self) -> Cardinal {
        match self {
            RingId::Int | RingId::IntPoly => Cardinal::Finite(2),
            RingId::PolyOverFp(p) => Cardinal::Finite(p - 1),
            RingId::GaussianInt => Cardinal::Finite(4),
            RingId::PLocal(_) | RingId::SInverted(_) => Cardinal::CountablyInfinite,
        }
    }

    /// Every unit, in enumeration order, when the unit group is finite.
    pub fn list_units(&self) -> Option<Vec<Element>> {
        let values = match self {
            RingId::Int => vec![Value::Int(1.into()), Value::Int((-1).into())],
            RingId::IntPoly => vec![
                Value::IntPoly(vec![1.into()]),
                Value::IntPoly(vec![(-1).into()]),
            ],
            RingId::PolyOverFp(p) => (1..*p).map(|c| Value::Poly(vec![c])).collect(),
            RingId::GaussianInt => gauss::units().into_iter().map(Value::Gauss).collect(),
            RingId::PLocal(_) | RingId::SInverted(_) => return None,
        };
        Some(
            values
                .into_iter()
                .map(|value| Element {
                    ring: self.clone(),
                    value,
                })
                .collect(),
        )
    }

    pub fn primes_cardinality(&self) -> Result<Cardinal> {
        match self {
            RingId::PLocal(_) => Ok(Cardinal::Finite(1)),
            RingId::IntPoly => Err(self.unsupported("primes_cardinality")),
            _ => Ok(Cardinal::CountablyInfinite),
        }
    }
}

/// Ring-specific exact representation of an element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Int(BigInt),
    /// Little-endian coefficients over F_p, trimmed.
    Poly(Vec<u64>),
    Gauss(Gaussian),
    /// Reduced fraction with positive denominator.
    Frac(BigInt, BigInt),
    /// Little-endian integer coefficients, trimmed.
    IntPoly(Vec<BigInt>),
}

/// An exact value tagged with the ring it lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    ring: RingId,
    value: Value,
}

/// `x = unit * prod prime^exponent`, primes sorted by enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub unit: Element,
    pub factors: Vec<(PrimeClass, u32)>,
}

impl UnitDecomposition {
    pub fn recompose(&self) -> Result<Element> {
        let mut acc = self.unit.clone();
        for (p, e) in &self.factors {
            acc = acc.mul(&p.representative().pow(*e))?;
        }
        Ok(acc)
    }
}

impl Element {
    pub fn ring(&self) -> &RingId {
        &self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn int(n: impl Into<BigInt>) -> Element {
        Element {
            ring: RingId::Int,
            value: Value::Int(n.into()),
        }
    }

    /// Polynomial over F_p from little-endian coefficients (reduced mod p).
    pub fn poly_fp(ring: &RingId, coeffs: &[i64]) -> Result<Element> {
        let RingId::PolyOverFp(p) = ring else {
            return Err(ring.unsupported("poly_fp"));
        };
        let p = *p as i64;
        let cs = coeffs.iter().map(|c| c.rem_euclid(p) as u64).collect();
        Ok(Element {
            ring: ring.clone(),
            value: Value::Poly(fp::trim(cs)),
        })
    }

    pub fn gaussian(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Element {
        Element {
            ring: RingId::GaussianInt,
            value: Value::Gauss(Gaussian::new(re, im)),
        }
    }

    /// Reduced fraction `num/den` in `Z_(p)` or `Z[1/S]`; rejects
    /// denominators the ring does not invert.
    pub fn fraction(ring: &RingId, num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Element> {
        let (num, den) = (num.into(), den.into());
        let not_in = |reason: String| Error::NotInRing {
            ring: ring.to_string(),
            reason,
        };
        if den.is_zero() {
            return Err(not_in("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (&num / &g, &den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        match ring {
            RingId::PLocal(p) => {
                if (&den % BigInt::from(*p)).is_zero() {
                    return Err(not_in(format!("{p} divides the denominator")));
                }
            }
            RingId::SInverted(s) => {
                if !int::strip_primes(&den, s).1.is_one() {
                    return Err(not_in("denominator has a prime outside S".into()));
                }
            }
            RingId::Int | RingId::IntPoly | RingId::GaussianInt | RingId::PolyOverFp(_) => {
                if !den.is_one() {
                    return Err(not_in("fractions need Z_(p) or Z[1/S]".into()));
                }
                return Ok(ring.from_bigint(num));
            }
        }
        Ok(Element {
            ring: ring.clone(),
            value: Value::Frac(num, den),
        })
    }

    pub fn int_poly(coeffs: &[i64]) -> Element {
        Element {
            ring: RingId::IntPoly,
            value: Value::IntPoly(intpoly::trim(coeffs.iter().map(|&c| c.into()).collect())),
        }
    }

    pub(crate) fn from_parts(ring: RingId, value: Value) -> Element {
        Element { ring, value }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Int(n) | Value::Frac(n, _) => n.is_zero(),
            Value::Poly(f) => f.is_empty(),
            Value::Gauss(z) => z.is_zero(),
            Value::IntPoly(f) => f.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    pub(crate) fn require_nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::ZeroElement)
        } else {
            Ok(())
        }
    }

    fn same_ring(&self, other: &Element) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            })
        }
    }

    /// Rejects representations beyond the configured bit and degree limits.
    pub fn check_limits(&self, limits: &Limits) -> Result<()> {
        let too_big = |n: &BigInt| n.bits() > limits.max_int_bits;
        let bad = match &self.value {
            Value::Int(n) => too_big(n),
            Value::Frac(n, d) => too_big(n) || too_big(d),
            Value::Gauss(z) => too_big(&z.re) || too_big(&z.im),
            Value::Poly(f) => f.len() > limits.max_degree + 1,
            Value::IntPoly(f) => f.len() > limits.max_degree + 1 || f.iter().any(too_big),
        };
        if bad {
            Err(Error::SizeLimit(format!(
                "{self} exceeds {} bits / degree {}",
                limits.max_int_bits, limits.max_degree
            )))
        } else {
            Ok(())
        }
    }

    fn entry_checks(&self) -> Result<()> {
        self.require_nonzero()?;
        self.check_limits(&Limits::DEFAULT)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_ring(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a + b),
            (Value::Poly(a), Value::Poly(b)) => Value::Poly(fp::add(a, b, self.char_p())),
            (Value::Gauss(a), Value::Gauss(b)) => Value::Gauss(a.add(b)),
            (Value::Frac(an, ad), Value::Frac(bn, bd)) => {
                return Element::fraction(&self.ring, an * bd + bn * ad, ad * bd)
            }
            (Value::IntPoly(a), Value::IntPoly(b)) => Value::IntPoly(intpoly::add(a, b)),
            _ => unreachable!("ring tags agree"),
        };
        Ok(Element::from_parts(self.ring.clone(), value))
    }

    pub fn neg(&self) -> Element {
        let value = match &self.value {
            Value::Int(a) => Value::Int(-a),
            Value::Poly(a) => Value::Poly(fp::neg(a, self.char_p())),
            Value::Gauss(a) => Value::Gauss(a.neg()),
            Value::Frac(n, d) => Value::Frac(-n, d.clone()),
            Value::IntPoly(a) => Value::IntPoly(intpoly::neg(a)),
        };
        Element::from_parts(self.ring.clone(), value)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.same_ring(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a * b),
            (Value::Poly(a), Value::Poly(b)) => Value::Poly(fp::mul(a, b, self.char_p())),
            (Value::Gauss(a), Value::Gauss(b)) => Value::Gauss(a.mul(b)),
            (Value::Frac(an, ad), Value::Frac(bn, bd)) => {
                return Element::fraction(&self.ring, an * bn, ad * bd)
            }
            (Value::IntPoly(a), Value::IntPoly(b)) => Value::IntPoly(intpoly::mul(a, b)),
            _ => unreachable!("ring tags agree"),
        };
        Ok(Element::from_parts(self.ring.clone(), value))
    }

    pub fn pow(&self, mut e: u32) -> Element {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// `self / divisor` when the quotient exists in the ring.
    pub fn exact_div(&self, divisor: &Element) -> Result<Option<Element>> {
        self.same_ring(divisor)?;
        divisor.require_nonzero()?;
        let value = match (&self.value, &divisor.value) {
            (Value::Int(a), Value::Int(b)) => {
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(Value::Int(q))
            }
            (Value::Poly(a), Value::Poly(b)) => {
                let (q, r) = fp::divrem(a, b, self.char_p());
                r.is_empty().then_some(Value::Poly(q))
            }
            (Value::Gauss(a), Value::Gauss(b)) => a.exact_div(b).map(Value::Gauss),
            (Value::Frac(an, ad), Value::Frac(bn, bd)) => {
                return Ok(Element::fraction(&self.ring, an * bd, ad * bn).ok())
            }
            (Value::IntPoly(a), Value::IntPoly(b)) => intpoly::exact_div(a, b).map(Value::IntPoly),
            _ => unreachable!("ring tags agree"),
        };
        Ok(value.map(|v| Element::from_parts(self.ring.clone(), v)))
    }

    pub fn divides(&self, other: &Element) -> Result<bool> {
        Ok(other.exact_div(self)?.is_some())
    }

    fn char_p(&self) -> u64 {
        match self.ring {
            RingId::PolyOverFp(p) => p,
            _ => unreachable!("only polynomial rings over F_p have a characteristic here"),
        }
    }

    /// Whether `self` divides 1.
    pub fn is_unit(&self) -> Result<bool> {
        self.require_nonzero()?;
        Ok(match (&self.ring, &self.value) {
            (_, Value::Int(n)) => n.abs().is_one(),
            (_, Value::Poly(f)) => f.len() == 1,
            (_, Value::Gauss(z)) => z.is_unit(),
            (RingId::PLocal(p), Value::Frac(n, _)) => !(n % BigInt::from(*p)).is_zero(),
            (RingId::SInverted(s), Value::Frac(n, _)) => int::strip_primes(n, s).1.abs().is_one(),
            (_, Value::IntPoly(f)) => f.len() == 1 && f[0].abs().is_one(),
            _ => unreachable!("fractions only live in localizations"),
        })
    }

    /// `(u, canonical)` with `self = u * canonical` and `u` a unit.
    pub fn canonical_associate(&self) -> Result<(Element, Element)> {
        self.require_nonzero()?;
        let ring = self.ring.clone();
        let pair = |u: Value, c: Value| {
            (
                Element::from_parts(ring.clone(), u),
                Element::from_parts(ring.clone(), c),
            )
        };
        Ok(match (&self.ring, &self.value) {
            (_, Value::Int(n)) => {
                let sign = if n.is_negative() { -1 } else { 1 };
                pair(Value::Int(sign.into()), Value::Int(n.abs()))
            }
            (RingId::PolyOverFp(p), Value::Poly(f)) => {
                let (lead, m) = fp::monic(f, *p);
                pair(Value::Poly(vec![lead]), Value::Poly(m))
            }
            (_, Value::Gauss(z)) => {
                let (k, c) = z.canonical();
                pair(Value::Gauss(gauss::unit_power((4 - k) % 4)), Value::Gauss(c))
            }
            (RingId::PLocal(p), Value::Frac(n, d)) => {
                let (v, m) = int::valuation(n, *p);
                let pv = num_traits::pow(BigInt::from(*p), v as usize);
                let unit = Element::fraction(&ring, m, d.clone())?;
                (unit, Element::from_parts(ring.clone(), Value::Frac(pv, BigInt::one())))
            }
            (RingId::SInverted(s), Value::Frac(n, d)) => {
                let (spart, m) = int::strip_primes(n, s);
                let sign = if m.is_negative() { -1 } else { 1 };
                let unit = Element::fraction(&ring, spart * sign, d.clone())?;
                (unit, Element::from_parts(ring.clone(), Value::Frac(m.abs(), BigInt::one())))
            }
            (_, Value::IntPoly(f)) => {
                let negative = f.last().unwrap().is_negative();
                let (u, c) = if negative {
                    (-1, intpoly::neg(f))
                } else {
                    (1, f.clone())
                };
                pair(Value::IntPoly(vec![u.into()]), Value::IntPoly(c))
            }
            _ => unreachable!("fractions only live in localizations"),
        })
    }

    pub fn is_canonical(&self) -> Result<bool> {
        Ok(self.canonical_associate()?.1 == *self)
    }

    /// `(g, x, y)` with `g = x*self + y*other` and `g` the canonical gcd.
    pub fn gcd_bezout(&self, other: &Element) -> Result<(Element, Element, Element)> {
        self.same_ring(other)?;
        self.ring.require_pid("gcd_bezout")?;
        self.entry_checks()?;
        other.entry_checks()?;
        let ring = self.ring.clone();
        let el = |v: Value| Element::from_parts(ring.clone(), v);
        Ok(match (&self.ring, &self.value, &other.value) {
            (_, Value::Int(a), Value::Int(b)) => {
                let (g, x, y) = int::ext_gcd(a, b);
                (el(Value::Int(g)), el(Value::Int(x)), el(Value::Int(y)))
            }
            (RingId::PolyOverFp(p), Value::Poly(a), Value::Poly(b)) => {
                let (g, x, y) = fp::ext_gcd(a, b, *p);
                (el(Value::Poly(g)), el(Value::Poly(x)), el(Value::Poly(y)))
            }
            (_, Value::Gauss(a), Value::Gauss(b)) => {
                let (g, x, y) = gauss::ext_gcd(a, b);
                (el(Value::Gauss(g)), el(Value::Gauss(x)), el(Value::Gauss(y)))
            }
            (RingId::PLocal(p), Value::Frac(an, ad), Value::Frac(bn, bd)) => {
                let (va, ma) = int::valuation(an, *p);
                let (vb, mb) = int::valuation(bn, *p);
                let zero = ring.from_i64(0);
                if va <= vb {
                    let g = num_traits::pow(BigInt::from(*p), va as usize);
                    let x = Element::fraction(&ring, ad.clone(), ma)?;
                    (el(Value::Frac(g, BigInt::one())), x, zero)
                } else {
                    let g = num_traits::pow(BigInt::from(*p), vb as usize);
                    let y = Element::fraction(&ring, bd.clone(), mb)?;
                    (el(Value::Frac(g, BigInt::one())), zero, y)
                }
            }
            (RingId::SInverted(s), Value::Frac(an, ad), Value::Frac(bn, bd)) => {
                let (g0, x0, y0) = int::ext_gcd(an, bn);
                let (spart, g) = int::strip_primes(&g0, s);
                let x = Element::fraction(&ring, x0 * ad, spart.clone())?;
                let y = Element::fraction(&ring, y0 * bd, spart)?;
                (el(Value::Frac(g, BigInt::one())), x, y)
            }
            _ => unreachable!("ring tags agree"),
        })
    }

    /// Whether `<self> + <other>` is the whole ring.
    pub fn coprime(&self, other: &Element) -> Result<bool> {
        self.same_ring(other)?;
        self.entry_checks()?;
        other.entry_checks()?;
        Ok(match (&self.ring, &self.value, &other.value) {
            (_, Value::Int(a), Value::Int(b)) => a.gcd(b).is_one(),
            (RingId::PolyOverFp(p), Value::Poly(a), Value::Poly(b)) => {
                fp::is_unit(&fp::gcd(a, b, *p))
            }
            (_, Value::Gauss(a), Value::Gauss(b)) => gauss::ext_gcd(a, b).0.is_unit(),
            (RingId::PLocal(p), Value::Frac(a, _), Value::Frac(b, _)) => {
                let p = BigInt::from(*p);
                !((a % &p).is_zero() && (b % &p).is_zero())
            }
            (RingId::SInverted(s), Value::Frac(a, _), Value::Frac(b, _)) => {
                int::strip_primes(&a.gcd(b), s).1.is_one()
            }
            (_, Value::IntPoly(a), Value::IntPoly(b)) => intpoly::coprime(a, b)?,
            _ => unreachable!("ring tags agree"),
        })
    }

    /// Prime factorization up to a unit.
    pub fn factor(&self) -> Result<UnitDecomposition> {
        self.ring.require_pid("factor")?;
        self.entry_checks()?;
        let ring = self.ring.clone();
        let el = |v: Value| Element::from_parts(ring.clone(), v);
        let prime = |v: Value| PrimeClass::from_canonical(el(v));
        let biguint_to_int = |n: BigUint| BigInt::from_biguint(Sign::Plus, n);
        let (unit, factors) = match (&self.ring, &self.value) {
            (_, Value::Int(n)) => {
                let sign = if n.is_negative() { -1 } else { 1 };
                let fs = if n.abs().is_one() {
                    Vec::new()
                } else {
                    int::factor_biguint(n.magnitude())?
                };
                let fs = fs
                    .into_iter()
                    .map(|(q, e)| (prime(Value::Int(biguint_to_int(q))), e))
                    .collect();
                (el(Value::Int(sign.into())), fs)
            }
            (RingId::PolyOverFp(p), Value::Poly(f)) => {
                let (lead, fs) = fp::factor(f, *p);
                let fs = fs.into_iter().map(|(g, e)| (prime(Value::Poly(g)), e)).collect();
                (el(Value::Poly(vec![lead])), fs)
            }
            (_, Value::Gauss(z)) => {
                let (u, fs) = gauss::factor(z)?;
                let fs = fs.into_iter().map(|(g, e)| (prime(Value::Gauss(g)), e)).collect();
                (el(Value::Gauss(u)), fs)
            }
            (RingId::PLocal(p), Value::Frac(n, d)) => {
                let (v, m) = int::valuation(n, *p);
                let unit = Element::fraction(&ring, m, d.clone())?;
                let fs = if v > 0 {
                    vec![(prime(Value::Frac(BigInt::from(*p), BigInt::one())), v)]
                } else {
                    Vec::new()
                };
                (unit, fs)
            }
            (RingId::SInverted(s), Value::Frac(n, d)) => {
                let (spart, m) = int::strip_primes(n, s);
                let sign = if m.is_negative() { -1 } else { 1 };
                let unit = Element::fraction(&ring, spart * sign, d.clone())?;
                let fs = if m.abs().is_one() {
                    Vec::new()
                } else {
                    int::factor_biguint(m.magnitude())?
                };
                let fs = fs
                    .into_iter()
                    .map(|(q, e)| (prime(Value::Frac(biguint_to_int(q), BigInt::one())), e))
                    .collect();
                (unit, fs)
            }
            _ => unreachable!("Z[x] rejected above"),
        };
        Ok(UnitDecomposition { unit, factors })
    }

    /// Total order used by windows and prime enumeration: height first, then
    /// a fixed ring-specific tiebreak.
    pub fn cmp_enum(&self, other: &Element) -> Ordering {
        match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => (a.magnitude(), a.is_negative())
                .cmp(&(b.magnitude(), b.is_negative())),
            (Value::Poly(a), Value::Poly(b)) => fp::cmp(a, b),
            (Value::Gauss(a), Value::Gauss(b)) => a.cmp_enum(b),
            (Value::Frac(an, ad), Value::Frac(bn, bd)) => {
                let key = |n: &BigInt, d: &BigInt| {
                    let h = n.magnitude().max(d.magnitude()).clone();
                    (h, d.clone(), n.magnitude().clone(), n.is_negative())
                };
                key(an, ad).cmp(&key(bn, bd))
            }
            (Value::IntPoly(a), Value::IntPoly(b)) => {
                let key = |f: &[BigInt]| {
                    let coeffs: Vec<_> = f
                        .iter()
                        .rev()
                        .map(|c| (c.magnitude().clone(), c.is_negative()))
                        .collect();
                    (intpoly_height(f), f.len(), coeffs)
                };
                key(a).cmp(&key(b))
            }
            _ => self.ring.cmp(&other.ring),
        }
    }
}

/// `max_i (i + 1) |c_i|`.
pub(crate) fn intpoly_height(f: &[BigInt]) -> BigUint {
    f.iter()
        .enumerate()
        .map(|(i, c)| c.magnitude() * BigUint::from(i + 1))
        .max()
        .unwrap_or_default()
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring
            .cmp(&other.ring)
            .then_with(|| self.cmp_enum(other))
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for RingId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Free-function forms of the ring operations.
pub fn gcd_bezout(a: &Element, b: &Element) -> Result<(Element, Element, Element)> {
    a.gcd_bezout(b)
}

pub fn is_unit(x: &Element) -> Result<bool> {
    x.is_unit()
}

pub fn canonical_associate(x: &Element) -> Result<(Element, Element)> {
    x.canonical_associate()
}

pub fn factor(x: &Element) -> Result<UnitDecomposition> {
    x.factor()
}

pub fn coprime(k: &Element, s: &Element) -> Result<bool> {
    k.coprime(s)
}

pub fn units_cardinality(ring: &RingId) -> Cardinal {
    ring.units_cardinality()
}

pub fn list_units(ring: &RingId) -> Option<Vec<Element>> {
    ring.list_units()
}

pub fn primes_cardinality(ring: &RingId) -> Result<Cardinal> {
    ring.primes_cardinality()
}

#[cfg(test)]
mod tests;
