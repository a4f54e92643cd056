//! Height-ordered enumeration of nonzero elements and of prime classes.
//!
//! Windows are the finite stand-ins on which every exhaustive check runs.
//! The order is total and deterministic: `(height, ring tiebreak)`, which is
//! exactly [`Element::cmp_enum`]. Prime classes are indexed by the position
//! of their canonical representative in that same order.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rings::{fp, gauss, int, Element, Gaussian, RingId, Value};
use crate::topology::Support;

/// Upper bound on the number of elements a single window may hold.
pub const MAX_WINDOW_ELEMENTS: u64 = 4_000_000;

/// Largest prime-field search the index computations will run.
const MAX_POLY_SCAN: u64 = 1 << 24;

/// An associate class of primes, stored as its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeClass {
    representative: Element,
}

impl PrimeClass {
    pub(crate) fn from_canonical(representative: Element) -> PrimeClass {
        PrimeClass { representative }
    }

    /// The class of a prime element; errors if `x` is not prime.
    pub fn of(x: &Element) -> Result<PrimeClass> {
        let d = x.factor()?;
        match d.factors.as_slice() {
            [(class, 1)] => Ok(class.clone()),
            _ => Err(Error::NotInRing {
                ring: x.ring().to_string(),
                reason: format!("{x} is not prime"),
            }),
        }
    }

    pub fn representative(&self) -> &Element {
        &self.representative
    }

    pub fn ring(&self) -> &RingId {
        self.representative.ring()
    }

    /// Position of this class in the prime enumeration of its ring.
    pub fn index(&self) -> Result<u64> {
        prime_index(&self.representative)
    }
}

impl PartialOrd for PrimeClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.representative.cmp(&other.representative)
    }
}

impl Serialize for PrimeClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.representative)
    }
}

pub fn height(x: &Element) -> Result<BigUint> {
    x.require_nonzero()?;
    Ok(match (x.ring(), x.value()) {
        (_, Value::Int(n)) => n.magnitude().clone(),
        (RingId::PolyOverFp(p), Value::Poly(f)) => fp::encode(f, *p),
        (_, Value::Gauss(z)) => z.norm().magnitude().clone(),
        (_, Value::Frac(n, d)) => n.magnitude().max(d.magnitude()).clone(),
        (_, Value::IntPoly(f)) => crate::rings::intpoly_height(f),
        _ => unreachable!("polynomials over F_p carry their prime"),
    })
}

/// All nonzero elements up to a height bound, in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub ring: RingId,
    pub bound: u64,
    pub elements: Vec<Element>,
}

impl Window {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The sub-window of elements with height at most `bound` (units of
    /// finite unit groups are always kept).
    pub fn restrict(&self, bound: u64) -> Window {
        let limit = BigUint::from(bound);
        let elements = self
            .elements
            .iter()
            .filter(|x| height(x).map(|h| h <= limit).unwrap_or(false) || is_listed_unit(x))
            .cloned()
            .collect();
        Window {
            ring: self.ring.clone(),
            bound,
            elements,
        }
    }
}

fn is_listed_unit(x: &Element) -> bool {
    matches!(x.ring(), RingId::PolyOverFp(_)) && x.is_unit().unwrap_or(false)
}

fn estimated_size(ring: &RingId, bound: u64) -> Option<u64> {
    let b = bound;
    match ring {
        RingId::Int => b.checked_mul(2),
        RingId::PolyOverFp(p) => Some(b.max(p - 1)),
        RingId::GaussianInt => b.checked_mul(4),
        RingId::PLocal(_) | RingId::SInverted(_) => b.checked_mul(b)?.checked_mul(2),
        RingId::IntPoly => (0..b).try_fold(1u64, |acc, i| {
            acc.checked_mul(2 * (b / (i + 1)) + 1)
        }),
    }
}

pub fn enumerate_elements(ring: &RingId, bound: u64) -> Result<Window> {
    if bound == 0 {
        return Err(Error::SizeLimit("window bound must be positive".into()));
    }
    match estimated_size(ring, bound) {
        Some(n) if n <= MAX_WINDOW_ELEMENTS => {}
        _ => {
            return Err(Error::SizeLimit(format!(
                "window of {ring} at bound {bound} exceeds {MAX_WINDOW_ELEMENTS} elements"
            )))
        }
    }
    let el = |v: Value| Element::from_parts(ring.clone(), v);
    let mut elements: Vec<Element> = match ring {
        RingId::Int => (1..=bound as i64)
            .flat_map(|n| [n, -n])
            .map(|n| el(Value::Int(n.into())))
            .collect(),
        RingId::PolyOverFp(p) => {
            let top = bound.max(p - 1);
            (1..=top)
                .filter(|&n| n <= bound || n < *p)
                .map(|n| el(Value::Poly(fp::decode(n, *p))))
                .collect()
        }
        RingId::GaussianInt => {
            let r = num_integer::Roots::sqrt(&bound) as i64;
            let mut out = Vec::new();
            for a in -r..=r {
                for b in -r..=r {
                    let n = (a * a + b * b) as u64;
                    if n > 0 && n <= bound {
                        out.push(el(Value::Gauss(Gaussian::new(a, b))));
                    }
                }
            }
            out
        }
        RingId::PLocal(_) | RingId::SInverted(_) => {
            let mut out = Vec::new();
            for den in 1..=bound as i64 {
                if Element::fraction(ring, 1, den).is_err() {
                    continue;
                }
                for num in 1..=bound as i64 {
                    if num.gcd(&den) != 1 {
                        continue;
                    }
                    for n in [num, -num] {
                        out.push(el(Value::Frac(n.into(), den.into())));
                    }
                }
            }
            out
        }
        RingId::IntPoly => {
            let mut out = Vec::new();
            let mut coeffs = Vec::new();
            int_poly_box(bound, &mut coeffs, &mut out);
            out.into_iter()
                .map(|cs| el(Value::IntPoly(cs)))
                .collect()
        }
    };
    elements.sort_by(|a, b| a.cmp_enum(b));
    Ok(Window {
        ring: ring.clone(),
        bound,
        elements,
    })
}

fn int_poly_box(bound: u64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<BigInt>>) {
    let i = prefix.len() as u64;
    let trimmed = crate::rings::intpoly::trim(prefix.iter().map(|&c| c.into()).collect());
    if !trimmed.is_empty() && trimmed.len() == prefix.len() {
        out.push(trimmed);
    }
    if i >= bound {
        return;
    }
    let c = (bound / (i + 1)) as i64;
    for v in -c..=c {
        prefix.push(v);
        int_poly_box(bound, prefix, out);
        prefix.pop();
    }
}

fn unsupported(ring: &RingId, op: &'static str) -> Error {
    Error::UnsupportedForRing {
        op,
        ring: ring.to_string(),
    }
}

fn int_class(ring: &RingId, q: u64) -> PrimeClass {
    let value = match ring {
        RingId::Int => Value::Int(q.into()),
        _ => Value::Frac(q.into(), BigInt::one()),
    };
    PrimeClass::from_canonical(Element::from_parts(ring.clone(), value))
}

/// Canonical Gaussian primes of norm at most `limit`, in enumeration order.
fn gaussian_primes_up_to(limit: u64) -> Vec<Gaussian> {
    let mut out = Vec::new();
    for q in int::primes_up_to(limit) {
        match q % 4 {
            3 => {
                if q.checked_mul(q).is_some_and(|n| n <= limit) {
                    out.push(Gaussian::new(q, 0));
                }
            }
            _ => out.extend(gauss::primes_over(&BigUint::from(q))),
        }
    }
    out.sort_by(|a, b| a.cmp_enum(b));
    out
}

/// The first `count` prime classes, in index order.
pub fn enumerate_prime_classes(ring: &RingId, count: u64) -> Result<Vec<PrimeClass>> {
    let el = |v: Value| PrimeClass::from_canonical(Element::from_parts(ring.clone(), v));
    match ring {
        RingId::IntPoly => Err(unsupported(ring, "enumerate_prime_classes")),
        RingId::PLocal(p) => {
            if count > 1 {
                return Err(Error::IndexBeyondFinitePrimes {
                    index: count - 1,
                    count: 1,
                    ring: ring.to_string(),
                });
            }
            Ok((0..count)
                .map(|_| el(Value::Frac((*p).into(), BigInt::one())))
                .collect())
        }
        RingId::Int | RingId::SInverted(_) => Ok(int::primes_excluding(ring.inverted_primes())
            .take(count as usize)
            .map(|q| int_class(ring, q))
            .collect()),
        RingId::PolyOverFp(p) => {
            let mut out = Vec::new();
            let mut d = 1usize;
            while (out.len() as u64) < count {
                let monics = fp::monics_of_degree(*p, d).ok_or_else(|| {
                    Error::SizeLimit(format!("irreducible search in degree {d}"))
                })?;
                for f in monics {
                    if out.len() as u64 == count {
                        break;
                    }
                    if fp::is_irreducible(&f, *p) {
                        out.push(el(Value::Poly(f)));
                    }
                }
                d += 1;
            }
            Ok(out)
        }
        RingId::GaussianInt => {
            let mut limit = 16u64;
            loop {
                let primes = gaussian_primes_up_to(limit);
                if primes.len() as u64 >= count {
                    return Ok(primes
                        .into_iter()
                        .take(count as usize)
                        .map(|z| el(Value::Gauss(z)))
                        .collect());
                }
                if limit > int::SIEVE_LIMIT {
                    return Err(Error::SizeLimit("Gaussian prime enumeration".into()));
                }
                limit *= 2;
            }
        }
    }
}

pub fn nth_prime_class(ring: &RingId, n: u64) -> Result<PrimeClass> {
    match ring {
        RingId::PolyOverFp(p) => {
            let mut rest = n as u128;
            for d in 1u32.. {
                let count = fp::count_irreducible(*p, d)
                    .ok_or_else(|| Error::SizeLimit(format!("irreducible count in degree {d}")))?;
                if rest < count {
                    let mut seen = 0u128;
                    let monics = fp::monics_of_degree(*p, d as usize)
                        .filter(|_| (*p as u128).pow(d) <= MAX_POLY_SCAN as u128)
                        .ok_or_else(|| Error::SizeLimit(format!("irreducible scan in degree {d}")))?;
                    for f in monics {
                        if fp::is_irreducible(&f, *p) {
                            if seen == rest {
                                return Ok(PrimeClass::from_canonical(Element::from_parts(
                                    ring.clone(),
                                    Value::Poly(f),
                                )));
                            }
                            seen += 1;
                        }
                    }
                    unreachable!("irreducible count is exact");
                }
                rest -= count;
            }
            unreachable!()
        }
        _ => {
            let mut classes = enumerate_prime_classes(ring, n + 1)?;
            Ok(classes.pop().expect("n + 1 classes"))
        }
    }
}

/// Index of a canonical prime representative in its ring's prime order.
pub fn prime_index(rep: &Element) -> Result<u64> {
    let ring = rep.ring();
    match (ring, rep.value()) {
        (RingId::Int, Value::Int(q)) => int::prime_count_below(small(q)?),
        (RingId::SInverted(s), Value::Frac(q, _)) => {
            let q = small(q)?;
            let below = s.iter().filter(|&&x| x < q).count() as u64;
            Ok(int::prime_count_below(q)? - below)
        }
        (RingId::PLocal(_), _) => Ok(0),
        (RingId::PolyOverFp(p), Value::Poly(f)) => {
            let d = f.len() - 1;
            let mut index = 0u64;
            for e in 1..d as u32 {
                let c = fp::count_irreducible(*p, e)
                    .and_then(|c| u64::try_from(c).ok())
                    .ok_or_else(|| Error::SizeLimit("irreducible count".into()))?;
                index += c;
            }
            let low = fp::encode(&f[..d], *p)
                .to_u64()
                .filter(|&n| n <= MAX_POLY_SCAN)
                .ok_or_else(|| Error::SizeLimit("irreducible scan".into()))?;
            for g in fp::monics_of_degree(*p, d).expect("bounded above").take(low as usize) {
                if fp::is_irreducible(&g, *p) {
                    index += 1;
                }
            }
            Ok(index)
        }
        (RingId::GaussianInt, Value::Gauss(z)) => {
            let norm = small(&z.norm())?;
            if norm > int::SIEVE_LIMIT {
                return Err(Error::SizeLimit("Gaussian prime index".into()));
            }
            Ok(gaussian_primes_up_to(norm)
                .iter()
                .take_while(|w| w.cmp_enum(z) == Ordering::Less)
                .count() as u64)
        }
        _ => Err(unsupported(ring, "prime_index")),
    }
}

fn small(n: &BigInt) -> Result<u64> {
    n.to_u64()
        .filter(|&v| v <= int::SIEVE_LIMIT)
        .ok_or_else(|| Error::SizeLimit(format!("prime {n} beyond the indexable range")))
}

/// The least-index prime class outside a finite support.
pub fn find_prime_outside(support: &Support) -> Result<PrimeClass> {
    let ring = support.ring();
    if let Ok(crate::rings::Cardinal::Finite(n)) = ring.primes_cardinality() {
        return enumerate_prime_classes(ring, n)?
            .into_iter()
            .find(|c| !support.contains(c))
            .ok_or_else(|| Error::NoPrimeOutside {
                ring: ring.to_string(),
            });
    }
    let k = support.len() as u64;
    enumerate_prime_classes(ring, k + 1)?
        .into_iter()
        .find(|c| !support.contains(c))
        .ok_or_else(|| unreachable!("k classes cannot cover k + 1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(w: &Window) -> Vec<String> {
        w.elements.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn integer_window_order() {
        let w = enumerate_elements(&RingId::Int, 3).unwrap();
        assert_eq!(lits(&w), ["1", "-1", "2", "-2", "3", "-3"]);
    }

    #[test]
    fn f2_window_degree_one() {
        let ring = RingId::poly_over_fp(2).unwrap();
        let w = enumerate_elements(&ring, 3).unwrap();
        assert_eq!(lits(&w), ["1", "x", "x+1"]);
    }

    #[test]
    fn gaussian_window_norm_two() {
        let w = enumerate_elements(&RingId::GaussianInt, 2).unwrap();
        assert_eq!(lits(&w), ["1", "-1", "i", "-i", "1+i", "1-i", "-1+i", "-1-i"]);
    }

    #[test]
    fn heights() {
        assert_eq!(height(&Element::int(-7)).unwrap(), BigUint::from(7u32));
        assert_eq!(height(&Element::gaussian(1, 2)).unwrap(), BigUint::from(5u32));
        let z5 = RingId::p_local(5).unwrap();
        let x = Element::fraction(&z5, 3, 2).unwrap();
        assert_eq!(height(&x).unwrap(), BigUint::from(3u32));
        assert_eq!(height(&RingId::Int.from_i64(0)), Err(Error::ZeroElement));
    }

    #[test]
    fn prime_enumerations() {
        let reps = |ring: &RingId, n| -> Vec<String> {
            enumerate_prime_classes(ring, n)
                .unwrap()
                .iter()
                .map(|c| c.representative().to_string())
                .collect()
        };
        assert_eq!(reps(&RingId::Int, 4), ["2", "3", "5", "7"]);
        let f2 = RingId::poly_over_fp(2).unwrap();
        assert_eq!(reps(&f2, 3), ["x", "x+1", "x^2+x+1"]);
        let f3 = RingId::poly_over_fp(3).unwrap();
        assert_eq!(reps(&f3, 6), ["x", "x+1", "x+2", "x^2+1", "x^2+x+2", "x^2+2x+2"]);
        assert_eq!(reps(&RingId::GaussianInt, 4), ["1+i", "2+i", "1+2i", "3"]);
        let s2 = RingId::s_inverted([2]).unwrap();
        assert_eq!(reps(&s2, 3), ["3", "5", "7"]);
        let z5 = RingId::p_local(5).unwrap();
        assert_eq!(reps(&z5, 1), ["5"]);
        assert!(matches!(
            nth_prime_class(&z5, 1),
            Err(Error::IndexBeyondFinitePrimes { .. })
        ));
    }

    #[test]
    fn indices_round_trip() {
        let f3 = RingId::poly_over_fp(3).unwrap();
        for ring in [RingId::Int, f3, RingId::GaussianInt, RingId::s_inverted([2, 3]).unwrap()] {
            for (i, class) in enumerate_prime_classes(&ring, 60).unwrap().iter().enumerate() {
                assert_eq!(class.index().unwrap(), i as u64, "{ring} {class:?}");
                assert_eq!(nth_prime_class(&ring, i as u64).unwrap(), *class);
            }
        }
    }

    #[test]
    fn windows_are_nested() {
        for ring in [RingId::Int, RingId::GaussianInt, RingId::p_local(3).unwrap()] {
            let big = enumerate_elements(&ring, 12).unwrap();
            let small = enumerate_elements(&ring, 7).unwrap();
            assert_eq!(big.restrict(7), small);
        }
    }
}
