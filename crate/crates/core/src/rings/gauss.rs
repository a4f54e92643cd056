//! Gaussian integers `a + bi` as pairs of big integers.

use std::cmp::{Ordering, Reverse};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::int;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigInt,
    pub im: BigInt,
}

impl Gaussian {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Gaussian {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn one() -> Self {
        Gaussian::new(1, 0)
    }

    pub fn i() -> Self {
        Gaussian::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -&self.im)
    }

    pub fn add(&self, o: &Self) -> Self {
        Gaussian::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Gaussian::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> Self {
        Gaussian::new(-&self.re, -&self.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Gaussian::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    /// Multiplication by `i`.
    pub fn rotate(&self) -> Self {
        Gaussian::new(-&self.im, self.re.clone())
    }

    /// Division with the quotient rounded to the nearest lattice point, so
    /// that `N(remainder) <= N(divisor) / 2`.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let n = d.norm();
        let t = self.mul(&d.conj());
        let round = |x: &BigInt| -> BigInt {
            // nearest integer to x / n, n > 0
            let twice: BigInt = x * 2 + &n;
            twice.div_floor(&(&n * 2))
        };
        let q = Gaussian::new(round(&t.re), round(&t.im));
        let r = self.sub(&q.mul(d));
        (q, r)
    }

    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let n = d.norm();
        let t = self.mul(&d.conj());
        if (&t.re % &n).is_zero() && (&t.im % &n).is_zero() {
            Some(Gaussian::new(&t.re / &n, &t.im / &n))
        } else {
            None
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// `(k, canonical)` with `i^k * self = canonical` in the half-open first
    /// quadrant `re > 0, im >= 0`.
    pub fn canonical(&self) -> (u8, Self) {
        let mut z = self.clone();
        for k in 0..4u8 {
            if z.re.is_positive() && !z.im.is_negative() {
                return (k, z);
            }
            z = z.rotate();
        }
        unreachable!("canonical of zero")
    }

    /// Window and prime enumeration order within one norm shell.
    pub fn cmp_enum(&self, o: &Self) -> Ordering {
        let key = |z: &Gaussian| {
            (
                z.norm(),
                Reverse(z.re.abs()),
                z.re.is_negative(),
                z.im.is_negative(),
            )
        };
        key(self).cmp(&key(o))
    }
}

/// `i^k` for `k` in `0..4`.
pub fn unit_power(k: u8) -> Gaussian {
    match k % 4 {
        0 => Gaussian::new(1, 0),
        1 => Gaussian::new(0, 1),
        2 => Gaussian::new(-1, 0),
        _ => Gaussian::new(0, -1),
    }
}

pub fn units() -> Vec<Gaussian> {
    vec![
        Gaussian::new(1, 0),
        Gaussian::new(-1, 0),
        Gaussian::new(0, 1),
        Gaussian::new(0, -1),
    ]
}

/// Extended Euclid with canonical (first-quadrant) gcd.
pub fn ext_gcd(a: &Gaussian, b: &Gaussian) -> (Gaussian, Gaussian, Gaussian) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (Gaussian::one(), Gaussian::new(0, 0));
    let (mut old_t, mut t) = (Gaussian::new(0, 0), Gaussian::one());
    while !r.is_zero() {
        let (q, rr) = old_r.divrem(&r);
        old_r = std::mem::replace(&mut r, rr);
        let ns = old_s.sub(&q.mul(&s));
        old_s = std::mem::replace(&mut s, ns);
        let nt = old_t.sub(&q.mul(&t));
        old_t = std::mem::replace(&mut t, nt);
    }
    let (k, g) = old_r.canonical();
    let u = unit_power(k);
    (g, old_s.mul(&u), old_t.mul(&u))
}

/// Canonical Gaussian primes above the rational prime `q`.
pub fn primes_over(q: &BigUint) -> Vec<Gaussian> {
    let qi = BigInt::from_biguint(Sign::Plus, q.clone());
    if q == &BigUint::from(2u32) {
        return vec![Gaussian::new(1, 1)];
    }
    if (q % 4u32).to_u32() == Some(3) {
        return vec![Gaussian::new(qi, 0)];
    }
    let r = int::sqrt_minus_one(q).expect("q = 1 mod 4 has a square root of -1");
    let (pi, _, _) = ext_gcd(
        &Gaussian::new(qi, 0),
        &Gaussian::new(BigInt::from_biguint(Sign::Plus, r), 1),
    );
    let other = pi.conj().canonical().1;
    let mut out = vec![pi, other];
    out.sort_by(|a, b| a.cmp_enum(b));
    out
}

/// `(unit, [(canonical prime, exponent)])` sorted in prime enumeration order.
pub fn factor(z: &Gaussian) -> Result<(Gaussian, Vec<(Gaussian, u32)>)> {
    let norm = z.norm().to_biguint().expect("norm is nonnegative");
    let mut rest = z.clone();
    let mut out = Vec::new();
    if !norm.is_one() {
        for (q, _) in int::factor_biguint(&norm)? {
            for pi in primes_over(&q) {
                let mut e = 0;
                while let Some(next) = rest.exact_div(&pi) {
                    rest = next;
                    e += 1;
                }
                if e > 0 {
                    out.push((pi, e));
                }
            }
        }
    }
    debug_assert!(rest.is_unit());
    out.sort_by(|a, b| a.0.cmp_enum(&b.0));
    Ok((rest, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_splits_into_two_classes() {
        // (2+i)(1+2i) = 5i
        let (u, fs) = factor(&Gaussian::new(5, 0)).unwrap();
        assert_eq!(u, Gaussian::new(0, -1));
        let primes: Vec<_> = fs.iter().map(|(p, e)| (p.clone(), *e)).collect();
        assert_eq!(
            primes,
            vec![(Gaussian::new(2, 1), 1), (Gaussian::new(1, 2), 1)]
        );
        // 1 - 2i is an associate of 2 + i
        assert_eq!(Gaussian::new(1, -2).canonical().1, Gaussian::new(2, 1));
    }

    #[test]
    fn factorizations_recompose() {
        for a in -25i32..=25 {
            for b in -25i32..=25 {
                let z = Gaussian::new(a, b);
                if z.is_zero() {
                    continue;
                }
                let (u, fs) = factor(&z).unwrap();
                assert!(u.is_unit());
                let mut prod = u;
                for (p, e) in &fs {
                    assert_eq!(p.canonical().1, *p);
                    for _ in 0..*e {
                        prod = prod.mul(p);
                    }
                }
                assert_eq!(prod, z);
            }
        }
    }

    #[test]
    fn gcd_is_bezout_combination() {
        for (a, b, c, d) in [(6, 0, 35, 0), (3, 4, 1, 2), (10, 0, 3, 1), (7, 1, 0, 5)] {
            let (x, y) = (Gaussian::new(a, b), Gaussian::new(c, d));
            let (g, s, t) = ext_gcd(&x, &y);
            assert_eq!(s.mul(&x).add(&t.mul(&y)), g);
            assert!(x.exact_div(&g).is_some() && y.exact_div(&g).is_some());
        }
    }

    #[test]
    fn canonical_quadrant() {
        let (k, c) = Gaussian::new(-1, -2).canonical();
        assert_eq!(c, Gaussian::new(1, 2));
        assert_eq!(unit_power(k).mul(&Gaussian::new(-1, -2)), c);
    }
}
