//! Rational-integer number theory shared by every ring instance.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest argument the prime-counting helpers will sieve to.
pub const SIEVE_LIMIT: u64 = 50_000_000;

const RHO_BUDGET: u64 = 2_000_000;

/// Extended Euclid: returns `(g, x, y)` with `g = x*a + y*b` and `g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.sign() == Sign::Minus {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Sieve of Eratosthenes, all primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Number of primes strictly below `n`.
pub fn prime_count_below(n: u64) -> Result<u64> {
    if n > SIEVE_LIMIT {
        return Err(Error::SizeLimit(format!(
            "prime counting beyond {SIEVE_LIMIT}"
        )));
    }
    Ok(primes_up_to(n.saturating_sub(1)).len() as u64)
}

/// Iterator over the primes in increasing order, skipping those in `exclude`.
pub fn primes_excluding(exclude: &[u64]) -> impl Iterator<Item = u64> + '_ {
    (2u64..).filter(move |&q| is_prime_u64(q) && !exclude.contains(&q))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the first twenty prime bases; exact below 3.3e24.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for a in primes_up_to(71) {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> Result<u64> {
    // Floyd cycle finding; n is odd, composite and has no tiny factors.
    for c in 1..n {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut steps = 0u64;
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = x.abs_diff(y).gcd(&n);
            steps += 1;
            if steps > RHO_BUDGET {
                return Err(Error::SizeLimit("integer factorization budget".into()));
            }
        }
        if g != n {
            return Ok(g);
        }
    }
    Err(Error::SizeLimit("integer factorization budget".into()))
}

fn rho_big(n: &BigUint) -> Result<BigUint> {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y, mut g) = (BigUint::from(2u32), BigUint::from(2u32), one.clone());
        let mut steps = 0u64;
        while g == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            g = diff.gcd(n);
            steps += 1;
            if steps > RHO_BUDGET {
                return Err(Error::SizeLimit("integer factorization budget".into()));
            }
        }
        if &g != n {
            return Ok(g);
        }
        c += 1u32;
    }
}

fn push_factor(out: &mut Vec<(BigUint, u32)>, p: BigUint) {
    if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += 1;
    } else {
        out.push((p, 1));
    }
}

fn split_u64(n: u64, out: &mut Vec<(BigUint, u32)>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime_u64(n) {
        push_factor(out, BigUint::from(n));
        return Ok(());
    }
    let d = rho_u64(n)?;
    split_u64(d, out)?;
    split_u64(n / d, out)
}

fn split_big(n: BigUint, out: &mut Vec<(BigUint, u32)>) -> Result<()> {
    if let Some(small) = n.to_u64() {
        return split_u64(small, out);
    }
    if is_prime(&n) {
        push_factor(out, n);
        return Ok(());
    }
    let d = rho_big(&n)?;
    let rest = &n / &d;
    split_big(d, out)?;
    split_big(rest, out)
}

/// Prime factorization of `n >= 1`, ascending by prime.
pub fn factor_biguint(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    assert!(!n.is_zero(), "factor_biguint(0)");
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let p = BigUint::from(p);
        while (&rest % &p).is_zero() {
            rest /= &p;
            push_factor(&mut out, p.clone());
        }
    }
    split_big(rest, &mut out)?;
    out.sort();
    Ok(out)
}

/// p-adic valuation of a nonzero integer, returning the cofactor as well.
pub fn valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut rest = n.clone();
    let mut v = 0;
    while !rest.is_zero() && (&rest % &p).is_zero() {
        rest /= &p;
        v += 1;
    }
    (v, rest)
}

/// Removes every prime of `set` from `n`; returns `(removed_part, cofactor)`.
pub fn strip_primes(n: &BigInt, set: &[u64]) -> (BigInt, BigInt) {
    let mut removed = BigInt::one();
    let mut rest = n.clone();
    for &q in set {
        let (v, r) = valuation(&rest, q);
        rest = r;
        removed *= num_traits::pow(BigInt::from(q), v as usize);
    }
    (removed, rest)
}

/// A square root of -1 modulo a prime `q = 1 (mod 4)`, as `c^((q-1)/4)` for
/// the least quadratic non-residue `c`.
pub fn sqrt_minus_one(q: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    let q_minus_one = q - &one;
    let half = &q_minus_one >> 1;
    let quarter = &q_minus_one >> 2;
    let mut c = BigUint::from(2u32);
    while &c < q {
        if c.modpow(&half, q) == q_minus_one {
            return Some(c.modpow(&quarter, q));
        }
        c += 1u32;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut rest = n;
        let mut d = 2;
        while rest > 1 {
            let mut e = 0;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        out
    }

    #[test]
    fn factorization_matches_trial_division() {
        for n in 1..3000u64 {
            let got: Vec<(u64, u32)> = factor_biguint(&BigUint::from(n))
                .unwrap()
                .into_iter()
                .map(|(p, e)| (p.to_u64().unwrap(), e))
                .collect();
            assert_eq!(got, trial(n), "n = {n}");
        }
    }

    #[test]
    fn large_semiprime_splits() {
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        let n = BigUint::from(p) * BigUint::from(q) * BigUint::from(q);
        let f = factor_biguint(&n).unwrap();
        assert_eq!(f, vec![(BigUint::from(q), 2), (BigUint::from(p), 1)]);
    }

    #[test]
    fn bezout_identity() {
        for a in -30i64..30 {
            for b in -30i64..30 {
                let (g, x, y) = ext_gcd(&a.into(), &b.into());
                assert_eq!(g, BigInt::from(a.gcd(&b)));
                assert_eq!(&x * a + &y * b, g);
            }
        }
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let sieve = primes_up_to(10_000);
        for n in 0..=10_000u64 {
            assert_eq!(is_prime_u64(n), sieve.binary_search(&n).is_ok());
        }
        assert!(is_prime(&(BigUint::from(2u32).pow(89) - 1u32)));
        assert!(!is_prime(&(BigUint::from(2u32).pow(67) - 1u32)));
    }

    #[test]
    fn square_roots_of_minus_one() {
        for q in [5u32, 13, 17, 29, 97, 1009] {
            let q = BigUint::from(q);
            let r = sqrt_minus_one(&q).unwrap();
            assert_eq!((&r * &r + 1u32) % &q, BigUint::zero());
        }
    }
}
