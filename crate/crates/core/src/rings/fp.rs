//! Dense univariate polynomials over a prime field F_p.
//!
//! Coefficients are stored little-endian (index = degree) and trimmed, so the
//! zero polynomial is the empty vector and every other vector ends in a
//! nonzero coefficient. Primes are assumed below 2^32 so that products of two
//! reduced coefficients fit in a `u64`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::int::pow_mod_u64;

pub type Poly = Vec<u64>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(f: &[u64]) -> Option<usize> {
    f.len().checked_sub(1)
}

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod_u64(a, p - 2, p)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

pub fn neg(a: &[u64], p: u64) -> Poly {
    a.iter().map(|&c| (p - c) % p).collect()
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    add(a, &neg(b, p), p)
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Poly {
    trim(a.iter().map(|&x| x * c % p).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Euclidean division; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv(b[db], p);
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] * lead_inv % p;
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            let k = i - db + j;
            r[k] = (r[k] + p - c * bj % p) % p;
        }
    }
    (trim(q), trim(r))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

/// Splits a nonzero polynomial into `(leading coefficient, monic part)`.
pub fn monic(f: &[u64], p: u64) -> (u64, Poly) {
    let lead = *f.last().expect("monic of zero");
    (lead, scale(f, inv(lead, p), p))
}

/// Monic gcd; zero only when both inputs are zero.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    if x.is_empty() {
        x
    } else {
        monic(&x, p).1
    }
}

/// Extended Euclid: `(g, s, t)` with `g = s*a + t*b` and `g` monic.
pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly, Poly) {
    let (mut old_r, mut r) = (a.to_vec(), b.to_vec());
    let (mut old_s, mut s) = (vec![1u64], Vec::new());
    let (mut old_t, mut t) = (Vec::new(), vec![1u64]);
    while !r.is_empty() {
        let (q, rr) = divrem(&old_r, &r, p);
        old_r = std::mem::replace(&mut r, rr);
        let ns = sub(&old_s, &mul(&q, &s, p), p);
        old_s = std::mem::replace(&mut s, ns);
        let nt = sub(&old_t, &mul(&q, &t, p), p);
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_empty() {
        return (old_r, old_s, old_t);
    }
    let (lead, g) = monic(&old_r, p);
    let li = inv(lead, p);
    (g, scale(&old_s, li, p), scale(&old_t, li, p))
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(base: &[u64], exp: &BigUint, m: &[u64], p: u64) -> Poly {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            acc = mulmod(&acc, &b, m, p);
        }
        if i + 1 < bits {
            b = mulmod(&b, &b, m, p);
        }
    }
    acc
}

fn frobenius(a: &[u64], m: &[u64], p: u64) -> Poly {
    powmod(a, &BigUint::from(p), m, p)
}

pub fn derivative(f: &[u64], p: u64) -> Poly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

/// Enumeration order: by degree, then by coefficients from the top down.
/// This is the order of the base-p encoding `sum c_i p^i`.
pub fn cmp(a: &[u64], b: &[u64]) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Base-p encoding `sum c_i p^i`.
pub fn encode(f: &[u64], p: u64) -> BigUint {
    f.iter()
        .rev()
        .fold(BigUint::zero(), |acc, &c| acc * p + c)
}

pub fn decode(mut n: u64, p: u64) -> Poly {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % p);
        n /= p;
    }
    out
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a polynomial of positive degree.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = match degree(f) {
        Some(0) | None => return false,
        Some(n) => n,
    };
    let f = monic(f, p).1;
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // powers[k] = x^(p^k) mod f
    let mut powers = vec![rem(&x, &f, p)];
    for k in 1..=n {
        let next = frobenius(&powers[k - 1], &f, p);
        powers.push(next);
    }
    if powers[n] != powers[0] {
        return false;
    }
    prime_divisors(n).into_iter().all(|q| {
        let h = sub(&powers[n / q], &x, p);
        let g = gcd(&h, &f, p);
        g == vec![1]
    })
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with the
/// `g` squarefree, pairwise coprime and `f = prod g^e`.
fn squarefree(f: &[u64], p: u64) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if degree(f).unwrap_or(0) == 0 {
        return out;
    }
    let df = derivative(f, p);
    if df.is_empty() {
        // f = g(x^p) = g(x)^p since c^p = c in F_p
        let root: Poly = f.iter().step_by(p as usize).copied().collect();
        for (g, e) in squarefree(&root, p) {
            out.push((g, e * p as u32));
        }
        return out;
    }
    let mut c = gcd(f, &df, p);
    let mut w = divrem(f, &c, p).0;
    let mut i = 1u32;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &c, p);
        let z = divrem(&w, &y, p).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = divrem(&c, &w, p).0;
    }
    if degree(&c).unwrap_or(0) > 0 {
        let root: Poly = c.iter().step_by(p as usize).copied().collect();
        for (g, e) in squarefree(&root, p) {
            out.push((g, e * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &[u64], p: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = rem(&x, &rest, p);
    let mut d = 0;
    while degree(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = frobenius(&h, &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        if g != vec![1] {
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
            out.push((g, d));
        }
    }
    if degree(&rest).unwrap_or(0) > 0 {
        let d = degree(&rest).unwrap();
        out.push((rest, d));
    }
    out
}

/// Splits a monic product of distinct degree-`d` irreducibles.
fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = degree(f).unwrap();
    if n == d {
        return vec![f.to_vec()];
    }
    loop {
        let a: Poly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = mulmod(&t, &t, f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            // a^((p^d - 1)/2) via the norm-like product a^(1 + p + ... + p^(d-1))
            let mut t = rem(&a, f, p);
            let mut acc = t.clone();
            for _ in 1..d {
                t = frobenius(&t, f, p);
                acc = mulmod(&acc, &t, f, p);
            }
            let half = BigUint::from((p - 1) / 2);
            sub(&powmod(&acc, &half, f, p), &[1], p)
        };
        let g = gcd(&candidate, f, p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, &g, p).0;
            let mut left = equal_degree(&g, d, p, rng);
            left.extend(equal_degree(&h, d, p, rng));
            return left;
        }
    }
}

/// Factorization of a nonzero polynomial: `(leading coefficient, monic
/// irreducible factors with multiplicities)`, sorted in enumeration order.
pub fn factor(f: &[u64], p: u64) -> (u64, Vec<(Poly, u32)>) {
    let (lead, f) = monic(f, p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d61_6369_6173);
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (g, e) in squarefree(&f, p) {
        for (h, d) in distinct_degree(&g, p) {
            for irr in equal_degree(&h, d, p, &mut rng) {
                if let Some(entry) = out.iter_mut().find(|(q, _)| *q == irr) {
                    entry.1 += e;
                } else {
                    out.push((irr, e));
                }
            }
        }
    }
    out.sort_by(|a, b| cmp(&a.0, &b.0));
    (lead, out)
}

/// Number of monic irreducible polynomials of degree `d` over F_p, by
/// Moebius inversion of `p^d = sum_{e | d} e N(e)`. `None` on overflow.
pub fn count_irreducible(p: u64, d: u32) -> Option<u128> {
    let mut total: i128 = 0;
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        let mu = moebius(e);
        if mu == 0 {
            continue;
        }
        let term = (p as i128).checked_pow(d / e)?;
        total = total.checked_add(mu as i128 * term)?;
    }
    Some((total / d as i128) as u128)
}

fn moebius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Monic polynomials of degree `d`, in enumeration order.
pub fn monics_of_degree(p: u64, d: usize) -> Option<impl Iterator<Item = Poly>> {
    let count = p.checked_pow(d as u32)?;
    Some((0..count).map(move |low| {
        let mut f = decode(low, p);
        f.resize(d, 0);
        f.push(1);
        f
    }))
}

pub fn is_unit(f: &[u64]) -> bool {
    f.len() == 1
}
