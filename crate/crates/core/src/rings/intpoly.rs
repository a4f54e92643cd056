//! Integer-coefficient polynomials. Only two-generator coprimality is
//! decided here; factorization over Z[x] is out of scope.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{fp, int};
use crate::error::Result;

pub type IntPoly = Vec<BigInt>;

pub fn trim(mut f: IntPoly) -> IntPoly {
    while f.last().is_some_and(Zero::is_zero) {
        f.pop();
    }
    f
}

pub fn degree(f: &[BigInt]) -> Option<usize> {
    f.len().checked_sub(1)
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()
            })
            .collect(),
    )
}

pub fn neg(a: &[BigInt]) -> IntPoly {
    a.iter().map(|c| -c).collect()
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division in Z[x]; `None` if `b` does not divide `a`.
pub fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    let db = degree(b)?;
    let lead = &b[db];
    let mut r = a.to_vec();
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() <= db {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        if r[i].is_zero() {
            continue;
        }
        let (c, rem) = r[i].div_rem(lead);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i - db + j] -= &c * bj;
        }
        q[i - db] = c;
    }
    if r.iter().all(Zero::is_zero) {
        Some(trim(q))
    } else {
        None
    }
}

pub fn content(f: &[BigInt]) -> BigInt {
    f.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

pub fn reduce_mod(f: &[BigInt], q: u64) -> fp::Poly {
    let qb = BigInt::from(q);
    fp::trim(
        f.iter()
            .map(|c| c.mod_floor(&qb).to_u64().expect("reduced coefficient"))
            .collect(),
    )
}

/// Fraction-free (Bareiss) elimination over a type with exact division.
trait ExactRing: Clone + Zero + One + PartialEq {
    /// `(a*b - c*d) / e`, `None` on overflow.
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self>;
    fn negate(&self) -> Self;
}

impl ExactRing for i128 {
    fn cross_div(a: &i128, b: &i128, c: &i128, d: &i128, e: &i128) -> Option<i128> {
        a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)?.checked_div(*e)
    }
    fn negate(&self) -> i128 {
        -self
    }
}

impl ExactRing for BigInt {
    fn cross_div(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt, e: &BigInt) -> Option<BigInt> {
        Some((a * b - c * d) / e)
    }
    fn negate(&self) -> BigInt {
        -self
    }
}

fn bareiss<T: ExactRing>(mut m: Vec<Vec<T>>) -> Option<T> {
    let n = m.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return Some(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = T::cross_div(&m[i][j], &m[k][k], &m[i][k], &m[k][j], &prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Some(if negate { det.negate() } else { det })
}

fn sylvester<T: Clone + Zero>(a: &[T], b: &[T]) -> Vec<Vec<T>> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![T::zero(); size];
        for (i, c) in a.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![T::zero(); size];
        for (i, c) in b.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant of two nonzero polynomials (Sylvester determinant).
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let small = |f: &[BigInt]| -> Option<Vec<i128>> {
        f.iter()
            .map(|c| c.to_i64().map(i128::from))
            .collect::<Option<Vec<_>>>()
    };
    if let (Some(sa), Some(sb)) = (small(a), small(b)) {
        if let Some(det) = bareiss(sylvester(&sa, &sb)) {
            return BigInt::from(det);
        }
    }
    bareiss(sylvester(a, b)).expect("big-integer elimination cannot overflow")
}

/// Decides `<f, g> = Z[x]` for nonzero `f, g`.
///
/// For non-constant input the ideal is the unit ideal iff the resultant is
/// nonzero and, for each prime `q` dividing it, the reductions mod `q` have a
/// nonzero constant gcd in `F_q[x]`. Primes not dividing the resultant can
/// never produce a common factor mod `q`.
pub fn coprime(f: &[BigInt], g: &[BigInt]) -> Result<bool> {
    if f.len() == 1 && g.len() == 1 {
        return Ok(f[0].gcd(&g[0]).is_one());
    }
    let res = resultant(f, g);
    if res.is_zero() {
        return Ok(false);
    }
    let magnitude = res.abs().to_biguint().expect("nonnegative");
    if magnitude.is_one() {
        return Ok(true);
    }
    for (q, _) in int::factor_biguint(&magnitude)? {
        let q = q.to_u64().ok_or_else(|| {
            crate::error::Error::SizeLimit("resultant prime exceeds 64 bits".into())
        })?;
        if q >= 1 << 32 {
            return Err(crate::error::Error::SizeLimit(
                "resultant prime exceeds the F_p coefficient range".into(),
            ));
        }
        let common = fp::gcd(&reduce_mod(f, q), &reduce_mod(g, q), q);
        if !fp::is_unit(&common) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Primality in Z[x] for the shapes the counterexample needs: constants,
/// and primitive polynomials of degree at most three (irreducible over Q iff
/// no rational root). `None` for anything of higher degree.
pub fn is_prime_low_degree(f: &[BigInt]) -> Option<bool> {
    match degree(f)? {
        0 => Some(int::is_prime(&f[0].abs().to_biguint()?)),
        d if d <= 3 => {
            if !content(f).abs().is_one() {
                return Some(false);
            }
            if d == 1 {
                return Some(true);
            }
            Some(!has_rational_root(f))
        }
        _ => None,
    }
}

fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    if let Ok(fs) = int::factor_biguint(n) {
        for (p, e) in fs {
            let mut next = Vec::new();
            for d in &out {
                let mut pk = BigUint::one();
                for _ in 0..=e {
                    next.push(d * &pk);
                    pk *= &p;
                }
            }
            out = next;
        }
    }
    out
}

fn has_rational_root(f: &[BigInt]) -> bool {
    if f[0].is_zero() {
        return true;
    }
    let lead = f.last().unwrap().abs().to_biguint().unwrap();
    let constant = f[0].abs().to_biguint().unwrap();
    for num in divisors(&constant) {
        for den in divisors(&lead) {
            if !num.gcd(&den).is_one() {
                continue;
            }
            for sign in [1i32, -1] {
                let r = BigInt::from(num.clone()) * sign;
                let d = BigInt::from(den.clone());
                // den^deg * f(num/den)
                let deg = f.len() - 1;
                let mut acc = BigInt::zero();
                for (i, c) in f.iter().enumerate() {
                    acc += c * num_traits::pow(r.clone(), i) * num_traits::pow(d.clone(), deg - i);
                }
                if acc.is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        trim(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn two_and_x_generate_a_proper_ideal() {
        assert!(!coprime(&p(&[2]), &p(&[0, 1])).unwrap());
        assert!(!coprime(&p(&[2]), &p(&[1, 1])).unwrap());
        assert!(coprime(&p(&[2]), &p(&[1, 2])).unwrap());
        assert!(coprime(&p(&[1, 1]), &p(&[0, 1])).unwrap());
    }

    #[test]
    fn constants() {
        assert!(coprime(&p(&[6]), &p(&[35])).unwrap());
        assert!(!coprime(&p(&[4]), &p(&[6])).unwrap());
        assert!(coprime(&p(&[-1]), &p(&[0, 0, 5])).unwrap());
        // 1 = (1 + 2x^3)(1 - 2x^3) + 4 x^6
        assert!(coprime(&p(&[4]), &p(&[1, 0, 0, 2])).unwrap());
        assert!(!coprime(&p(&[3]), &p(&[1, 0, 0, 2])).unwrap());
    }

    #[test]
    fn common_rational_factor() {
        // (x+1)(x-2) and (x+1)(x+3)
        assert!(!coprime(&p(&[-2, -1, 1]), &p(&[3, 4, 1])).unwrap());
    }

    #[test]
    fn resultant_small_cases() {
        // Res(x - a, x - b) = a - b up to sign convention (b - a) ... check |.|
        let r = resultant(&p(&[-3, 1]), &p(&[-7, 1]));
        assert_eq!(r.abs(), BigInt::from(4));
        // Res(c, g) = c^deg g
        assert_eq!(resultant(&p(&[2]), &p(&[1, 0, 1])), BigInt::from(4));
        // big path agrees with small path
        let a = p(&[3, -5, 2, 5]);
        let b = p(&[-4, 1, 0, 3]);
        let small = resultant(&a, &b);
        let big = bareiss(sylvester(&a, &b)).unwrap();
        assert_eq!(small, big);
    }

    #[test]
    fn exact_division() {
        let a = mul(&p(&[1, 2]), &p(&[3, 0, -1]));
        assert_eq!(exact_div(&a, &p(&[1, 2])), Some(p(&[3, 0, -1])));
        assert_eq!(exact_div(&p(&[1, 1]), &p(&[0, 2])), None);
    }

    #[test]
    fn low_degree_primality() {
        assert_eq!(is_prime_low_degree(&p(&[2])), Some(true));
        assert_eq!(is_prime_low_degree(&p(&[0, 1])), Some(true));
        assert_eq!(is_prime_low_degree(&p(&[1, 0, 1])), Some(true));
        assert_eq!(is_prime_low_degree(&p(&[-1, 0, 1])), Some(false));
        assert_eq!(is_prime_low_degree(&p(&[0, 2])), Some(false));
    }
}
