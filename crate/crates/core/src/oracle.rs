//! Brute-force reference implementations. Nothing here shares code paths
//! with the gcd, resultant or factoring routines in `rings`; they exist to
//! cross-check those routines on bounded inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::enumeration::{enumerate_elements, height, Window};
use crate::error::{Error, Result};
use crate::rings::{Element, RingId, Value};

/// Generators whose basic opens stand in for the whole basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPool {
    pub ring: RingId,
    pub generators: Vec<Element>,
}

impl WitnessPool {
    pub fn new(ring: RingId, generators: Vec<Element>) -> Result<WitnessPool> {
        if generators.is_empty() {
            return Err(Error::SizeLimit("witness pool must be nonempty".into()));
        }
        Ok(WitnessPool { ring, generators })
    }

    pub fn from_window(w: &Window) -> WitnessPool {
        WitnessPool {
            ring: w.ring.clone(),
            generators: w.elements.clone(),
        }
    }
}

/// Search bound used when the caller has no validated one: eight times the
/// larger operand height (for `Z[x]`, eight times the larger degree).
pub fn default_bound(a: &Element, b: &Element) -> Result<u64> {
    if let (Value::IntPoly(f), Value::IntPoly(g)) = (a.value(), b.value()) {
        let d = f.len().max(g.len()).max(2) - 1;
        return Ok(8 * d as u64);
    }
    let h = height(a)?.max(height(b)?);
    h.to_u64()
        .and_then(|h| h.checked_mul(8))
        .ok_or_else(|| Error::SizeLimit("oracle search bound".into()))
}

/// Whether `x*a + y*b = 1` for some `x, y` of height at most `bound`.
///
/// For `Z[x]` the bound is a degree: the search runs over integer
/// combinations of `x^i a, x^j b` of total degree at most `bound`, which is
/// decided exactly by lattice reduction instead of enumerating coefficients.
pub fn oracle_coprime(a: &Element, b: &Element, bound: u64) -> Result<bool> {
    a.require_nonzero()?;
    b.require_nonzero()?;
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch {
            left: a.ring().to_string(),
            right: b.ring().to_string(),
        });
    }
    match (a.value(), b.value()) {
        (Value::Int(x), Value::Int(y)) => {
            if let (Some(x), Some(y), Ok(bd)) = (x.to_i64(), y.to_i64(), i64::try_from(bound)) {
                return Ok(int_search(x as i128, y as i128, bd as i128));
            }
            Ok(oracle_coprime_cofactors(a, b, bound)?.is_some())
        }
        (Value::IntPoly(f), Value::IntPoly(g)) => {
            if evaluation_refutes(f, g) {
                return Ok(false);
            }
            Ok(lattice_search(f, g, bound as usize, false).is_some())
        }
        _ => Ok(oracle_coprime_cofactors(a, b, bound)?.is_some()),
    }
}

fn int_search(a: i128, b: i128, bound: i128) -> bool {
    (-bound..=bound).any(|x| {
        let r = 1 - x * a;
        r % b == 0 && (r / b).abs() <= bound
    })
}

/// The combination found by [`oracle_coprime`], as `(x, y)` with
/// `x*a + y*b = 1`.
pub fn oracle_coprime_cofactors(a: &Element, b: &Element, bound: u64) -> Result<Option<(Element, Element)>> {
    a.require_nonzero()?;
    b.require_nonzero()?;
    let ring = a.ring().clone();
    if let (Value::IntPoly(f), Value::IntPoly(g)) = (a.value(), b.value()) {
        return Ok(lattice_search(f, g, bound as usize, true).map(|(u, v)| {
            (
                Element::from_parts(ring.clone(), Value::IntPoly(u)),
                Element::from_parts(ring.clone(), Value::IntPoly(v)),
            )
        }));
    }
    let limit = num_bigint::BigUint::from(bound);
    let one = ring.one();
    let zero = ring.from_i64(0);
    let window = enumerate_elements(&ring, bound)?;
    let candidates = std::iter::once(zero.clone()).chain(window.elements);
    for x in candidates {
        let r = one.sub(&x.mul(a)?)?;
        if r.is_zero() {
            return Ok(Some((x, zero)));
        }
        if let Some(y) = r.exact_div(b)? {
            if height(&y)? <= limit {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

fn eval(f: &[BigInt], n: i64) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
}

/// Evaluation at an integer is a ring map onto `Z`; a common divisor of the
/// two values rules out `1` in the ideal.
fn evaluation_refutes(f: &[BigInt], g: &[BigInt]) -> bool {
    let small = |p: &[BigInt]| p.iter().map(|c| c.to_i128()).collect::<Option<Vec<i128>>>();
    if let (Some(fs), Some(gs)) = (small(f), small(g)) {
        let eval_small = |p: &[i128], n: i128| {
            p.iter().rev().try_fold(0i128, |acc, c| acc.checked_mul(n)?.checked_add(*c))
        };
        let fast = (-6i128..=6).try_fold(false, |found, n| {
            Some(found || eval_small(&fs, n)?.gcd(&eval_small(&gs, n)?) != 1)
        });
        if let Some(found) = fast {
            return found;
        }
    }
    (-6i64..=6).any(|n| !eval(f, n).gcd(&eval(g, n)).is_one())
}

/// With `m` and `a1*x + a0` in the ideal, a maximal ideal `(q, x - r)` above
/// it has `q | m` and `a1*r + a0 = 0 mod q`. Solving that congruence modulo
/// the part of `m` prime to `a1` gives one integer to evaluate at.
fn shared_root_refutes(f: &[BigInt], g: &[BigInt], m: &BigInt, a0: &BigInt, a1: &BigInt) -> bool {
    let mut m = m.abs();
    loop {
        let d = m.gcd(a1);
        if d.is_one() {
            break;
        }
        m /= d;
    }
    if m.is_one() {
        return false;
    }
    let e = a1.extended_gcd(&m);
    let n = (-a0 * e.x).mod_floor(&m);
    let (fv, gv) = (eval_big(f, &n), eval_big(g, &n));
    !fv.gcd(&gv).is_one()
}

fn eval_big(f: &[BigInt], n: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
}

/// Integer arithmetic for echelon insertion. The `i128` instance reports
/// overflow so the caller can redo the work with big integers.
trait LatticeInt: Clone + Zero + One + PartialEq + std::fmt::Debug {
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn bezout(a: &Self, b: &Self) -> (Self, Self, Self);
    fn quot(&self, g: &Self) -> Self;
    /// Floor division by a positive divisor.
    fn floor_div(&self, g: &Self) -> Self;
    fn is_pm_one(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn negated(&self) -> Self;
    fn from_big(n: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl LatticeInt for i128 {
    fn combine(a: &i128, x: &i128, b: &i128, y: &i128) -> Option<i128> {
        a.checked_mul(*x)?.checked_add(b.checked_mul(*y)?)
    }
    fn bezout(a: &i128, b: &i128) -> (i128, i128, i128) {
        let e = a.extended_gcd(b);
        (e.gcd, e.x, e.y)
    }
    fn quot(&self, g: &i128) -> i128 {
        self / g
    }
    fn floor_div(&self, g: &i128) -> i128 {
        self.div_euclid(*g)
    }
    fn is_pm_one(&self) -> bool {
        self.abs() == 1
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn negated(&self) -> i128 {
        -self
    }
    fn from_big(n: &BigInt) -> Option<i128> {
        n.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl LatticeInt for BigInt {
    fn combine(a: &BigInt, x: &BigInt, b: &BigInt, y: &BigInt) -> Option<BigInt> {
        Some(a * x + b * y)
    }
    fn bezout(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
        let e = a.extended_gcd(b);
        (e.gcd, e.x, e.y)
    }
    fn quot(&self, g: &BigInt) -> BigInt {
        self / g
    }
    fn floor_div(&self, g: &BigInt) -> BigInt {
        self.div_floor(g)
    }
    fn is_pm_one(&self) -> bool {
        self.abs().is_one()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn negated(&self) -> BigInt {
        -self
    }
    fn from_big(n: &BigInt) -> Option<BigInt> {
        Some(n.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Row echelon form with pivots taken from the highest column down. Only the
/// first `cols` entries are pivot columns; anything after them rides along
/// (used to record which generators produced a row).
struct Echelon<T> {
    cols: usize,
    rows: Vec<Option<Vec<T>>>,
}

impl<T: LatticeInt> Echelon<T> {
    fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: vec![None; cols],
        }
    }

    fn insert(&mut self, mut v: Vec<T>) -> Option<()> {
        for c in (0..self.cols).rev() {
            if v[c].is_zero() {
                continue;
            }
            let Some(row) = self.rows[c].take() else {
                self.rows[c] = Some(self.reduced(v, c)?);
                return Some(());
            };
            let (g, s, t) = T::bezout(&row[c], &v[c]);
            let (rc, vc) = (row[c].quot(&g), v[c].quot(&g));
            let mut pivot = Vec::with_capacity(v.len());
            let mut rest = Vec::with_capacity(v.len());
            for (r, x) in row.iter().zip(&v) {
                pivot.push(T::combine(r, &s, x, &t)?);
                rest.push(T::combine(x, &rc, r, &vc.negated())?);
            }
            self.rows[c] = Some(self.reduced(pivot, c)?);
            v = rest;
        }
        Some(())
    }

    /// Positive pivot at `c`, entries below it reduced modulo the lower
    /// pivots. Keeps the numbers small without changing the span.
    fn reduced(&self, mut v: Vec<T>, c: usize) -> Option<Vec<T>> {
        if v[c].is_neg() {
            v = v.iter().map(T::negated).collect();
        }
        for k in (0..c).rev() {
            let Some(row) = &self.rows[k] else { continue };
            let q = v[k].floor_div(&row[k]);
            if q.is_zero() {
                continue;
            }
            let one = T::one();
            let minus_q = q.negated();
            for (x, r) in v.iter_mut().zip(row) {
                *x = T::combine(x, &one, r, &minus_q)?;
            }
        }
        Some(v)
    }

    /// The row spanning the lattice's intersection with the constants.
    fn constant_row(&self) -> Option<&Vec<T>> {
        self.rows[0].as_ref()
    }
}

fn shifted(f: &[BigInt], shift: usize, cols: usize, tag: Option<(usize, usize)>) -> Vec<BigInt> {
    let extra = tag.map_or(0, |(_, n)| n);
    let mut v = vec![BigInt::zero(); cols + extra];
    for (i, c) in f.iter().enumerate() {
        v[i + shift] = c.clone();
    }
    if let Some((k, _)) = tag {
        v[cols + k] = BigInt::one();
    }
    v
}

/// Decides `1 in span_Z { x^i f, x^j g : deg <= d }` for growing `d` up to
/// `max_degree`; with `track`, also returns cofactors `(u, v)`.
fn lattice_search(
    f: &[BigInt],
    g: &[BigInt],
    max_degree: usize,
    track: bool,
) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let result = lattice_search_in::<i128>(f, g, max_degree, track);
    match result {
        Ok(found) => found,
        Err(()) => lattice_search_in::<BigInt>(f, g, max_degree, track).expect("no overflow"),
    }
}

#[allow(clippy::type_complexity)]
fn lattice_search_in<T: LatticeInt>(
    f: &[BigInt],
    g: &[BigInt],
    max_degree: usize,
    track: bool,
) -> std::result::Result<Option<(Vec<BigInt>, Vec<BigInt>)>, ()> {
    let (df, dg) = (f.len() - 1, g.len() - 1);
    let cols = max_degree + 1;
    // generator k is x^k f for k <= max_degree - df, then x^j g
    let nf = (max_degree + 1).saturating_sub(df);
    let ng = (max_degree + 1).saturating_sub(dg);
    let tags = if track { nf + ng } else { 0 };
    let mut ech = Echelon::<T>::new(cols);
    let mut tried: Option<T> = None;
    let convert = |v: Vec<BigInt>| -> std::result::Result<Vec<T>, ()> {
        v.iter().map(|c| T::from_big(c).ok_or(())).collect()
    };
    for d in 0..=max_degree {
        if d >= df {
            let i = d - df;
            let tag = track.then_some((i, tags));
            ech.insert(convert(shifted(f, i, cols, tag))?).ok_or(())?;
        }
        if d >= dg {
            let j = d - dg;
            let tag = track.then_some((nf + j, tags));
            ech.insert(convert(shifted(g, j, cols, tag))?).ok_or(())?;
        }
        if let Some(row) = ech.constant_row() {
            if !row[0].is_pm_one() && ech.rows[1].is_some() && tried.as_ref() != Some(&row[0]) {
                tried = Some(row[0].clone());
                let linear = ech.rows[1].as_ref().unwrap();
                if shared_root_refutes(f, g, &row[0].to_big(), &linear[0].to_big(), &linear[1].to_big()) {
                    return Ok(None);
                }
            }
            if row[0].is_pm_one() {
                if !track {
                    return Ok(Some((Vec::new(), Vec::new())));
                }
                let sign = if row[0].is_neg() { -1 } else { 1 };
                let coeff = |k: usize| row[cols + k].to_big() * sign;
                let u = crate::rings::intpoly::trim((0..nf).map(coeff).collect());
                let v = crate::rings::intpoly::trim((nf..nf + ng).map(coeff).collect());
                return Ok(Some((u, v)));
            }
        }
    }
    Ok(None)
}

/// Primality by trial division over every element of smaller height.
pub fn oracle_is_prime(x: &Element) -> Result<bool> {
    x.ring().require_pid("oracle_is_prime")?;
    if x.is_unit()? {
        return Ok(false);
    }
    let h = height(x)?
        .to_u64()
        .ok_or_else(|| Error::SizeLimit("oracle primality".into()))?;
    let w = enumerate_elements(x.ring(), h - 1)?;
    for d in &w.elements {
        if d.is_unit()? {
            continue;
        }
        if let Some(q) = x.exact_div(d)? {
            if !q.is_unit()? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Trial-division factorization: `(unit, [(prime, exponent)])` with primes
/// in canonical form and increasing height.
pub fn oracle_factor(x: &Element) -> Result<(Element, Vec<(Element, u32)>)> {
    x.ring().require_pid("oracle_factor")?;
    let h = height(x)?
        .to_u64()
        .ok_or_else(|| Error::SizeLimit("oracle factorization".into()))?;
    let w = enumerate_elements(x.ring(), h)?;
    oracle_factor_with(x, &trial_divisors(&w)?)
}

/// The canonical non-units of a window, the candidate divisors for
/// [`oracle_factor_with`].
pub fn trial_divisors(w: &Window) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for d in &w.elements {
        if !d.is_unit()? && d.is_canonical()? {
            out.push(d.clone());
        }
    }
    Ok(out)
}

/// Factorization against a precomputed divisor list in height order; the
/// list must contain every canonical prime of height at most `height(x)`.
pub fn oracle_factor_with(x: &Element, divisors: &[Element]) -> Result<(Element, Vec<(Element, u32)>)> {
    let mut rest = x.clone();
    let mut out = Vec::new();
    for d in divisors {
        if rest.is_unit()? {
            break;
        }
        let mut e = 0;
        while let Some(q) = rest.exact_div(d)? {
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
    }
    if !rest.is_unit()? {
        return Err(Error::SizeLimit(format!("divisor list too short for {x}")));
    }
    Ok((rest, out))
}

/// `{ y in w : every pool generator whose basic open contains y also
/// contains x }`, an over-approximation of the closure of `{x}`.
pub fn oracle_closure_upper(x: &Element, w: &Window, pool: &WitnessPool) -> Result<Vec<Element>> {
    x.ring().require_pid("oracle_closure_upper")?;
    let x_in: Vec<bool> = pool
        .generators
        .iter()
        .map(|k| k.coprime(x))
        .collect::<Result<_>>()?;
    let excluding: Vec<&Element> = pool
        .generators
        .iter()
        .zip(&x_in)
        .filter(|(_, inside)| !**inside)
        .map(|(k, _)| k)
        .collect();
    let keep: Vec<bool> = w
        .elements
        .par_iter()
        .map(|y| -> Result<bool> {
            for k in &excluding {
                if k.coprime(y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(w
        .elements
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(y, _)| y.clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::closure_members;

    fn z(n: i64) -> Element {
        Element::int(n)
    }

    #[test]
    fn integer_search() {
        assert!(oracle_coprime(&z(6), &z(35), 50).unwrap());
        assert!(!oracle_coprime(&z(4), &z(6), 50).unwrap());
        let (x, y) = oracle_coprime_cofactors(&z(6), &z(35), 50).unwrap().unwrap();
        assert_eq!(x.mul(&z(6)).unwrap().add(&y.mul(&z(35)).unwrap()).unwrap(), z(1));
    }

    #[test]
    fn polynomial_lattice() {
        let p = Element::int_poly;
        for bound in [1, 4, 12] {
            assert!(!oracle_coprime(&p(&[2]), &p(&[0, 1]), bound).unwrap());
        }
        assert!(oracle_coprime(&p(&[2]), &p(&[1, 2]), 2).unwrap());
        assert!(!oracle_coprime(&p(&[4]), &p(&[1, 0, 0, 2]), 5).unwrap());
        assert!(oracle_coprime(&p(&[4]), &p(&[1, 0, 0, 2]), 6).unwrap());
        let (u, v) = oracle_coprime_cofactors(&p(&[4]), &p(&[1, 0, 0, 2]), 6)
            .unwrap()
            .unwrap();
        let combo = u.mul(&p(&[4])).unwrap().add(&v.mul(&p(&[1, 0, 0, 2])).unwrap()).unwrap();
        assert_eq!(combo, p(&[1]));
    }

    #[test]
    fn generic_search_other_rings() {
        let f3 = RingId::poly_over_fp(3).unwrap();
        let a = Element::parse(&f3, "x^2+1").unwrap();
        let b = Element::parse(&f3, "x+1").unwrap();
        assert!(oracle_coprime(&a, &b, default_bound(&a, &b).unwrap()).unwrap());
        let g = |re, im| Element::gaussian(re, im);
        assert!(!oracle_coprime(&g(2, 0), &g(1, 1), 16).unwrap());
        assert!(oracle_coprime(&g(3, 0), &g(2, 1), 40).unwrap());
    }

    #[test]
    fn primality() {
        assert!(oracle_is_prime(&z(7)).unwrap());
        assert!(!oracle_is_prime(&z(-9)).unwrap());
        let f3 = RingId::poly_over_fp(3).unwrap();
        assert!(oracle_is_prime(&Element::parse(&f3, "x^2+1").unwrap()).unwrap());
        assert!(!oracle_is_prime(&Element::parse(&f3, "x^2+2").unwrap()).unwrap());
        assert!(oracle_is_prime(&Element::gaussian(1, 1)).unwrap());
        assert!(!oracle_is_prime(&Element::gaussian(5, 0)).unwrap());
    }

    #[test]
    fn factoring() {
        let (u, fs) = oracle_factor(&z(-360)).unwrap();
        assert_eq!(u, z(-1));
        assert_eq!(fs, vec![(z(2), 3), (z(3), 2), (z(5), 1)]);
    }

    #[test]
    fn closure_approximation() {
        let w = enumerate_elements(&RingId::Int, 20).unwrap();
        let covering = WitnessPool::new(RingId::Int, vec![z(2), z(3), z(35)]).unwrap();
        assert_eq!(
            oracle_closure_upper(&z(6), &w, &covering).unwrap(),
            closure_members(&z(6), &w).unwrap()
        );
        let blind = WitnessPool::new(RingId::Int, vec![z(35)]).unwrap();
        assert_eq!(oracle_closure_upper(&z(6), &w, &blind).unwrap(), w.elements);
        let full = WitnessPool::from_window(&w);
        assert_eq!(oracle_closure_upper(&z(-1), &w, &full).unwrap(), w.elements);
    }
}
