//! Classification of Macías spaces by `(|units|, |primes|)` and the explicit
//! homeomorphism `H(u * prod p^a) = psi(u) * prod phi(p)^a`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::enumeration::{enumerate_elements, height, nth_prime_class, PrimeClass, Window};
use crate::error::{Error, Result};
use crate::invariants::{classification_invariants, maximal_singleton_closures};
use crate::rings::{int, Cardinal, Element, RingId, Value};
use crate::topology::{in_basic_open, is_generic_point, support, Support};

/// How units are matched between the two rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitMap {
    /// Positional pairing of the finite unit lists.
    Table { source: Vec<Element>, target: Vec<Element> },
    /// `Z[1/S]` to `Z[1/T]` with `|S| = |T|`: keep the sign, move the exponent
    /// of the i-th prime of `S` to the i-th prime of `T`.
    SignExponent,
    /// n-th unit in enumeration order to n-th unit.
    HeightIndex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomeoMap {
    pub source: RingId,
    pub target: RingId,
    pub unit_map: UnitMap,
    /// Set when the map has been turned around by [`HomeoMap::inverse`].
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassificationVerdict {
    Homeomorphic(HomeoMap),
    NotHomeomorphic {
        invariant: &'static str,
        source: Cardinal,
        target: Cardinal,
    },
}

impl ClassificationVerdict {
    pub fn is_homeomorphic(&self) -> bool {
        matches!(self, ClassificationVerdict::Homeomorphic(_))
    }

    pub fn to_json(&self, source: &RingId, target: &RingId) -> Json {
        let (from, to) = (classification_invariants(source), classification_invariants(target));
        let pair = |r: Result<(Cardinal, Cardinal)>| match r {
            Ok((u, p)) => json!({ "units": u, "primes": p }),
            Err(_) => Json::Null,
        };
        let mut v = json!({
            "source": source,
            "target": target,
            "source_invariants": pair(from),
            "target_invariants": pair(to),
        });
        match self {
            ClassificationVerdict::Homeomorphic(_) => v["verdict"] = json!("homeomorphic"),
            ClassificationVerdict::NotHomeomorphic {
                invariant,
                source,
                target,
            } => {
                v["verdict"] = json!("not-homeomorphic");
                v["differs"] = json!({ "invariant": invariant, "source": source, "target": target });
            }
        }
        v
    }
}

impl std::fmt::Display for ClassificationVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassificationVerdict::Homeomorphic(m) => write!(f, "Homeomorphic({} -> {})", m.source, m.target),
            ClassificationVerdict::NotHomeomorphic {
                invariant,
                source,
                target,
            } => write!(f, "NotHomeomorphic({invariant}: {source} vs {target})"),
        }
    }
}

pub fn classify(source: &RingId, target: &RingId) -> Result<ClassificationVerdict> {
    let (us, ps) = classification_invariants(source)?;
    let (ut, pt) = classification_invariants(target)?;
    // when both differ the prime count is reported
    if ps != pt {
        return Ok(ClassificationVerdict::NotHomeomorphic {
            invariant: "primes",
            source: ps,
            target: pt,
        });
    }
    if us != ut {
        return Ok(ClassificationVerdict::NotHomeomorphic {
            invariant: "units",
            source: us,
            target: ut,
        });
    }
    let unit_map = match (source, target) {
        (RingId::SInverted(s), RingId::SInverted(t)) if s.len() == t.len() => UnitMap::SignExponent,
        _ => match (source.list_units(), target.list_units()) {
            (Some(source), Some(target)) => UnitMap::Table { source, target },
            _ => UnitMap::HeightIndex,
        },
    };
    Ok(ClassificationVerdict::Homeomorphic(HomeoMap {
        source: source.clone(),
        target: target.clone(),
        unit_map,
        reversed: false,
    }))
}

pub fn build_homeo(source: &RingId, target: &RingId) -> Result<HomeoMap> {
    match classify(source, target)? {
        ClassificationVerdict::Homeomorphic(m) => Ok(m),
        v @ ClassificationVerdict::NotHomeomorphic { .. } => Err(Error::NotHomeomorphicPrecondition(v.to_string())),
    }
}

/// Units of `ring` with height at most `bound`, in enumeration order.
fn units_up_to(ring: &RingId, bound: u64) -> Result<Vec<Element>> {
    let w = enumerate_elements(ring, bound)?;
    let mut out = Vec::new();
    for x in w.elements {
        if x.is_unit()? {
            out.push(x);
        }
    }
    Ok(out)
}

fn unit_index(u: &Element) -> Result<usize> {
    let h = height(u)?;
    let h = u64::try_from(h).map_err(|_| Error::SizeLimit("unit index".into()))?;
    let units = units_up_to(u.ring(), h)?;
    units
        .iter()
        .position(|v| v == u)
        .ok_or_else(|| Error::NotInRing {
            ring: u.ring().to_string(),
            reason: format!("{u} is not a unit"),
        })
}

fn nth_unit(ring: &RingId, n: usize) -> Result<Element> {
    let mut bound = 2u64;
    loop {
        let units = units_up_to(ring, bound)?;
        if let Some(u) = units.get(n) {
            return Ok(u.clone());
        }
        bound *= 2;
    }
}

/// `(sign, exponents)` of a unit of `Z[1/S]`.
fn sign_exponents(u: &Element, s: &[u64]) -> (bool, Vec<i64>) {
    let Value::Frac(n, d) = u.value() else {
        unreachable!("units of Z[1/S] are fractions")
    };
    let exps = s
        .iter()
        .map(|&q| int::valuation(n, q).0 as i64 - int::valuation(d, q).0 as i64)
        .collect();
    (n.is_negative(), exps)
}

fn from_sign_exponents(ring: &RingId, negative: bool, exps: &[i64]) -> Result<Element> {
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for (&q, &e) in ring.inverted_primes().iter().zip(exps) {
        let qe = num_traits::pow(BigInt::from(q), e.unsigned_abs() as usize);
        if e >= 0 {
            num *= qe;
        } else {
            den *= qe;
        }
    }
    if negative {
        num = -num;
    }
    Element::fraction(ring, num, den)
}

impl HomeoMap {
    pub fn inverse(&self) -> HomeoMap {
        let unit_map = match &self.unit_map {
            UnitMap::Table { source, target } => UnitMap::Table {
                source: target.clone(),
                target: source.clone(),
            },
            other => other.clone(),
        };
        HomeoMap {
            source: self.target.clone(),
            target: self.source.clone(),
            unit_map,
            reversed: !self.reversed,
        }
    }

    /// The prime with the same enumeration index on the other side.
    pub fn phi(&self, p: &PrimeClass) -> Result<PrimeClass> {
        nth_prime_class(&self.target, p.index()?)
    }

    pub fn psi(&self, u: &Element) -> Result<Element> {
        match &self.unit_map {
            UnitMap::Table { source, target } => {
                let i = source.iter().position(|v| v == u).ok_or_else(|| Error::NotInRing {
                    ring: self.source.to_string(),
                    reason: format!("{u} is not a unit"),
                })?;
                Ok(target[i].clone())
            }
            UnitMap::SignExponent => {
                let (neg, exps) = sign_exponents(u, self.source.inverted_primes());
                from_sign_exponents(&self.target, neg, &exps)
            }
            UnitMap::HeightIndex => nth_unit(&self.target, unit_index(u)?),
        }
    }

    pub fn prime_table(&self, count: u64) -> Result<Vec<(PrimeClass, PrimeClass)>> {
        (0..count)
            .map(|n| Ok((nth_prime_class(&self.source, n)?, nth_prime_class(&self.target, n)?)))
            .collect()
    }
}

/// Anything that can be checked by [`verify_homeo`].
pub trait PointMap: Sync {
    fn source(&self) -> &RingId;
    fn target(&self) -> &RingId;
    fn apply(&self, x: &Element) -> Result<Element>;
    fn apply_inverse(&self, y: &Element) -> Result<Element>;
    /// `phi` applied classwise.
    fn transport(&self, s: &Support) -> Result<Support>;
}

impl PointMap for HomeoMap {
    fn source(&self) -> &RingId {
        &self.source
    }

    fn target(&self) -> &RingId {
        &self.target
    }

    fn apply(&self, x: &Element) -> Result<Element> {
        apply_homeo(self, x)
    }

    fn apply_inverse(&self, y: &Element) -> Result<Element> {
        apply_homeo_inverse(self, y)
    }

    fn transport(&self, s: &Support) -> Result<Support> {
        s.map(self.target.clone(), |p| self.phi(p))
    }
}

pub fn apply_homeo(map: &HomeoMap, x: &Element) -> Result<Element> {
    if x.ring() != &map.source {
        return Err(Error::RingMismatch {
            left: map.source.to_string(),
            right: x.ring().to_string(),
        });
    }
    let d = x.factor()?;
    let mut y = map.psi(&d.unit)?;
    for (p, e) in &d.factors {
        y = y.mul(&map.phi(p)?.representative().pow(*e))?;
    }
    Ok(y)
}

pub fn apply_homeo_inverse(map: &HomeoMap, y: &Element) -> Result<Element> {
    apply_homeo(&map.inverse(), y)
}

/// A map that agrees with `base` except on a few patched points.
pub struct PatchedMap<'a> {
    pub base: &'a HomeoMap,
    pub patches: Vec<(Element, Element)>,
}

impl PointMap for PatchedMap<'_> {
    fn source(&self) -> &RingId {
        &self.base.source
    }

    fn target(&self) -> &RingId {
        &self.base.target
    }

    fn apply(&self, x: &Element) -> Result<Element> {
        match self.patches.iter().find(|(a, _)| a == x) {
            Some((_, b)) => Ok(b.clone()),
            None => self.base.apply(x),
        }
    }

    fn apply_inverse(&self, y: &Element) -> Result<Element> {
        match self.patches.iter().find(|(_, b)| b == y) {
            Some((a, _)) => Ok(a.clone()),
            None => self.base.apply_inverse(y),
        }
    }

    fn transport(&self, s: &Support) -> Result<Support> {
        self.base.transport(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: &'static str,
    pub points: Vec<Element>,
    pub detail: String,
}

/// Examples kept per clause; totals are always exact.
pub const MAX_LISTED_VIOLATIONS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub source: RingId,
    pub target: RingId,
    pub window_bound: u64,
    pub elements: usize,
    pub pairs: usize,
    pub injectivity_violations: usize,
    pub support_violations: usize,
    pub membership_violations: usize,
    pub round_trip_failures: usize,
    pub units_to_units: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn total_violations(&self) -> usize {
        self.injectivity_violations
            + self.support_violations
            + self.membership_violations
            + self.round_trip_failures
            + usize::from(!self.units_to_units)
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn to_json(&self) -> Json {
        json!({
            "ring": format!("{} -> {}", self.source, self.target),
            "window_bound": self.window_bound,
            "verdict": if self.passed() { "verified" } else { "violated" },
            "records": self.violations,
            "elements": self.elements,
            "pairs": self.pairs,
            "clauses": {
                "injectivity": self.injectivity_violations,
                "support_transport": self.support_violations,
                "membership": self.membership_violations,
                "round_trip": self.round_trip_failures,
                "units_to_units": self.units_to_units,
            },
        })
    }
}

pub fn verify_homeo<M: PointMap>(map: &M, w: &Window) -> Result<VerificationReport> {
    if &w.ring != map.source() {
        return Err(Error::RingMismatch {
            left: map.source().to_string(),
            right: w.ring.to_string(),
        });
    }
    let images: Vec<Element> = w.elements.par_iter().map(|x| map.apply(x)).collect::<Result<_>>()?;
    let mut violations = Vec::new();
    let mut push = |v: Violation, count: &mut usize| {
        if violations.iter().filter(|o: &&Violation| o.clause == v.clause).count() < MAX_LISTED_VIOLATIONS {
            violations.push(v);
        }
        *count += 1;
    };

    let mut injectivity_violations = 0;
    let mut seen = HashSet::new();
    for (x, hx) in w.elements.iter().zip(&images) {
        if !seen.insert(hx) {
            let other = w.elements.iter().zip(&images).find(|(_, h)| *h == hx).unwrap().0;
            push(
                Violation {
                    clause: "injectivity",
                    points: vec![other.clone(), x.clone()],
                    detail: format!("both map to {hx}"),
                },
                &mut injectivity_violations,
            );
        }
    }

    let transport: Vec<(bool, String)> = w
        .elements
        .par_iter()
        .zip(&images)
        .map(|(x, hx)| -> Result<(bool, String)> {
            let expected = map.transport(&support(x)?)?;
            let actual = support(hx)?;
            Ok((expected == actual, format!("supp(H(x)) = {actual}, expected {expected}")))
        })
        .collect::<Result<_>>()?;
    let mut support_violations = 0;
    for (x, (ok, detail)) in w.elements.iter().zip(transport) {
        if !ok {
            push(
                Violation {
                    clause: "support-transport",
                    points: vec![x.clone()],
                    detail,
                },
                &mut support_violations,
            );
        }
    }

    let n = w.elements.len();
    let bad_pairs: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Vec<(usize, usize)>> {
            let mut out = Vec::new();
            for j in 0..n {
                let before = in_basic_open(&w.elements[i], &w.elements[j])?;
                let after = in_basic_open(&images[i], &images[j])?;
                if before != after {
                    out.push((i, j));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut membership_violations = 0;
    for (i, j) in bad_pairs {
        push(
            Violation {
                clause: "membership",
                points: vec![w.elements[i].clone(), w.elements[j].clone()],
                detail: format!("images {} and {}", images[i], images[j]),
            },
            &mut membership_violations,
        );
    }

    let back: Vec<bool> = w
        .elements
        .par_iter()
        .zip(&images)
        .map(|(x, hx)| Ok(&map.apply_inverse(hx)? == x))
        .collect::<Result<_>>()?;
    let mut round_trip_failures = 0;
    for (x, ok) in w.elements.iter().zip(back) {
        if !ok {
            push(
                Violation {
                    clause: "round-trip",
                    points: vec![x.clone()],
                    detail: "inverse does not recover the point".into(),
                },
                &mut round_trip_failures,
            );
        }
    }

    let mut units_to_units = true;
    for (x, hx) in w.elements.iter().zip(&images) {
        units_to_units &= x.is_unit()? == hx.is_unit()?;
    }
    if let (Some(us), Some(ut)) = (map.source().list_units(), map.target().list_units()) {
        let imgs: HashSet<Element> = us.iter().map(|u| map.apply(u)).collect::<Result<_>>()?;
        units_to_units &= imgs == ut.into_iter().collect::<HashSet<_>>();
    }

    Ok(VerificationReport {
        source: map.source().clone(),
        target: map.target().clone(),
        window_bound: w.bound,
        elements: n,
        pairs: n * n,
        injectivity_violations,
        support_violations,
        membership_violations,
        round_trip_failures,
        units_to_units,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesPoint {
    pub bound: u64,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonHomeoCertificate {
    pub source: RingId,
    pub target: RingId,
    pub invariant: &'static str,
    /// `generic-points` or `maximal-closures`.
    pub quantity: &'static str,
    pub series: Vec<SeriesPoint>,
    pub differs_at_every_bound: bool,
}

impl NonHomeoCertificate {
    pub fn to_json(&self) -> Json {
        json!({
            "ring": format!("{} vs {}", self.source, self.target),
            "window_bound": self.series.last().map(|p| p.bound),
            "verdict": if self.differs_at_every_bound { "certified" } else { "inconclusive" },
            "records": self.series,
            "invariant": self.invariant,
            "quantity": self.quantity,
        })
    }
}

/// The bounds `1, 2, 5, 10, 20, 50, ...` below `bound`, then `bound`.
pub fn series_bounds(bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut scale = 1u64;
    'outer: loop {
        for m in [1, 2, 5] {
            let b = m * scale;
            if b >= bound {
                break 'outer;
            }
            out.push(b);
        }
        scale *= 10;
    }
    out.push(bound);
    out
}

pub fn non_homeo_certificate(
    source: &RingId,
    target: &RingId,
    w_s: &Window,
    w_t: &Window,
) -> Result<NonHomeoCertificate> {
    let invariant = match classify(source, target)? {
        ClassificationVerdict::Homeomorphic(_) => return Err(Error::PreconditionHomeomorphic),
        ClassificationVerdict::NotHomeomorphic { invariant, .. } => invariant,
    };
    let count = |w: &Window| -> Result<usize> {
        if invariant == "units" {
            let mut n = 0;
            for x in &w.elements {
                n += usize::from(is_generic_point(x)?);
            }
            Ok(n)
        } else {
            Ok(maximal_singleton_closures(w)?.len())
        }
    };
    let mut series = Vec::new();
    for b in series_bounds(w_s.bound.max(w_t.bound)) {
        series.push(SeriesPoint {
            bound: b,
            source: count(&w_s.restrict(b.min(w_s.bound)))?,
            target: count(&w_t.restrict(b.min(w_t.bound)))?,
        });
    }
    // at bound 1 neither ring may have a proper closure yet
    let informative: Vec<&SeriesPoint> = series
        .iter()
        .filter(|p| invariant == "units" || p.source.max(p.target) > 1)
        .collect();
    let differs_at_every_bound = !informative.is_empty() && informative.iter().all(|p| p.source != p.target);
    Ok(NonHomeoCertificate {
        source: source.clone(),
        target: target.clone(),
        invariant,
        quantity: if invariant == "units" { "generic-points" } else { "maximal-closures" },
        series,
        differs_at_every_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> RingId {
        RingId::poly_over_fp(3).unwrap()
    }

    #[test]
    fn classification() {
        let f2 = RingId::poly_over_fp(2).unwrap();
        assert_eq!(
            classify(&RingId::Int, &f2).unwrap(),
            ClassificationVerdict::NotHomeomorphic {
                invariant: "units",
                source: Cardinal::Finite(2),
                target: Cardinal::Finite(1),
            }
        );
        assert!(classify(&RingId::Int, &f3()).unwrap().is_homeomorphic());
        let s2 = RingId::s_inverted([2]).unwrap();
        let s3 = RingId::s_inverted([3]).unwrap();
        assert!(classify(&s2, &s3).unwrap().is_homeomorphic());
        let z5 = RingId::p_local(5).unwrap();
        let v = classify(&RingId::Int, &z5).unwrap();
        assert!(matches!(v, ClassificationVerdict::NotHomeomorphic { invariant: "primes", .. }));
        assert!(classify(&z5, &RingId::p_local(7).unwrap()).unwrap().is_homeomorphic());
        assert!(build_homeo(&RingId::Int, &f2).is_err());
        assert!(classify(&RingId::IntPoly, &RingId::Int).is_err());
    }

    #[test]
    fn images() {
        let h = build_homeo(&RingId::Int, &f3()).unwrap();
        let img = |n: i64| apply_homeo(&h, &Element::int(n)).unwrap().to_string();
        assert_eq!(img(1), "1");
        assert_eq!(img(2), "x");
        assert_eq!(img(-4), "2x^2");
        assert_eq!(img(6), "x^2+x");
        assert_eq!(img(-1), "2");
        let y = apply_homeo(&h, &Element::int(-90)).unwrap();
        assert_eq!(apply_homeo_inverse(&h, &y).unwrap(), Element::int(-90));
        assert_eq!(h, build_homeo(&RingId::Int, &f3()).unwrap());
    }

    #[test]
    fn infinite_unit_groups() {
        let s2 = RingId::s_inverted([2]).unwrap();
        let s3 = RingId::s_inverted([3]).unwrap();
        let h = build_homeo(&s2, &s3).unwrap();
        let x = Element::fraction(&s2, -15, 4).unwrap();
        let y = apply_homeo(&h, &x).unwrap();
        // -1/4 -> -1/9, 3 -> 2 (index 0), 5 -> 5 (index 1)
        assert_eq!(y.to_string(), "-10/9");
        assert_eq!(apply_homeo_inverse(&h, &y).unwrap(), x);
        let z5 = RingId::p_local(5).unwrap();
        let z7 = RingId::p_local(7).unwrap();
        let h = build_homeo(&z5, &z7).unwrap();
        assert_eq!(apply_homeo(&h, &z5.one()).unwrap(), z7.one());
        let x = Element::fraction(&z5, 50, 3).unwrap();
        let y = apply_homeo(&h, &x).unwrap();
        assert_eq!(support(&y).unwrap().to_string(), "{7}");
        assert_eq!(apply_homeo_inverse(&h, &y).unwrap(), x);
    }

    #[test]
    fn verification_small() {
        let h = build_homeo(&RingId::Int, &f3()).unwrap();
        let w = enumerate_elements(&RingId::Int, 40).unwrap();
        let r = verify_homeo(&h, &w).unwrap();
        assert!(r.passed(), "{r:?}");
        let bad = PatchedMap {
            base: &h,
            patches: vec![(Element::int(2), Element::parse(&f3(), "x+1").unwrap())],
        };
        let r = verify_homeo(&bad, &w).unwrap();
        assert!(r.membership_violations >= 1 && r.support_violations >= 1);
        assert!(!r.passed());
    }

    #[test]
    fn certificates() {
        let f2 = RingId::poly_over_fp(2).unwrap();
        let ws = enumerate_elements(&RingId::Int, 40).unwrap();
        let wt = enumerate_elements(&f2, 40).unwrap();
        let c = non_homeo_certificate(&RingId::Int, &f2, &ws, &wt).unwrap();
        assert!(c.differs_at_every_bound);
        assert!(c.series.iter().all(|p| p.source == 2 && p.target == 1));
        let g = enumerate_elements(&RingId::GaussianInt, 20).unwrap();
        let c = non_homeo_certificate(&RingId::GaussianInt, &RingId::Int, &g, &ws).unwrap();
        assert_eq!((c.series[0].source, c.series[0].target), (4, 2));
        assert_eq!(
            non_homeo_certificate(&RingId::Int, &f3(), &ws, &ws),
            Err(Error::PreconditionHomeomorphic)
        );
        assert_eq!(series_bounds(100), [1, 2, 5, 10, 20, 50, 100]);
    }
}
