//! Window certificates for semiprimitivity, openness of the unit group,
//! density of the primes, maximal proper singleton closures and the
//! classification invariants.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::enumeration::{enumerate_prime_classes, find_prime_outside, Window};
use crate::error::{Error, Result};
use crate::rings::{Cardinal, Element, RingId};
use crate::topology::{closure_singleton, in_basic_open, support, window_supports, ClosureDescriptor, Support};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemiprimitivityVerdict {
    pub ring: RingId,
    pub semiprimitive: bool,
    /// A nonzero element of the Jacobson radical when it is nonzero.
    pub jacobson_witness: Option<Element>,
    pub primes: Cardinal,
    /// Finite prime count iff not semiprimitive.
    pub consistent: bool,
}

/// Declared per ring, then checked against the prime count.
pub fn semiprimitivity(ring: &RingId) -> Result<SemiprimitivityVerdict> {
    ring.require_pid("semiprimitivity")?;
    let primes = ring.primes_cardinality()?;
    let (semiprimitive, jacobson_witness) = match ring {
        // the unique maximal ideal is <p>, so p lies in every maximal ideal
        RingId::PLocal(p) => (false, Some(ring.from_i64(*p as i64))),
        _ => (true, None),
    };
    Ok(SemiprimitivityVerdict {
        ring: ring.clone(),
        semiprimitive,
        jacobson_witness,
        primes,
        consistent: semiprimitive == (primes == Cardinal::CountablyInfinite),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenRecord {
    pub k: Element,
    /// A non-unit in `sigma_k`.
    pub witness: Option<Element>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OpennessVerdict {
    /// `sigma_alpha` lies inside the unit group.
    UnitsOpen {
        alpha: Element,
        alpha_support_is_all_primes: bool,
        members_checked: usize,
        non_unit_members: Vec<Element>,
    },
    UnitsNotOpenCertified { records: Vec<OpenRecord> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpennessReport {
    pub ring: RingId,
    pub window_bound: u64,
    pub verdict: OpennessVerdict,
}

impl OpennessReport {
    pub fn units_open(&self) -> bool {
        matches!(self.verdict, OpennessVerdict::UnitsOpen { .. })
    }

    pub fn violations(&self) -> usize {
        match &self.verdict {
            OpennessVerdict::UnitsOpen {
                non_unit_members,
                alpha_support_is_all_primes,
                ..
            } => non_unit_members.len() + usize::from(!alpha_support_is_all_primes),
            OpennessVerdict::UnitsNotOpenCertified { records } => {
                records.iter().filter(|r| !r.ok).count()
            }
        }
    }

    pub fn to_json(&self) -> Json {
        let (verdict, records) = match &self.verdict {
            OpennessVerdict::UnitsOpen { .. } => ("units-open", json!([self.verdict])),
            OpennessVerdict::UnitsNotOpenCertified { records } => ("units-not-open-certified", json!(records)),
        };
        report_json(&self.ring, self.window_bound, verdict, records, self.violations())
    }
}

fn report_json(ring: &RingId, bound: u64, verdict: &str, records: Json, violations: usize) -> Json {
    json!({
        "ring": ring,
        "window_bound": bound,
        "verdict": verdict,
        "violations": violations,
        "records": records,
    })
}

fn check_ring(ring: &RingId, w: &Window) -> Result<()> {
    ring.require_pid("window certificate")?;
    if &w.ring != ring {
        return Err(Error::RingMismatch {
            left: ring.to_string(),
            right: w.ring.to_string(),
        });
    }
    Ok(())
}

/// A non-unit in `sigma_k`: a prime outside the support of `k`.
fn outside_witness(k: &Element) -> Result<Option<Element>> {
    match find_prime_outside(&support(k)?) {
        Ok(p) => Ok(Some(p.representative().clone())),
        Err(Error::NoPrimeOutside { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn units_openness(ring: &RingId, w: &Window) -> Result<OpennessReport> {
    check_ring(ring, w)?;
    let verdict = match ring.primes_cardinality()? {
        Cardinal::Finite(n) => {
            let primes = enumerate_prime_classes(ring, n)?;
            let mut alpha = ring.one();
            for p in &primes {
                alpha = alpha.mul(p.representative())?;
            }
            let all = Support::new(ring.clone(), primes);
            let flags: Vec<Option<bool>> = w
                .elements
                .par_iter()
                .map(|s| -> Result<Option<bool>> {
                    Ok(if in_basic_open(s, &alpha)? {
                        Some(s.is_unit()?)
                    } else {
                        None
                    })
                })
                .collect::<Result<_>>()?;
            let members_checked = flags.iter().flatten().count();
            let non_unit_members = w
                .elements
                .iter()
                .zip(&flags)
                .filter(|(_, f)| **f == Some(false))
                .map(|(s, _)| s.clone())
                .collect();
            OpennessVerdict::UnitsOpen {
                alpha_support_is_all_primes: support(&alpha)? == all,
                alpha,
                members_checked,
                non_unit_members,
            }
        }
        Cardinal::CountablyInfinite => {
            let records = w
                .elements
                .par_iter()
                .map(|k| -> Result<OpenRecord> {
                    let witness = outside_witness(k)?;
                    let ok = match &witness {
                        Some(s) => in_basic_open(s, k)? && !s.is_unit()?,
                        None => false,
                    };
                    Ok(OpenRecord {
                        k: k.clone(),
                        witness,
                        ok,
                    })
                })
                .collect::<Result<_>>()?;
            OpennessVerdict::UnitsNotOpenCertified { records }
        }
    };
    Ok(OpennessReport {
        ring: ring.clone(),
        window_bound: w.bound,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityRecord {
    pub k: Element,
    /// A prime in `sigma_k`.
    pub prime_witness: Option<Element>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub ring: RingId,
    pub window_bound: u64,
    pub records: Vec<DensityRecord>,
    pub dense_certified: bool,
    /// For finitely many primes: the product `alpha` of all of them, and
    /// whether each prime was checked to lie outside `sigma_alpha`.
    pub empty_open: Option<(Element, bool)>,
}

impl DensityReport {
    pub fn witnessed(&self) -> usize {
        self.records.iter().filter(|r| r.ok).count()
    }

    pub fn to_json(&self) -> Json {
        let verdict = if self.dense_certified { "dense-certified" } else { "not-dense" };
        let mut v = report_json(&self.ring, self.window_bound, verdict, json!(self.records), 0);
        v["witnessed"] = json!(self.witnessed());
        if let Some((alpha, ok)) = &self.empty_open {
            v["certificate"] = json!({ "alpha": alpha, "primes_in_open": !ok });
        }
        v
    }
}

pub fn prime_density(ring: &RingId, w: &Window) -> Result<DensityReport> {
    check_ring(ring, w)?;
    let records: Vec<DensityRecord> = w
        .elements
        .par_iter()
        .map(|k| -> Result<DensityRecord> {
            let prime_witness = outside_witness(k)?;
            let ok = match &prime_witness {
                Some(p) => in_basic_open(p, k)? && !p.is_unit()?,
                None => false,
            };
            Ok(DensityRecord {
                k: k.clone(),
                prime_witness,
                ok,
            })
        })
        .collect::<Result<_>>()?;
    let empty_open = match ring.primes_cardinality()? {
        Cardinal::Finite(n) => {
            let primes = enumerate_prime_classes(ring, n)?;
            let mut alpha = ring.one();
            for p in &primes {
                alpha = alpha.mul(p.representative())?;
            }
            let mut none_inside = true;
            for p in &primes {
                none_inside &= !in_basic_open(p.representative(), &alpha)?;
            }
            Some((alpha, none_inside))
        }
        Cardinal::CountablyInfinite => None,
    };
    let dense_certified = !records.is_empty() && records.iter().all(|r| r.ok);
    Ok(DensityReport {
        ring: ring.clone(),
        window_bound: w.bound,
        records,
        dense_certified,
        empty_open,
    })
}

/// The proper closures of window points that no other proper closure
/// strictly contains.
pub fn maximal_singleton_closures(w: &Window) -> Result<Vec<ClosureDescriptor>> {
    let descriptors = window_descriptors(w)?;
    let supports: Vec<&Support> = descriptors
        .iter()
        .filter_map(|d| match d {
            ClosureDescriptor::DivisibleByAll(s) => Some(s),
            ClosureDescriptor::WholeSpace => None,
        })
        .collect();
    // a larger closure has a smaller support
    Ok(supports
        .iter()
        .filter(|s| !supports.iter().any(|t| t.len() < s.len() && t.is_subset(s)))
        .map(|s| ClosureDescriptor::DivisibleByAll((*s).clone()))
        .collect())
}

fn window_descriptors(w: &Window) -> Result<BTreeSet<ClosureDescriptor>> {
    w.ring.require_pid("maximal_singleton_closures")?;
    let all: Vec<ClosureDescriptor> = w.elements.par_iter().map(closure_singleton).collect::<Result<_>>()?;
    Ok(all.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrictRecord {
    pub closure: ClosureDescriptor,
    pub above: ClosureDescriptor,
    /// In `above` but not in `closure`.
    pub witness: Element,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalClosureReport {
    pub ring: RingId,
    pub window_bound: u64,
    pub maximal: Vec<ClosureDescriptor>,
    /// The maximal closures are exactly `<p>0` for the primes met in the window.
    pub single_primes_exactly: bool,
    pub strict: Vec<StrictRecord>,
}

impl MaximalClosureReport {
    pub fn violations(&self) -> usize {
        usize::from(!self.single_primes_exactly) + self.strict.iter().filter(|r| !r.ok).count()
    }

    pub fn to_json(&self) -> Json {
        let mut v = report_json(
            &self.ring,
            self.window_bound,
            if self.violations() == 0 { "verified" } else { "violated" },
            json!(self.strict),
            self.violations(),
        );
        v["maximal"] = json!(self.maximal);
        v["count"] = json!(self.maximal.len());
        v
    }
}

pub fn maximal_closure_report(w: &Window) -> Result<MaximalClosureReport> {
    let maximal = maximal_singleton_closures(w)?;
    let descriptors = window_descriptors(w)?;
    let primes: BTreeSet<_> = descriptors
        .iter()
        .filter_map(|d| match d {
            ClosureDescriptor::DivisibleByAll(s) => Some(s.classes().to_vec()),
            ClosureDescriptor::WholeSpace => None,
        })
        .flatten()
        .collect();
    let expected: Vec<ClosureDescriptor> = primes
        .into_iter()
        .map(|p| ClosureDescriptor::DivisibleByAll(Support::new(w.ring.clone(), vec![p])))
        .collect();
    let mut sorted = maximal.clone();
    sorted.sort();
    let mut expected_sorted = expected;
    expected_sorted.sort();
    let mut strict = Vec::new();
    for d in &descriptors {
        let ClosureDescriptor::DivisibleByAll(s) = d else { continue };
        if s.len() < 2 {
            continue;
        }
        // dropping the first prime: the product of the others lies in the
        // closure of the second prime but not in this one
        let rest = Support::new(w.ring.clone(), s.classes()[1..].to_vec());
        let above = ClosureDescriptor::DivisibleByAll(Support::new(w.ring.clone(), vec![s.classes()[1].clone()]));
        let mut witness = w.ring.one();
        for c in rest.classes() {
            witness = witness.mul(c.representative())?;
        }
        let ok = above.contains(&witness)? && !d.contains(&witness)? && d.is_subset(&above) && !above.is_subset(d);
        strict.push(StrictRecord {
            closure: d.clone(),
            above,
            witness,
            ok,
        });
    }
    Ok(MaximalClosureReport {
        ring: w.ring.clone(),
        window_bound: w.bound,
        single_primes_exactly: sorted == expected_sorted,
        maximal,
        strict,
    })
}

pub fn support_partition(w: &Window) -> Result<BTreeMap<Support, Vec<Element>>> {
    w.ring.require_pid("support_partition")?;
    let mut blocks: BTreeMap<Support, Vec<Element>> = BTreeMap::new();
    for (x, s) in w.elements.iter().zip(window_supports(w)?) {
        blocks.entry(s).or_default().push(x.clone());
    }
    Ok(blocks)
}

pub fn partition_json(w: &Window, blocks: &BTreeMap<Support, Vec<Element>>) -> Json {
    let records: Vec<Json> = blocks
        .iter()
        .map(|(s, xs)| json!({ "support": s, "size": xs.len(), "elements": xs }))
        .collect();
    report_json(&w.ring, w.bound, "partition", json!(records), 0)
}

pub fn classification_invariants(ring: &RingId) -> Result<(Cardinal, Cardinal)> {
    ring.require_pid("classification_invariants")?;
    Ok((ring.units_cardinality(), ring.primes_cardinality()?))
}

/// The four equivalent conditions evaluated independently on one window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub ring: RingId,
    pub window_bound: u64,
    pub units_not_open: bool,
    pub primes_dense: bool,
    pub primes_infinite: bool,
    pub semiprimitive: bool,
    pub jacobson_witness: Option<Element>,
    pub violations: usize,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        let v = self.units_not_open;
        self.primes_dense == v && self.primes_infinite == v && self.semiprimitive == v
    }
}

pub fn equivalence_report(ring: &RingId, w: &Window) -> Result<EquivalenceReport> {
    let openness = units_openness(ring, w)?;
    let density = prime_density(ring, w)?;
    let semi = semiprimitivity(ring)?;
    let mut violations = openness.violations() + usize::from(!semi.consistent);
    if let Some((_, ok)) = &density.empty_open {
        violations += usize::from(!ok);
    }
    Ok(EquivalenceReport {
        ring: ring.clone(),
        window_bound: w.bound,
        units_not_open: !openness.units_open(),
        primes_dense: density.dense_certified,
        primes_infinite: semi.primes == Cardinal::CountablyInfinite,
        semiprimitive: semi.semiprimitive,
        jacobson_witness: semi.jacobson_witness,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::enumerate_elements;

    #[test]
    fn semiprimitivity_verdicts() {
        assert!(semiprimitivity(&RingId::Int).unwrap().semiprimitive);
        let z5 = RingId::p_local(5).unwrap();
        let v = semiprimitivity(&z5).unwrap();
        assert!(!v.semiprimitive && v.consistent);
        assert_eq!(v.jacobson_witness.unwrap().to_string(), "5");
        assert!(semiprimitivity(&RingId::s_inverted([2, 3]).unwrap()).unwrap().semiprimitive);
        assert!(semiprimitivity(&RingId::IntPoly).is_err());
    }

    #[test]
    fn openness() {
        let z5 = RingId::p_local(5).unwrap();
        let w = enumerate_elements(&z5, 25).unwrap();
        let r = units_openness(&z5, &w).unwrap();
        assert!(r.units_open());
        assert_eq!(r.violations(), 0);
        let w = enumerate_elements(&RingId::Int, 30).unwrap();
        let r = units_openness(&RingId::Int, &w).unwrap();
        let OpennessVerdict::UnitsNotOpenCertified { records } = &r.verdict else {
            panic!("Z has infinitely many primes")
        };
        let six = records.iter().find(|r| r.k == Element::int(6)).unwrap();
        assert_eq!(six.witness, Some(Element::int(5)));
        let one = records.iter().find(|r| r.k == Element::int(1)).unwrap();
        assert_eq!(one.witness, Some(Element::int(2)));
        assert_eq!(r.violations(), 0);
    }

    #[test]
    fn density() {
        let f3 = RingId::poly_over_fp(3).unwrap();
        let w = enumerate_elements(&f3, 243).unwrap();
        assert!(prime_density(&f3, &w).unwrap().dense_certified);
        let z5 = RingId::p_local(5).unwrap();
        let w = enumerate_elements(&z5, 10).unwrap();
        let d = prime_density(&z5, &w).unwrap();
        assert!(!d.dense_certified);
        assert_eq!(d.empty_open.as_ref().map(|(a, ok)| (a.to_string(), *ok)), Some(("5".into(), true)));
    }

    #[test]
    fn maximal_closures() {
        let w = enumerate_elements(&RingId::Int, 10).unwrap();
        let m: Vec<String> = maximal_singleton_closures(&w).unwrap().iter().map(|d| d.to_string()).collect();
        assert_eq!(m, ["<2>0", "<3>0", "<5>0", "<7>0"]);
        let z5 = RingId::p_local(5).unwrap();
        let w5 = enumerate_elements(&z5, 30).unwrap();
        assert_eq!(maximal_singleton_closures(&w5).unwrap().len(), 1);
        let units = enumerate_elements(&RingId::Int, 1).unwrap();
        assert!(maximal_singleton_closures(&units).unwrap().is_empty());
        let r = maximal_closure_report(&enumerate_elements(&RingId::Int, 60).unwrap()).unwrap();
        assert_eq!(r.violations(), 0);
        assert!(!r.strict.is_empty());
    }

    #[test]
    fn partition() {
        let w = enumerate_elements(&RingId::Int, 10).unwrap();
        let blocks = support_partition(&w).unwrap();
        let block = |s: &str| -> Vec<String> {
            blocks
                .iter()
                .find(|(k, _)| k.to_string() == s)
                .map(|(_, v)| v.iter().map(|x| x.to_string()).collect())
                .unwrap()
        };
        assert_eq!(block("{2}"), ["2", "-2", "4", "-4", "8", "-8"]);
        assert_eq!(block("{2,3}"), ["6", "-6"]);
        assert_eq!(block("{}"), ["1", "-1"]);
        let total: usize = blocks.values().map(Vec::len).sum();
        assert_eq!(total, w.len());
    }

    #[test]
    fn invariant_pairs() {
        assert_eq!(
            classification_invariants(&RingId::Int).unwrap(),
            (Cardinal::Finite(2), Cardinal::CountablyInfinite)
        );
        assert_eq!(
            classification_invariants(&RingId::poly_over_fp(2).unwrap()).unwrap(),
            (Cardinal::Finite(1), Cardinal::CountablyInfinite)
        );
        assert_eq!(
            classification_invariants(&RingId::s_inverted([2]).unwrap()).unwrap(),
            (Cardinal::CountablyInfinite, Cardinal::CountablyInfinite)
        );
    }
}
