//! Basic opens, prime supports, singleton closures and the specialization
//! preorder of the Macías space over a PID.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::enumeration::{PrimeClass, Window};
use crate::error::Result;
use crate::rings::{intpoly, Element, RingId, Value};

/// A finite set of prime classes, sorted by enumeration index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Support {
    ring: RingId,
    classes: Vec<PrimeClass>,
}

impl Support {
    pub fn new(ring: RingId, mut classes: Vec<PrimeClass>) -> Support {
        classes.sort();
        classes.dedup();
        Support { ring, classes }
    }

    pub fn empty(ring: RingId) -> Support {
        Support {
            ring,
            classes: Vec::new(),
        }
    }

    pub fn ring(&self) -> &RingId {
        &self.ring
    }

    pub fn classes(&self) -> &[PrimeClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, class: &PrimeClass) -> bool {
        self.classes.binary_search(class).is_ok()
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.classes.iter().all(|c| other.contains(c))
    }

    pub fn is_disjoint(&self, other: &Support) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.classes.len() && j < other.classes.len() {
            match self.classes[i].cmp(&other.classes[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn map(&self, ring: RingId, f: impl Fn(&PrimeClass) -> Result<PrimeClass>) -> Result<Support> {
        let classes = self.classes.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Support::new(ring, classes))
    }

    fn literals(&self) -> Vec<String> {
        self.classes
            .iter()
            .map(|c| c.representative().to_string())
            .collect()
    }
}

impl std::fmt::Display for Support {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.literals().join(","))
    }
}

impl Serialize for Support {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.literals().serialize(s)
    }
}

/// `sigma_k = { s : <k> + <s> = R }`, with the generator's support cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicOpen {
    pub generator: Element,
    pub generator_support: Support,
}

impl BasicOpen {
    pub fn new(generator: Element) -> Result<BasicOpen> {
        let generator_support = support(&generator)?;
        Ok(BasicOpen {
            generator,
            generator_support,
        })
    }

    pub fn contains(&self, s: &Element) -> Result<bool> {
        in_basic_open(s, &self.generator)
    }

    pub fn is_whole_space(&self) -> bool {
        self.generator_support.is_empty()
    }
}

/// Symbolic closure of a singleton.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosureDescriptor {
    WholeSpace,
    /// All nonzero elements divisible by every listed prime.
    DivisibleByAll(Support),
}

impl ClosureDescriptor {
    /// Containment of the denoted sets: `self` is a subset of `other`.
    pub fn is_subset(&self, other: &ClosureDescriptor) -> bool {
        match (self, other) {
            (_, ClosureDescriptor::WholeSpace) => true,
            (ClosureDescriptor::WholeSpace, _) => false,
            (ClosureDescriptor::DivisibleByAll(a), ClosureDescriptor::DivisibleByAll(b)) => {
                b.is_subset(a)
            }
        }
    }

    pub fn contains(&self, y: &Element) -> Result<bool> {
        Ok(match self {
            ClosureDescriptor::WholeSpace => true,
            ClosureDescriptor::DivisibleByAll(s) => s.is_subset(&support(y)?),
        })
    }
}

impl std::fmt::Display for ClosureDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClosureDescriptor::WholeSpace => write!(f, "R0"),
            ClosureDescriptor::DivisibleByAll(s) => {
                let parts: Vec<String> = s.literals().iter().map(|p| format!("<{p}>0")).collect();
                write!(f, "{}", parts.join(" & "))
            }
        }
    }
}

impl Serialize for ClosureDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ClosureDescriptor::WholeSpace => json!({ "kind": "whole-space" }),
            ClosureDescriptor::DivisibleByAll(sup) => {
                json!({ "kind": "divisible-by-all", "primes": sup })
            }
        }
        .serialize(s)
    }
}

pub fn support(x: &Element) -> Result<Support> {
    let d = x.factor()?;
    Ok(Support::new(
        x.ring().clone(),
        d.factors.into_iter().map(|(c, _)| c).collect(),
    ))
}

/// `s` in `sigma_k`, decided by the ideal `<k> + <s>`.
pub fn in_basic_open(s: &Element, k: &Element) -> Result<bool> {
    k.coprime(s)
}

/// The same membership through prime supports; valid in PIDs only.
pub fn in_basic_open_via_support(s: &Element, k: &Element) -> Result<bool> {
    Ok(support(s)?.is_disjoint(&support(k)?))
}

pub fn closure_singleton(x: &Element) -> Result<ClosureDescriptor> {
    let sup = support(x)?;
    Ok(if sup.is_empty() {
        ClosureDescriptor::WholeSpace
    } else {
        ClosureDescriptor::DivisibleByAll(sup)
    })
}

/// Supports of every window element, computed in parallel, in window order.
pub fn window_supports(w: &Window) -> Result<Vec<Support>> {
    w.elements.par_iter().map(support).collect()
}

pub fn closure_members(x: &Element, w: &Window) -> Result<Vec<Element>> {
    let closure = closure_singleton(x)?;
    let keep: Vec<bool> = w
        .elements
        .par_iter()
        .map(|y| closure.contains(y))
        .collect::<Result<_>>()?;
    Ok(w
        .elements
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(y, _)| y.clone())
        .collect())
}

/// A prime `p` dividing `x` but not `y`, when one exists.
pub fn separating_witness(x: &Element, y: &Element) -> Result<Option<Element>> {
    let sy = support(y)?;
    Ok(support(x)?
        .classes()
        .iter()
        .find(|c| !sy.contains(c))
        .map(|c| c.representative().clone()))
}

pub fn is_generic_point(x: &Element) -> Result<bool> {
    x.is_unit()
}

/// Edges `y -> x` whenever `x` lies in the closure of `{y}`, reflexive edges
/// omitted. Indices refer to `w.elements`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationGraph {
    pub nodes: Vec<Element>,
    pub edges: Vec<(usize, usize)>,
}

pub fn specialization_graph(w: &Window) -> Result<SpecializationGraph> {
    w.ring.require_pid("specialization_graph")?;
    let supports = window_supports(w)?;
    let edges: Vec<(usize, usize)> = (0..supports.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let supports = &supports;
            (0..supports.len())
                .filter(move |&j| j != i && supports[i].is_subset(&supports[j]))
                .map(move |j| (i, j))
        })
        .collect();
    Ok(SpecializationGraph {
        nodes: w.elements.clone(),
        edges,
    })
}

impl SpecializationGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph specialization {\n");
        for (i, x) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{x}\"];");
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }

    /// `{ literal: [successor literals] }` in window order.
    pub fn to_json(&self) -> Json {
        let mut adjacency: BTreeMap<String, Vec<String>> = self
            .nodes
            .iter()
            .map(|x| (x.to_string(), Vec::new()))
            .collect();
        for (a, b) in &self.edges {
            adjacency
                .get_mut(&self.nodes[*a].to_string())
                .expect("node present")
                .push(self.nodes[*b].to_string());
        }
        json!({
            "nodes": self.nodes,
            "adjacency": adjacency,
        })
    }

    pub fn has_edge(&self, from: &Element, to: &Element) -> bool {
        let pos = |e: &Element| self.nodes.iter().position(|x| x == e);
        match (pos(from), pos(to)) {
            (Some(a), Some(b)) => self.edges.binary_search(&(a, b)).is_ok(),
            _ => false,
        }
    }
}

/// Machine-checked evidence that `2` and `x` have disjoint supports in
/// `Z[x]` yet generate a proper ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZxCounterexample {
    pub ring: RingId,
    pub k: Element,
    pub s: Element,
    pub k_is_prime: bool,
    pub s_is_prime: bool,
    pub supports_disjoint: bool,
    pub coprime: bool,
    /// Every lattice generator `x^i * 2`, `x^j * x` has an even constant term.
    pub generators_constant_terms_even: bool,
    pub oracle_coprime: bool,
    pub oracle_bound: u64,
    pub sanity: Vec<ZxSanityCase>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZxSanityCase {
    pub k: Element,
    pub s: Element,
    pub coprime: bool,
    pub oracle_coprime: bool,
    /// `(a, b)` with `a*k + b*s = 1`, found by the oracle.
    pub cofactors: Option<(Element, Element)>,
}

pub const ZX_ORACLE_BOUND: u64 = 8;

pub fn zx_counterexample() -> Result<ZxCounterexample> {
    let two = Element::int_poly(&[2]);
    let x = Element::int_poly(&[0, 1]);
    let prime = |e: &Element| match e.value() {
        Value::IntPoly(f) => intpoly::is_prime_low_degree(f) == Some(true),
        _ => false,
    };
    // Distinct non-associate primes, so each support is a single class and
    // the two supports are disjoint.
    let (uk, k_rep) = two.canonical_associate()?;
    let (us, s_rep) = x.canonical_associate()?;
    let supports_disjoint = prime(&two) && prime(&x) && k_rep != s_rep && uk.is_unit()? && us.is_unit()?;
    let degree = ZX_ORACLE_BOUND as usize;
    let generators_constant_terms_even = (0..=degree).all(|i| {
        let gi = |f: &Element| match f.mul(&x.pow(i as u32)) {
            Ok(e) => match e.value() {
                Value::IntPoly(cs) => cs.first().map(|c| c % 2 == 0.into()).unwrap_or(true),
                _ => false,
            },
            Err(_) => false,
        };
        gi(&two) && gi(&x)
    });
    let mut sanity = Vec::new();
    let pairs = [
        (two.clone(), Element::int_poly(&[1, 2])),
        (two.clone(), Element::int_poly(&[1, 1])),
        (Element::int_poly(&[1, 1]), x.clone()),
    ];
    for (k, s) in pairs {
        let cof = crate::oracle::oracle_coprime_cofactors(&k, &s, ZX_ORACLE_BOUND)?;
        sanity.push(ZxSanityCase {
            coprime: k.coprime(&s)?,
            oracle_coprime: cof.is_some(),
            cofactors: cof,
            k,
            s,
        });
    }
    Ok(ZxCounterexample {
        ring: RingId::IntPoly,
        k_is_prime: prime(&two),
        s_is_prime: prime(&x),
        supports_disjoint,
        coprime: two.coprime(&x)?,
        generators_constant_terms_even,
        oracle_coprime: crate::oracle::oracle_coprime(&two, &x, ZX_ORACLE_BOUND)?,
        oracle_bound: ZX_ORACLE_BOUND,
        sanity,
        k: two,
        s: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::enumerate_elements;

    fn z(n: i64) -> Element {
        Element::int(n)
    }

    fn lits(v: &[Element]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn supports() {
        assert_eq!(support(&z(12)).unwrap().to_string(), "{2,3}");
        assert!(support(&z(-1)).unwrap().is_empty());
        let s3 = RingId::s_inverted([3]).unwrap();
        let x = Element::fraction(&s3, 50, 3).unwrap();
        assert_eq!(support(&x).unwrap().to_string(), "{2,5}");
        assert!(support(&Element::int_poly(&[2])).is_err());
    }

    #[test]
    fn memberships() {
        assert!(in_basic_open(&z(6), &z(35)).unwrap());
        assert!(in_basic_open(&z(12), &z(-1)).unwrap());
        assert!(!in_basic_open(&Element::int_poly(&[2]), &Element::int_poly(&[0, 1])).unwrap());
        assert!(!in_basic_open(&z(4), &z(4)).unwrap());
        assert!(in_basic_open(&z(1), &z(1)).unwrap());
    }

    #[test]
    fn closures() {
        assert_eq!(closure_singleton(&z(1)).unwrap(), ClosureDescriptor::WholeSpace);
        assert_eq!(closure_singleton(&z(6)).unwrap().to_string(), "<2>0 & <3>0");
        assert_eq!(closure_singleton(&z(7)).unwrap().to_string(), "<7>0");
        let w = enumerate_elements(&RingId::Int, 20).unwrap();
        assert_eq!(
            lits(&closure_members(&z(6), &w).unwrap()),
            ["6", "-6", "12", "-12", "18", "-18"]
        );
        assert_eq!(closure_members(&z(-1), &w).unwrap(), w.elements);
        let z5 = RingId::p_local(5).unwrap();
        let w5 = enumerate_elements(&z5, 30).unwrap();
        let five = Element::fraction(&z5, 5, 1).unwrap();
        let nonunits: Vec<_> = w5
            .elements
            .iter()
            .filter(|e| !e.is_unit().unwrap())
            .cloned()
            .collect();
        assert_eq!(closure_members(&five, &w5).unwrap(), nonunits);
    }

    #[test]
    fn witnesses() {
        assert_eq!(separating_witness(&z(6), &z(10)).unwrap(), Some(z(3)));
        assert_eq!(separating_witness(&z(6), &z(12)).unwrap(), None);
        assert_eq!(separating_witness(&z(-1), &z(7)).unwrap(), None);
        let p = separating_witness(&z(6), &z(10)).unwrap().unwrap();
        assert!(in_basic_open(&z(10), &p).unwrap());
        assert!(!in_basic_open(&z(6), &p).unwrap());
    }

    #[test]
    fn generic_points() {
        assert!(is_generic_point(&z(-1)).unwrap());
        assert!(!is_generic_point(&z(2)).unwrap());
        let s2 = RingId::s_inverted([2]).unwrap();
        assert!(is_generic_point(&Element::fraction(&s2, 1, 2).unwrap()).unwrap());
    }

    #[test]
    fn graph_edges() {
        let w = enumerate_elements(&RingId::Int, 6).unwrap();
        let g = specialization_graph(&w).unwrap();
        assert!(g.has_edge(&z(2), &z(4)));
        assert!(g.has_edge(&z(2), &z(6)));
        assert!(g.has_edge(&z(4), &z(2)));
        assert!(!g.has_edge(&z(2), &z(3)) && !g.has_edge(&z(3), &z(2)));
        for x in &w.elements {
            if x != &z(1) {
                assert!(g.has_edge(&z(1), x));
            }
        }
        assert_eq!(g.to_dot(), specialization_graph(&w).unwrap().to_dot());
    }

    #[test]
    fn graph_is_transitive() {
        let w = enumerate_elements(&RingId::GaussianInt, 20).unwrap();
        let g = specialization_graph(&w).unwrap();
        let n = g.nodes.len();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in &g.edges {
            adj[a][b] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if !adj[a][b] {
                    continue;
                }
                for c in 0..n {
                    if adj[b][c] && c != a {
                        assert!(adj[a][c]);
                    }
                }
            }
        }
    }

    #[test]
    fn zx_report() {
        let r = zx_counterexample().unwrap();
        assert!(r.supports_disjoint && r.k_is_prime && r.s_is_prime);
        assert!(!r.coprime && !r.oracle_coprime);
        assert!(r.generators_constant_terms_even);
        assert!(r.sanity[0].coprime && r.sanity[0].oracle_coprime);
        assert!(!r.sanity[1].coprime && !r.sanity[1].oracle_coprime);
        assert!(r.sanity[2].coprime && r.sanity[2].oracle_coprime);
    }
}
