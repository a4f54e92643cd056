use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::enumeration::enumerate_elements;

fn z(n: i64) -> Element {
    Element::int(n)
}

fn rings() -> Vec<RingId> {
    vec![
        RingId::Int,
        RingId::poly_over_fp(2).unwrap(),
        RingId::poly_over_fp(3).unwrap(),
        RingId::GaussianInt,
        RingId::p_local(5).unwrap(),
        RingId::s_inverted([2]).unwrap(),
        RingId::s_inverted([2, 3]).unwrap(),
    ]
}

fn small_bound(ring: &RingId) -> u64 {
    match ring {
        RingId::PLocal(_) | RingId::SInverted(_) => 12,
        RingId::PolyOverFp(2) => 64,
        RingId::PolyOverFp(_) => 81,
        RingId::GaussianInt => 25,
        _ => 40,
    }
}

#[test]
fn gcd_examples() {
    let (g, x, y) = z(6).gcd_bezout(&z(35)).unwrap();
    assert_eq!(g, z(1));
    assert_eq!(x.mul(&z(6)).unwrap().add(&y.mul(&z(35)).unwrap()).unwrap(), z(1));
    assert_eq!(z(4).gcd_bezout(&z(6)).unwrap().0, z(2));
    assert_eq!(z(-1).gcd_bezout(&z(12)).unwrap().0, z(1));
    assert!(matches!(
        Element::int_poly(&[2]).gcd_bezout(&Element::int_poly(&[0, 1])),
        Err(Error::UnsupportedForRing { .. })
    ));
    assert_eq!(z(0).gcd_bezout(&z(3)), Err(Error::ZeroElement));
}

#[test]
fn unit_examples() {
    assert!(z(-1).is_unit().unwrap());
    let z5 = RingId::p_local(5).unwrap();
    assert!(Element::fraction(&z5, 3, 2).unwrap().is_unit().unwrap());
    assert!(Element::fraction(&z5, 3, 5).is_err());
    let f2 = RingId::poly_over_fp(2).unwrap();
    assert!(!Element::parse(&f2, "x+1").unwrap().is_unit().unwrap());
    let s = RingId::s_inverted([2, 3]).unwrap();
    assert!(Element::fraction(&s, -12, 1).unwrap().is_unit().unwrap());
    assert!(!Element::fraction(&s, 10, 3).unwrap().is_unit().unwrap());
}

#[test]
fn associate_examples() {
    assert_eq!(z(-6).canonical_associate().unwrap(), (z(-1), z(6)));
    let f3 = RingId::poly_over_fp(3).unwrap();
    let (u, c) = Element::parse(&f3, "2x+2").unwrap().canonical_associate().unwrap();
    assert_eq!((u.to_string(), c.to_string()), ("2".into(), "x+1".into()));
    let (u, c) = Element::gaussian(1, 2).canonical_associate().unwrap();
    assert_eq!((u, c), (Element::gaussian(1, 0), Element::gaussian(1, 2)));
    let z5 = RingId::p_local(5).unwrap();
    let (u, c) = Element::fraction(&z5, -50, 3).unwrap().canonical_associate().unwrap();
    assert_eq!((u.to_string(), c.to_string()), ("-2/3".into(), "25".into()));
}

#[test]
fn factor_examples() {
    let d = z(12).factor().unwrap();
    assert_eq!(d.unit, z(1));
    let fs: Vec<(String, u32)> = d
        .factors
        .iter()
        .map(|(p, e)| (p.representative().to_string(), *e))
        .collect();
    assert_eq!(fs, [("2".to_string(), 2), ("3".to_string(), 1)]);
    assert!(z(-1).factor().unwrap().factors.is_empty());
    let d = Element::gaussian(5, 0).factor().unwrap();
    assert_eq!(d.factors.len(), 2);
    assert!(d.factors.iter().all(|(_, e)| *e == 1));
    assert_eq!(d.recompose().unwrap(), Element::gaussian(5, 0));
    assert!(Element::int_poly(&[0, 1]).factor().is_err());
}

#[test]
fn coprime_examples() {
    assert!(!Element::int_poly(&[2]).coprime(&Element::int_poly(&[0, 1])).unwrap());
    assert!(z(6).coprime(&z(35)).unwrap());
    assert!(z(-1).coprime(&z(1024)).unwrap());
    assert_eq!(z(0).coprime(&z(1)), Err(Error::ZeroElement));
}

#[test]
fn cardinalities() {
    use Cardinal::*;
    let got: Vec<Cardinal> = rings().iter().map(|r| r.units_cardinality()).collect();
    assert_eq!(
        got,
        [Finite(2), Finite(1), Finite(2), Finite(4), CountablyInfinite, CountablyInfinite, CountablyInfinite]
    );
    assert_eq!(RingId::IntPoly.units_cardinality(), Finite(2));
    for r in rings() {
        if let (Finite(n), Some(list)) = (r.units_cardinality(), r.list_units()) {
            assert_eq!(list.len() as u64, n);
            assert!(list.iter().all(|u| u.is_unit().unwrap()));
            assert_eq!(list[0], r.one());
        }
    }
    assert_eq!(RingId::p_local(5).unwrap().primes_cardinality(), Ok(Finite(1)));
    assert_eq!(RingId::Int.primes_cardinality(), Ok(CountablyInfinite));
    assert!(RingId::IntPoly.primes_cardinality().is_err());
}

#[test]
fn plocal_nonunits_are_powers_of_p() {
    let z5 = RingId::p_local(5).unwrap();
    for x in enumerate_elements(&z5, 30).unwrap().elements {
        let d = x.factor().unwrap();
        assert!(d.factors.iter().all(|(p, _)| p.representative().to_string() == "5"));
    }
}

#[test]
fn ring_specs_round_trip() {
    for spec in ["Z", "GF(7)[x]", "Z[i]", "Z_(5)", "Z[1/2,3]", "Z[x]"] {
        assert_eq!(spec.parse::<RingId>().unwrap().to_string(), spec);
    }
    assert_eq!("Z[1/{3, 2}]".parse::<RingId>().unwrap().to_string(), "Z[1/2,3]");
    assert!("GF(4)[x]".parse::<RingId>().is_err());
    assert!("Z[1/2,2]".parse::<RingId>().is_err());
    assert!("Q".parse::<RingId>().is_err());
}

#[test]
fn literals() {
    let f3 = RingId::poly_over_fp(3).unwrap();
    assert_eq!(Element::parse(&f3, "x^3 + 5x + 1").unwrap().to_string(), "x^3+2x+1");
    assert_eq!(Element::parse(&RingId::GaussianInt, "1-i").unwrap(), Element::gaussian(1, -1));
    assert_eq!(Element::parse(&RingId::GaussianInt, "-2i+3").unwrap().to_string(), "3-2i");
    let z5 = RingId::p_local(5).unwrap();
    assert_eq!(Element::parse(&z5, "6/4").unwrap().to_string(), "3/2");
    assert!(Element::parse(&z5, "1/10").is_err());
    assert!(Element::parse(&RingId::Int, "x").is_err());
    assert!(matches!(
        Element::parse(&RingId::Int, &"9".repeat(100)),
        Err(Error::SizeLimit(_))
    ));
}

#[test]
fn window_properties_hold_exhaustively() {
    for ring in rings() {
        let w = enumerate_elements(&ring, small_bound(&ring)).unwrap();
        let units = ring.list_units();
        for x in &w.elements {
            // round trip of literals
            assert_eq!(&Element::parse(&ring, &x.to_string()).unwrap(), x);
            // factorization recomposes, primes canonical and sorted
            let d = x.factor().unwrap();
            assert_eq!(&d.recompose().unwrap(), x, "{ring} {x}");
            assert!(d.unit.is_unit().unwrap());
            assert_eq!(d.factors.is_empty(), x.is_unit().unwrap());
            for pair in d.factors.windows(2) {
                assert!(pair[0].0 < pair[1].0);
            }
            for (p, _) in &d.factors {
                assert!(p.representative().is_canonical().unwrap());
            }
            // canonical associate is idempotent and orbit-invariant
            let (u, c) = x.canonical_associate().unwrap();
            assert_eq!(&u.mul(&c).unwrap(), x);
            assert!(c.is_canonical().unwrap());
            if let Some(us) = &units {
                for v in us {
                    let y = v.mul(x).unwrap();
                    assert_eq!(y.canonical_associate().unwrap().1, c);
                }
            }
        }
    }
}

#[test]
fn bezout_and_coprime_agree_on_window_pairs() {
    for ring in rings() {
        let w = enumerate_elements(&ring, small_bound(&ring) / 2).unwrap();
        for a in &w.elements {
            for b in &w.elements {
                let (g, x, y) = a.gcd_bezout(b).unwrap();
                assert_eq!(x.mul(a).unwrap().add(&y.mul(b).unwrap()).unwrap(), g);
                assert!(g.divides(a).unwrap() && g.divides(b).unwrap());
                assert!(g.is_canonical().unwrap());
                assert_eq!(a.coprime(b).unwrap(), g.is_one(), "{ring} {a} {b}");
            }
        }
    }
}

fn nonzero(range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = i64> {
    range.prop_filter("nonzero", |v| *v != 0)
}

proptest! {
    #[test]
    fn integer_bezout(a in nonzero(-1_000_000..=1_000_000), b in nonzero(-1_000_000..=1_000_000)) {
        let (g, x, y) = z(a).gcd_bezout(&z(b)).unwrap();
        prop_assert_eq!(x.mul(&z(a)).unwrap().add(&y.mul(&z(b)).unwrap()).unwrap(), g.clone());
        prop_assert_eq!(g, z(num_integer::Integer::gcd(&a, &b)));
    }

    #[test]
    fn integer_factor_round_trip(n in nonzero(-10_000_000..=10_000_000)) {
        let d = z(n).factor().unwrap();
        prop_assert_eq!(d.recompose().unwrap(), z(n));
    }

    #[test]
    fn gaussian_factor_round_trip(a in -2000i64..=2000, b in -2000i64..=2000) {
        prop_assume!(a != 0 || b != 0);
        let x = Element::gaussian(a, b);
        prop_assert_eq!(x.factor().unwrap().recompose().unwrap(), x);
    }

    #[test]
    fn fp_factor_round_trip(coeffs in proptest::collection::vec(0i64..7, 1..12)) {
        let f7 = RingId::poly_over_fp(7).unwrap();
        let x = Element::poly_fp(&f7, &coeffs).unwrap();
        prop_assume!(!x.is_zero());
        prop_assert_eq!(x.factor().unwrap().recompose().unwrap(), x);
    }

    #[test]
    fn s_integer_bezout(a in nonzero(-5000..=5000), b in nonzero(-5000..=5000), da in 0u32..4, db in 0u32..4) {
        let s = RingId::s_inverted([2, 3]).unwrap();
        let x = Element::fraction(&s, a, 6i64.pow(da)).unwrap();
        let y = Element::fraction(&s, b, 2i64.pow(db)).unwrap();
        let (g, u, v) = x.gcd_bezout(&y).unwrap();
        prop_assert_eq!(u.mul(&x).unwrap().add(&v.mul(&y).unwrap()).unwrap(), g.clone());
        prop_assert_eq!(x.coprime(&y).unwrap(), g.is_one());
        prop_assert_eq!(x.factor().unwrap().recompose().unwrap(), x);
    }

    #[test]
    fn big_integer_literals_round_trip(digits in "[1-9][0-9]{0,70}", negative in any::<bool>()) {
        let lit = if negative { format!("-{digits}") } else { digits };
        let x = Element::parse(&RingId::Int, &lit).unwrap();
        prop_assert_eq!(x.to_string(), lit.clone());
        prop_assert_eq!(x.value(), &Value::Int(lit.parse::<BigInt>().unwrap()));
    }
}
