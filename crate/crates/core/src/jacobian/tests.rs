use std::collections::HashSet;

use super::*;
use crate::curve::{places_up_to, validate_curve, CurveSpec, DEFAULT_COUNT_CEILING};

fn elliptic() -> CurveModel {
    // Y^2 = X^3 + X + 1 over F_5, 9 points
    validate_curve(&CurveSpec::prime(5, 2, 3, &[(3, 0, 4), (1, 0, 4), (0, 0, 4)])).unwrap()
}

fn genus3() -> CurveModel {
    validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap()
}

fn genus2() -> CurveModel {
    // Y^2 = X^5 + 2X + 1 over F_3
    validate_curve(&CurveSpec::prime(3, 2, 5, &[(5, 0, 2), (1, 0, 1), (0, 0, 2)])).unwrap()
}

/// Reduced classes of all products of primes with total degree <= `left`.
fn collect(jac: &Jacobian, primes: &[Ideal], start: usize, left: usize, cur: &Ideal, out: &mut HashSet<Ideal>) {
    out.insert(jac.reduce(cur));
    for i in start..primes.len() {
        if primes[i].degree() <= left {
            let next = jac.mul_ideals(cur, &primes[i]);
            collect(jac, primes, i, left - primes[i].degree(), &next, out);
        }
    }
}

fn distinct_classes(model: &CurveModel) -> usize {
    let jac = Jacobian::new(model);
    let g = model.genus();
    let primes: Vec<Ideal> = model
        .ring()
        .irreducibles_up_to(g)
        .flat_map(|u| jac.primes_over(&u).unwrap())
        .filter(|p| p.degree() <= g)
        .collect();
    // effective affine divisors of degree <= g cover every class
    let mut seen = HashSet::new();
    collect(&jac, &primes, 0, g, &jac.identity(), &mut seen);
    seen.len()
}

#[test]
fn class_count_matches_zeta() {
    for model in [elliptic(), genus2(), genus3()] {
        let h = model.zeta(DEFAULT_COUNT_CEILING).unwrap().class_number;
        assert_eq!(distinct_classes(&model) as i128, h, "genus {}", model.genus());
    }
}

#[test]
fn group_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for model in [elliptic(), genus2(), genus3()] {
        let jac = Jacobian::new(&model);
        let h = model.zeta(DEFAULT_COUNT_CEILING).unwrap().class_number as u64;
        for _ in 0..4 {
            let a = jac.random_class(&mut rng);
            let b = jac.random_class(&mut rng);
            let c = jac.random_class(&mut rng);
            jac.validate(&a, true).unwrap();
            assert!(a.degree() <= model.genus());
            assert_eq!(jac.reduce(&a), a);
            assert_eq!(jac.add(&a, &b), jac.add(&b, &a));
            assert_eq!(jac.add(&jac.add(&a, &b), &c), jac.add(&a, &jac.add(&b, &c)));
            assert!(jac.add(&a, &jac.neg(&a)).is_unit());
            assert!(jac.mul_u64(&a, h).is_unit());
            assert_eq!(jac.mul_scalar(&a, &BigInt::from(-3)), jac.neg(&jac.mul_u64(&a, 3)));
        }
    }
}

#[test]
fn principal_ideals_are_trivial_and_decompose() {
    let model = genus3();
    let jac = Jacobian::new(&model);
    let r = model.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let f = vec![r.random(3, &mut rng), r.random(2, &mut rng), r.zero()];
        if f.iter().all(|x| x.is_zero()) {
            continue;
        }
        let fa = jac.principal(&f).unwrap();
        assert_eq!(fa.degree(), jac.weight(&f).unwrap());
        assert!(jac.reduce(&fa).is_unit());
        if let Some(div) = jac.decompose(&fa).unwrap() {
            assert_eq!(div.degree() as usize, fa.degree());
            assert_eq!(jac.ideal_of_effective(&div).unwrap(), fa);
            assert!(jac.class_of(&div).unwrap().is_unit());
        }
    }
}

#[test]
fn place_division_and_valuation() {
    let model = genus3();
    let jac = Jacobian::new(&model);
    let (places, _) = places_up_to(&model, 2);
    let p = &places[0];
    let q = places.last().unwrap();
    let d = Divisor::from_terms([(p.clone(), 2), (q.clone(), 1)]);
    let ideal = jac.ideal_of_effective(&d).unwrap();
    assert_eq!(ideal.degree(), 2 * p.degree() + q.degree());
    assert_eq!(jac.decompose(&ideal).unwrap(), Some(d));
    let (u, v) = p.uv().unwrap();
    let once = jac.divide_by_place(&ideal, u, v).unwrap();
    let twice = jac.divide_by_place(&once, u, v).unwrap();
    assert!(!jac.in_place(&twice, u, v));
    assert_eq!(twice, jac.place_ideal(q).unwrap());
}

#[test]
fn bsgs_recovers_multiples() {
    let model = genus3();
    let jac = Jacobian::new(&model);
    let h = model.zeta(DEFAULT_COUNT_CEILING).unwrap().class_number as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let base = jac.random_class(&mut rng);
    let ord = jac.order_dividing(&base, h);
    assert!(jac.mul_u64(&base, ord).is_unit());
    let x = rng.gen_range(0..ord);
    let target = jac.mul_u64(&base, x);
    assert_eq!(jac.bsgs(&base, &target, ord), Some(x));
}

#[test]
fn serialized_classes_round_trip() {
    let model = genus2();
    let jac = Jacobian::new(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = jac.random_class(&mut rng);
    let text = serde_json::to_string(&a).unwrap();
    let back: Ideal = serde_json::from_str(&text).unwrap();
    jac.validate(&back, true).unwrap();
    assert_eq!(back, a);
}
