use std::collections::HashMap;

use super::*;
use crate::curve::{build_factor_base, validate_curve, CurveSpec};
use crate::jacobian::Jacobian;

fn genus3() -> CurveModel {
    validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap()
}

fn phi(model: &CurveModel, a: Vec<u32>, b: Vec<u32>) -> FunctionPhi {
    let r = model.ring();
    FunctionPhi::new(r, r.from_coeffs(a), r.from_coeffs(b)).unwrap()
}

#[test]
fn norm_examples() {
    let c = genus3();
    let r = c.ring();
    let cases = [
        (vec![], vec![1], vec![1, 0, 0, 0, 1]),
        (vec![0, 1], vec![1], vec![1, 0, 0, 4, 1]),
        (vec![1], vec![1], vec![0, 0, 0, 0, 1]),
    ];
    for (a, b, want) in cases {
        let p = phi(&c, a, b);
        assert_eq!(norm_of_phi(&c, &p), r.from_coeffs(want.clone()));
        assert_eq!(norm_by_resultant(&c, &p).unwrap(), r.from_coeffs(want));
    }
}

#[test]
fn closed_form_matches_resultant_and_degree_bound() {
    let c = validate_curve(&CurveSpec::prime(7, 3, 5, &[(5, 0, 1), (1, 1, 3), (0, 0, 1)])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in 1..4 {
        for _ in 0..20 {
            let p = sample_phi(c.ring(), m, &mut rng);
            let nrm = norm_of_phi(&c, &p);
            assert_eq!(nrm, norm_by_resultant(&c, &p).unwrap());
            assert!(nrm.degree().unwrap() <= c.n() * m + c.d());
        }
    }
}

#[test]
fn decompose_y_minus_4() {
    let c = genus3();
    let fb = build_factor_base(&c, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let p = phi(&c, vec![1], vec![1]);
    let Decomposition::Smooth(rel) = decompose_divisor(&c, &fb, &p, &mut rng).unwrap() else {
        panic!("Y - 4 has norm X^4");
    };
    let r = c.ring();
    let place = Place::affine(r.x(), r.from_coeffs(vec![4]));
    assert_eq!(rel.exps, vec![(fb.index_of(&place).unwrap(), 4)]);
    assert_eq!(rel.infinite_exponent(&fb), -4);
}

#[test]
fn rough_norm_is_not_smooth() {
    let c = genus3();
    let fb = build_factor_base(&c, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    // norm X^4 + 1 = (X^2 + 2)(X^2 + 3) over F_5
    let p = phi(&c, vec![], vec![1]);
    assert_eq!(decompose_divisor(&c, &fb, &p, &mut rng).unwrap(), Decomposition::NotSmooth);
    // with B = 2 the places (X^2 + 2, Y) and (X^2 + 3, Y) are ramified and excluded
    let fb2 = build_factor_base(&c, 2).unwrap();
    assert!(!fb2.ramified().is_empty());
    assert_eq!(decompose_divisor(&c, &fb2, &p, &mut rng).unwrap(), Decomposition::NotSmooth);
}

fn brute_coprime(q: u32, m: usize) -> u128 {
    let ring = crate::algebra::PolyRing::new(crate::algebra::Fq::prime(q).unwrap());
    let all: Vec<FqPoly> = (0..(q as u64).pow(m as u32 + 1))
        .map(|mut idx| {
            let coeffs = (0..=m)
                .map(|_| {
                    let c = (idx % q as u64) as u32;
                    idx /= q as u64;
                    c
                })
                .collect();
            ring.from_coeffs(coeffs)
        })
        .collect();
    let mut count = 0;
    for a in &all {
        for b in all.iter().filter(|b| !b.is_zero()) {
            if ring.is_one(&ring.gcd(a, b)) {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn coprime_count_formula() {
    for (q, m) in [(2, 0), (2, 1), (2, 2), (2, 3), (3, 0), (3, 1), (3, 2), (5, 1), (7, 1)] {
        assert_eq!(coprime_pair_count(q as u64, m), brute_coprime(q, m), "q={q} m={m}");
    }
}

#[test]
fn tiny_space_exhausts_without_repeats() {
    let ring = crate::algebra::PolyRing::new(crate::algebra::Fq::prime(2).unwrap());
    let mut s = PhiSampler::new(&ring, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = s.sample(&mut rng).unwrap();
    let b = s.sample(&mut rng).unwrap();
    assert_ne!(a, b);
    for p in [&a, &b] {
        assert!(ring.is_one(&p.b) && p.a.deg() <= 0);
    }
    assert_eq!(s.sample(&mut rng), None);
}

#[test]
fn sampler_is_uniform_on_coprime_pairs() {
    let ring = crate::algebra::PolyRing::new(crate::algebra::Fq::prime(5).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let draws = 10_000;
    let mut counts: HashMap<FunctionPhi, u32> = HashMap::new();
    for _ in 0..draws {
        *counts.entry(sample_phi(&ring, 1, &mut rng)).or_default() += 1;
    }
    let cells = (coprime_pair_count(5, 1) / 4) as usize;
    assert_eq!(counts.len(), cells);
    let expected = draws as f64 / cells as f64;
    let chi2: f64 = counts
        .values()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    // 0.99 quantile of chi-square with 124 degrees of freedom
    assert!(chi2 < 163.6, "chi2 = {chi2}");
}

#[test]
fn collected_relations_are_principal_and_deterministic() {
    let c = genus3();
    let fb = build_factor_base(&c, 3).unwrap();
    let set = collect_relations(&c, &fb, 2, 30, 77, None).unwrap();
    assert_eq!(set.relations.len(), 30);
    let jac = Jacobian::new(&c);
    for rel in &set.relations {
        let nd = norm_of_phi(&c, &rel.phi()).degree().unwrap() as i64;
        assert_eq!(rel.divisor(&fb).degree(), nd);
        assert!(rel.exps.iter().all(|&(_, e)| e > 0));
        assert!(jac.class_of(&rel.divisor(&fb)).unwrap().is_unit());
        let ideal = jac.ideal_of_effective(&rel.divisor(&fb)).unwrap();
        let f = vec![rel.a.clone(), rel.b.clone(), c.ring().zero()];
        assert_eq!(ideal, jac.principal(&f).unwrap());
    }
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let again = single.install(|| collect_relations(&c, &fb, 2, 30, 77, None).unwrap());
    assert_eq!(set.relations, again.relations);
    assert_eq!(set.stats.trials, again.stats.trials);
    let empty = collect_relations(&c, &fb, 2, 0, 77, None).unwrap();
    assert!(empty.relations.is_empty() && empty.stats.trials == 0);
}

#[test]
fn trial_budget_is_reported() {
    let c = genus3();
    let fb = build_factor_base(&c, 1).unwrap();
    let err = collect_relations(&c, &fb, 3, 1000, 1, Some(50)).unwrap_err();
    assert!(matches!(err, Error::Budget(_)));
}
