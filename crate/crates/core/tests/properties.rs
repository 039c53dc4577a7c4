use cab_core::algebra::FqRing;
use cab_core::curve::{build_factor_base, validate_curve, CurveModel, CurveSpec, Divisor};
use cab_core::jacobian::Jacobian;
use cab_core::linalg::{smith_normal_form, verify_snf, RelationMatrix};
use cab_core::relations::{decompose_divisor, norm_by_resultant, norm_of_phi, sample_phi, Decomposition};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn genus3() -> CurveModel {
    validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap()
}

fn genus2() -> CurveModel {
    validate_curve(&CurveSpec::prime(3, 2, 5, &[(5, 0, 2), (1, 0, 1), (0, 0, 2)])).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn group_law_is_abelian(seed in any::<u64>()) {
        let c = genus3();
        let jac = Jacobian::new(&c);
        let mut r = rng(seed);
        let (a, b, d) = (jac.random_class(&mut r), jac.random_class(&mut r), jac.random_class(&mut r));
        prop_assert_eq!(jac.add(&a, &b), jac.add(&b, &a));
        prop_assert_eq!(jac.add(&jac.add(&a, &b), &d), jac.add(&a, &jac.add(&b, &d)));
        prop_assert!(jac.is_zero_class(&jac.add(&a, &jac.neg(&a))));
        prop_assert_eq!(jac.add(&a, &jac.identity()), a.clone());
        prop_assert!(jac.is_zero_class(&jac.mul_u64(&a, 108)));
    }

    #[test]
    fn scalar_multiplication_is_linear(seed in any::<u64>(), x in 0u64..500, y in 0u64..500) {
        let c = genus2();
        let jac = Jacobian::new(&c);
        let a = jac.random_class(&mut rng(seed));
        prop_assert_eq!(jac.add(&jac.mul_u64(&a, x), &jac.mul_u64(&a, y)), jac.mul_u64(&a, x + y));
        prop_assert_eq!(jac.mul_scalar(&a, &BigInt::from(-(x as i64))), jac.neg(&jac.mul_u64(&a, x)));
    }

    #[test]
    fn norms_agree_with_resultants(seed in any::<u64>(), m in 1usize..5) {
        let c = genus3();
        let ring: &FqRing = c.ring();
        let phi = sample_phi(ring, m, &mut rng(seed));
        let n = norm_of_phi(&c, &phi);
        prop_assert_eq!(&n, &norm_by_resultant(&c, &phi).unwrap());
        prop_assert!(n.deg() <= (c.n() * m + c.d()) as i64);
    }

    #[test]
    fn smooth_functions_give_principal_divisors(seed in any::<u64>()) {
        let c = genus2();
        let jac = Jacobian::new(&c);
        let fb = build_factor_base(&c, 2).unwrap();
        let mut r = rng(seed);
        for _ in 0..50 {
            let phi = sample_phi(c.ring(), 2, &mut r);
            if let Decomposition::Smooth(rel) = decompose_divisor(&c, &fb, &phi, &mut r).unwrap() {
                let deg: i64 = rel.exps.iter().map(|&(i, e)| e * fb.place(i).degree() as i64).sum();
                prop_assert_eq!(deg, norm_of_phi(&c, &phi).deg());
                prop_assert!(jac.is_zero_class(&jac.class_of(&rel.divisor(&fb)).unwrap()));
            }
        }
    }

    #[test]
    fn factorizations_multiply_back(seed in any::<u64>(), deg in 1usize..12) {
        let c = genus3();
        let ring = c.ring();
        let mut r = rng(seed);
        let f = ring.random_monic(deg, &mut r);
        let fac = ring.factor(&f, &mut r).unwrap();
        let mut prod = ring.constant(fac.unit);
        for (p, e) in &fac.factors {
            prop_assert!(ring.is_irreducible(p));
            for _ in 0..*e {
                prod = ring.mul(&prod, p);
            }
        }
        prop_assert_eq!(prod, f);
    }

    #[test]
    fn smith_forms_verify(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 6), 3..5)) {
        let m = RelationMatrix::from_dense(&rows);
        if let Ok(snf) = smith_normal_form(&m) {
            verify_snf(&m, &snf).unwrap();
            let mut v = vec![BigInt::from(0); m.rows()];
            for col in m.columns() {
                for &(i, e) in col {
                    v[i] += e;
                }
            }
            let coords = snf.group_coordinates(&v).unwrap();
            prop_assert!(coords.iter().all(|x| *x == BigInt::from(0)));
        }
    }

    #[test]
    fn place_classes_match_effective_ideals(seed in any::<u64>()) {
        let c = genus3();
        let jac = Jacobian::new(&c);
        let fb = build_factor_base(&c, 1).unwrap();
        let mut r = rng(seed);
        use rand::Rng;
        let terms: Vec<_> = (0..3).map(|_| (fb.place(r.gen_range(0..fb.len())).clone(), r.gen_range(1..3i64))).collect();
        let d = Divisor::from_terms(terms);
        let reduced = jac.reduce(&jac.ideal_of_effective(&d).unwrap());
        prop_assert_eq!(jac.class_of(&d).unwrap(), reduced);
    }
}
