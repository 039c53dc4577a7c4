use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn random_matrix(rng: &mut ChaCha8Rng, t: usize, s: usize, density: f64) -> RelationMatrix {
    let rows: Vec<Vec<i64>> = (0..t)
        .map(|_| {
            (0..s)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(-3..=4) } else { 0 })
                .collect()
        })
        .collect();
    RelationMatrix::from_dense(&rows)
}

#[test]
fn rank_trivial_cases() {
    let zero = RelationMatrix::from_dense(&[vec![0, 0, 0], vec![0, 0, 0]]);
    assert_eq!(integer_rank(&zero), 0);
    let id = RelationMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    assert_eq!(integer_rank(&id), 3);
}

#[test]
fn rank_matches_bareiss() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for k in 0..50 {
        let t = rng.gen_range(1..8);
        let mut m = random_matrix(&mut rng, t, 2 * t, 0.3);
        if k % 5 == 0 && t > 1 {
            // force a dependent row
            let mut rows: Vec<Vec<i64>> = m
                .dense()
                .iter()
                .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
                .collect();
            rows[t - 1] = rows[0].iter().zip(&rows[1]).map(|(a, b)| 2 * a - b).collect();
            m = RelationMatrix::from_dense(&rows);
        }
        assert_eq!(integer_rank(&m), bareiss_rank(&m.dense()));
    }
}

#[test]
fn diag_2_3() {
    let m = RelationMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
    let snf = smith_normal_form(&m).unwrap();
    assert_eq!(snf.factors, big(&[6]));
    assert_eq!(snf.diagonal, big(&[6, 1]));
}

#[test]
fn identity_is_trivial_group() {
    let m = RelationMatrix::from_dense(&[vec![1, 0, 5], vec![0, 1, 7]]);
    let snf = smith_normal_form(&m).unwrap();
    assert!(snf.factors.is_empty());
    assert_eq!(snf.order(), BigInt::one());
}

#[test]
fn rank_deficient_matrix_fails() {
    let m = RelationMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6]]);
    assert!(matches!(smith_normal_form(&m), Err(Error::RankFailure { rank: 1, t: 2 })));
    let wide = RelationMatrix::from_dense(&[vec![1], vec![1]]);
    assert!(matches!(smith_normal_form(&wide), Err(Error::RankFailure { .. })));
}

fn brute_invariants(m: &RelationMatrix) -> Vec<BigInt> {
    // d_k = gcd of k x k minors / gcd of (k-1) x (k-1) minors, for tiny t
    fn det(a: &[Vec<BigInt>]) -> BigInt {
        if a.is_empty() {
            return BigInt::one();
        }
        let n = a.len();
        let mut acc = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][j] * det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    let a = m.dense();
    let t = m.rows();
    let s = m.cols();
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=t {
        let mut g = BigInt::zero();
        for rows in subsets(t, k) {
            for cols in subsets(s, k) {
                let sub: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect())
                    .collect();
                g = g.gcd(&det(&sub));
            }
        }
        out.push(&g / &prev);
        prev = g;
    }
    out.into_iter().filter(|x| !x.is_one()).collect()
}

#[test]
fn invariant_factors_match_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 30 {
        let t = rng.gen_range(1..4);
        let s = t + rng.gen_range(0..3);
        let m = random_matrix(&mut rng, t, s, 0.6);
        let Ok(snf) = smith_normal_form(&m) else { continue };
        assert_eq!(snf.factors, brute_invariants(&m));
        checked += 1;
    }
}

#[test]
fn coordinates_are_a_homomorphism_vanishing_on_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let t = 6;
    let m = loop {
        let m = random_matrix(&mut rng, t, 2 * t, 0.4);
        if let Ok(snf) = smith_normal_form(&m) {
            if snf.r() > 0 {
                break m;
            }
        }
    };
    let snf = smith_normal_form(&m).unwrap();
    let dense = m.dense();
    for j in 0..m.cols() {
        let col: Vec<BigInt> = (0..t).map(|i| dense[i][j].clone()).collect();
        assert!(snf.group_coordinates(&col).unwrap().iter().all(|c| c.is_zero()));
    }
    assert!(snf.group_coordinates(&vec![BigInt::zero(); t]).unwrap().iter().all(|c| c.is_zero()));
    for _ in 0..100 {
        let v1: Vec<BigInt> = (0..t).map(|_| BigInt::from(rng.gen_range(-50..50))).collect();
        let v2: Vec<BigInt> = (0..t).map(|_| BigInt::from(rng.gen_range(-50..50))).collect();
        let sum: Vec<BigInt> = v1.iter().zip(&v2).map(|(a, b)| a + b).collect();
        let c1 = snf.group_coordinates(&v1).unwrap();
        let c2 = snf.group_coordinates(&v2).unwrap();
        let cs = snf.group_coordinates(&sum).unwrap();
        for i in 0..snf.r() {
            assert_eq!(cs[i], (&c1[i] + &c2[i]).mod_floor(&snf.factors[i]));
        }
    }
    assert!(snf.group_coordinates(&[BigInt::one()]).is_err());
}

#[test]
fn snf_file_round_trip() {
    let m = RelationMatrix::from_dense(&[vec![2, 4, 1], vec![6, 0, 3]]);
    let snf = smith_normal_form(&m).unwrap();
    let text = serde_json::to_string(&snf.to_file()).unwrap();
    let back = SnfResult::from_file(&serde_json::from_str(&text).unwrap(), &m).unwrap();
    assert_eq!(back, snf);
    let mut bad = snf.to_file();
    bad.t[0][0] = "7".into();
    assert!(SnfResult::from_file(&bad, &m).is_err());
}

#[test]
fn cyclic_dlog_examples() {
    let h = big(&[6]);
    assert_eq!(solve_cyclic_dlog(&big(&[2]), &big(&[4]), &h), Some(BigInt::from(2)));
    assert_eq!(solve_cyclic_dlog(&big(&[5]), &big(&[0]), &h), Some(BigInt::zero()));
    assert_eq!(solve_cyclic_dlog(&big(&[2]), &big(&[1]), &big(&[4])), None);
}

#[test]
fn cyclic_dlog_exhaustive() {
    let h = big(&[2, 6, 12]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let alpha: Vec<BigInt> = h.iter().map(|m| BigInt::from(rng.gen_range(0..m.to_i64().unwrap()))).collect();
        let beta: Vec<BigInt> = h.iter().map(|m| BigInt::from(rng.gen_range(0..m.to_i64().unwrap()))).collect();
        let brute = (0..12i64).find(|&x| {
            alpha
                .iter()
                .zip(&beta)
                .zip(&h)
                .all(|((a, b), m)| (a * x - b).mod_floor(m).is_zero())
        });
        assert_eq!(solve_cyclic_dlog(&alpha, &beta, &h), brute.map(BigInt::from));
    }
}
