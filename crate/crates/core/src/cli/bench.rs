use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{count_irreducibles, FqRing};
use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::relations::{norm_of_phi, sample_phi};

/// Number of `mu`-smooth monic polynomials of degree `nu` over `F_q`,
/// i.e. `mu`-smooth effective divisors of degree `nu` on the X-line.
pub fn psi(q: u64, nu: usize, mu: usize) -> f64 {
    let mut f = vec![0f64; nu + 1];
    f[0] = 1.0;
    for d in 1..=mu.min(nu) {
        let n = count_irreducibles(q, d as u32) as f64;
        // multiply by (1 - x^d)^(-n)
        let mut g = vec![0f64; nu + 1];
        for i in 0..=nu {
            if f[i] == 0.0 {
                continue;
            }
            let mut c = 1.0;
            let mut k = 0;
            while i + d * k <= nu {
                g[i + d * k] += f[i] * c;
                c *= (n + k as f64) / (k as f64 + 1.0);
                k += 1;
            }
        }
        f = g;
    }
    f[nu]
}

/// `e^{-u log u}` with the `o(1)` term dropped.
pub fn dickman_prediction(u: f64) -> f64 {
    if u <= 1.0 {
        1.0
    } else {
        (-u * u.ln()).exp()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessCell {
    pub m: usize,
    pub nu: usize,
    pub mu: usize,
    pub u: f64,
    pub trials: u64,
    /// Estimator (i): `div(phi)` for random `phi`.
    pub phi_smooth: u64,
    pub phi_probability: f64,
    /// Estimator (ii): random monic polynomials of degree `nu`.
    pub poly_smooth: u64,
    pub poly_probability: f64,
    /// `psi(nu, mu) / q^nu`.
    pub exact_probability: f64,
    pub prediction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub q: u64,
    pub genus: usize,
    pub cells: Vec<SmoothnessCell>,
}

const BENCH_STREAMS: u64 = 16;

fn count_parallel(seed: u64, stream: u64, trials: u64, test: impl Fn(&mut ChaCha8Rng) -> bool + Sync) -> u64 {
    (0..BENCH_STREAMS)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream * BENCH_STREAMS + i + 1);
            let n = trials / BENCH_STREAMS + u64::from(i < trials % BENCH_STREAMS);
            (0..n).filter(|_| test(&mut rng)).count() as u64
        })
        .sum()
}

/// Run both estimators on every `(m, mu)` cell with matched degree
/// `nu = n m + d`, keeping cells with `u = nu / mu` in `u_range`.
pub fn bench_smoothness(
    model: &CurveModel,
    ms: &[usize],
    mus: &[usize],
    u_range: (f64, f64),
    trials: u64,
    seed: u64,
) -> Result<SmoothnessReport> {
    if ms.contains(&0) || mus.contains(&0) {
        return Err(Error::usage("grid degrees must be positive"));
    }
    let ring: &FqRing = model.ring();
    let q = model.q();
    let mut cells = Vec::new();
    for &m in ms {
        let nu = model.n() * m + model.d();
        for &mu in mus {
            let u = nu as f64 / mu as f64;
            if u < u_range.0 || u > u_range.1 {
                continue;
            }
            let stream = cells.len() as u64 * 2;
            let phi_smooth = count_parallel(seed, stream, trials, |rng| {
                let phi = sample_phi(ring, m, rng);
                ring.is_smooth(&norm_of_phi(model, &phi), mu)
            });
            let poly_smooth = count_parallel(seed, stream + 1, trials, |rng| {
                ring.is_smooth(&ring.random_monic(nu, rng), mu)
            });
            let p = |k: u64| if trials == 0 { 0.0 } else { k as f64 / trials as f64 };
            cells.push(SmoothnessCell {
                m,
                nu,
                mu,
                u,
                trials,
                phi_smooth,
                phi_probability: p(phi_smooth),
                poly_smooth,
                poly_probability: p(poly_smooth),
                exact_probability: psi(q, nu, mu) / (q as f64).powi(nu as i32),
                prediction: dickman_prediction(u),
            });
        }
    }
    Ok(SmoothnessReport {
        q,
        genus: model.genus(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{validate_curve, CurveSpec};

    #[test]
    fn psi_matches_enumeration() {
        let ring = crate::algebra::PolyRing::new(crate::algebra::Fq::prime(3).unwrap());
        for nu in 1..=6usize {
            for mu in 1..=nu {
                let brute = (0..3u64.pow(nu as u32))
                    .filter(|&i| ring.is_smooth(&ring.monic_from_index(nu, i), mu))
                    .count();
                assert_eq!(psi(3, nu, mu), brute as f64, "nu={nu} mu={mu}");
            }
        }
        assert_eq!(psi(5, 10, 10), 5f64.powi(10));
    }

    #[test]
    fn boundary_cases() {
        assert_eq!(dickman_prediction(1.0), 1.0);
        let c = validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap();
        let r = bench_smoothness(&c, &[1], &[7, 8], (0.0, 10.0), 200, 1).unwrap();
        assert_eq!(r.cells.len(), 2);
        for cell in &r.cells {
            assert_eq!(cell.phi_probability, 1.0);
            assert_eq!(cell.poly_probability, 1.0);
            assert_eq!(cell.exact_probability, 1.0);
        }
        let r = bench_smoothness(&c, &[1], &[7], (0.0, 10.0), 0, 1).unwrap();
        assert_eq!(r.cells[0].phi_probability, 0.0);
    }
}
