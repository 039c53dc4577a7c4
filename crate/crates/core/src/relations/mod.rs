//! Relations from functions `phi = a(X) + b(X) Y`: sampling, norms,
//! decomposition over the factor base, and parallel collection.

mod plan;

pub use plan::{plan_parameters, sigma_root, ParameterPlan, PlanOverrides, SEARCH_SAFETY};

use std::collections::HashSet;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{lift_root, resultant, BiPoly, Field, FqPoly, FqRing};
use crate::curve::{CurveModel, Divisor, FactorBase, Place};
use crate::error::{Error, Result};

/// `phi = a + b Y` with `b != 0` and `gcd(a, b) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FunctionPhi {
    pub a: FqPoly,
    pub b: FqPoly,
}

impl FunctionPhi {
    pub fn new(ring: &FqRing, a: FqPoly, b: FqPoly) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::domain("b must be nonzero"));
        }
        if !ring.is_one(&ring.gcd(&a, &b)) {
            return Err(Error::domain("a and b must be coprime"));
        }
        Ok(FunctionPhi { a, b })
    }

    /// Scale so that `b` is monic; scalar multiples have the same divisor.
    pub fn normalized(&self, ring: &FqRing) -> Self {
        let inv = ring.field().inv(self.b.lc().unwrap()).unwrap();
        FunctionPhi {
            a: ring.scale(&self.a, &inv),
            b: ring.scale(&self.b, &inv),
        }
    }

    pub fn as_bipoly(&self) -> BiPoly {
        BiPoly::new(vec![self.a.clone(), self.b.clone()])
    }
}

/// `Res_Y(phi, C) = sum_j c_j(X) (-a)^j b^{n-j}`.
pub fn norm_of_phi(model: &CurveModel, phi: &FunctionPhi) -> FqPoly {
    let r = model.ring();
    let n = model.n();
    let neg_a = r.neg(&phi.a);
    let mut pow_a = r.one();
    let mut b_pows = vec![r.one()];
    for _ in 0..n {
        b_pows.push(r.mul(b_pows.last().unwrap(), &phi.b));
    }
    let mut acc = r.zero();
    for j in 0..=n {
        let cj = model.coeff_y(j);
        if !cj.is_zero() {
            acc = r.add(&acc, &r.mul(&cj, &r.mul(&pow_a, &b_pows[n - j])));
        }
        pow_a = r.mul(&pow_a, &neg_a);
    }
    acc
}

/// The same norm through a resultant computation.
pub fn norm_by_resultant(model: &CurveModel, phi: &FunctionPhi) -> Result<FqPoly> {
    resultant(model.ring(), &phi.as_bipoly(), model.poly())
}

/// A principal divisor over the factor base: `div(phi)` has affine part
/// `sum e_i P_i` and `-deg Norm(phi)` at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub a: FqPoly,
    pub b: FqPoly,
    /// `(factor base index, e)`, sorted by index, all `e > 0`.
    pub exps: Vec<(usize, i64)>,
}

impl Relation {
    pub fn phi(&self) -> FunctionPhi {
        FunctionPhi {
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }

    pub fn infinite_exponent(&self, fb: &FactorBase) -> i64 {
        -self
            .exps
            .iter()
            .map(|&(i, e)| e * fb.place(i).degree() as i64)
            .sum::<i64>()
    }

    /// Affine part as a divisor.
    pub fn divisor(&self, fb: &FactorBase) -> Divisor {
        Divisor::from_terms(self.exps.iter().map(|&(i, e)| (fb.place(i).clone(), e)))
    }
}

/// Outcome of trying to decompose one `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Smooth(Relation),
    NotSmooth,
}

/// Affine part of `div(phi)` when its norm is `bound`-smooth and every
/// place in the support is unramified; `None` otherwise. Valuations come
/// from u-adic lifts of `v = -a/b mod u`. Places are sorted.
pub fn phi_places(
    model: &CurveModel,
    phi: &FunctionPhi,
    bound: usize,
    rng: &mut dyn RngCore,
) -> Result<Option<Vec<(Place, i64)>>> {
    let r = model.ring();
    let norm = norm_of_phi(model, phi);
    let Some(fac) = r.factor_if_smooth(&norm, bound, rng) else {
        return Ok(None);
    };
    let mut places = Vec::with_capacity(fac.factors.len());
    let mut total = 0usize;
    for (u, e_u) in &fac.factors {
        let b_inv = r
            .inv_mod(&phi.b, u)
            .ok_or_else(|| Error::integrity("norm factor divides b despite gcd(a, b) = 1"))?;
        let v = r.rem(&r.neg(&r.mul(&phi.a, &b_inv)), u);
        let e = *e_u as usize;
        let lifted = match lift_root(r, model.poly(), u, &v, e) {
            Ok(l) => l,
            Err(Error::RamifiedPlace) => return Ok(None),
            Err(err) => return Err(err),
        };
        let val = r.add(&phi.a, &r.mul(&phi.b, &lifted));
        let mut e_p = 0;
        let mut rest = val;
        while e_p < e {
            match r.div_exact(&rest, u) {
                Some(next) => {
                    rest = next;
                    e_p += 1;
                }
                None => break,
            }
        }
        if e_p == 0 {
            return Err(Error::integrity("norm factor has no matching place valuation"));
        }
        total += e_p * u.degree().unwrap();
        places.push((Place::affine(u.clone(), v), e_p as i64));
    }
    let nd = norm.degree().unwrap_or(0);
    if total != nd {
        return Err(Error::integrity(format!(
            "decomposition degree {total} differs from norm degree {nd}"
        )));
    }
    places.sort();
    Ok(Some(places))
}

/// `div(phi)` over the factor base, if smooth.
pub fn decompose_divisor(
    model: &CurveModel,
    fb: &FactorBase,
    phi: &FunctionPhi,
    rng: &mut dyn RngCore,
) -> Result<Decomposition> {
    let Some(places) = phi_places(model, phi, fb.bound(), rng)? else {
        return Ok(Decomposition::NotSmooth);
    };
    let mut exps = Vec::with_capacity(places.len());
    for (place, e) in places {
        match fb.index_of(&place) {
            Some(idx) => exps.push((idx, e)),
            None => return Ok(Decomposition::NotSmooth),
        }
    }
    exps.sort();
    Ok(Decomposition::Smooth(Relation {
        a: phi.a.clone(),
        b: phi.b.clone(),
        exps,
    }))
}

/// Number of pairs `(a, b)` with `deg a, deg b <= m`, `b != 0` and
/// `gcd(a, b) = 1`.
pub fn coprime_pair_count(q: u64, m: usize) -> u128 {
    let q = q as u128;
    let p = |k: usize| q.pow(k as u32);
    let mut total = (q - 1) * p(m + 1);
    for j in 1..=m {
        total += (q - 1) * (q - 1) * p(j);
        for i in 1..=m {
            total += (q - 1) * (q - 1) * (p(i + j) - p(i + j - 1));
        }
    }
    total
}

/// Uniform sampler over normalized coprime pairs without repetition.
pub struct PhiSampler<'a> {
    ring: &'a FqRing,
    m: usize,
    seen: HashSet<FunctionPhi>,
    capacity: u128,
}

impl<'a> PhiSampler<'a> {
    pub fn new(ring: &'a FqRing, m: usize) -> Self {
        let q = ring.field().order();
        PhiSampler {
            ring,
            m,
            seen: HashSet::new(),
            capacity: coprime_pair_count(q, m) / (q as u128 - 1),
        }
    }

    /// Number of distinct normalized functions available.
    pub fn capacity(&self) -> u128 {
        self.capacity
    }

    pub fn emitted(&self) -> usize {
        self.seen.len()
    }

    /// Next unseen function, or `None` once the space is exhausted.
    pub fn sample(&mut self, rng: &mut dyn RngCore) -> Option<FunctionPhi> {
        if self.seen.len() as u128 >= self.capacity {
            return None;
        }
        loop {
            let a = self.ring.random(self.m, rng);
            let b = self.ring.random(self.m, rng);
            if b.is_zero() || !self.ring.is_one(&self.ring.gcd(&a, &b)) {
                continue;
            }
            let phi = FunctionPhi { a, b }.normalized(self.ring);
            if self.seen.insert(phi.clone()) {
                return Some(phi);
            }
        }
    }
}

/// One draw from the sampler, for callers that do not track repeats.
pub fn sample_phi(ring: &FqRing, m: usize, rng: &mut dyn RngCore) -> FunctionPhi {
    loop {
        let a = ring.random(m, rng);
        let b = ring.random(m, rng);
        if !b.is_zero() && ring.is_one(&ring.gcd(&a, &b)) {
            return FunctionPhi { a, b }.normalized(ring);
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CollectionStats {
    pub trials: u64,
    pub hits: u64,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RelationSet {
    pub t: usize,
    pub relations: Vec<Relation>,
    pub stats: CollectionStats,
}

/// Number of independent RNG substreams used by the collector.
pub const SUBSTREAMS: u64 = 8;
const BATCH: usize = 32;

fn substream(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i + 1);
    rng
}

/// Collect `s` relations. Candidates are drawn round-robin from fixed
/// substreams, tested in parallel, and accepted in draw order, so the
/// result depends only on the seed. Relations are returned sorted by
/// `(a, b)`.
pub fn collect_relations(
    model: &CurveModel,
    fb: &FactorBase,
    m: usize,
    s: usize,
    seed: u64,
    max_trials: Option<u64>,
) -> Result<RelationSet> {
    let start = Instant::now();
    let ring = model.ring();
    let mut sampler = PhiSampler::new(ring, m);
    let mut streams: Vec<ChaCha8Rng> = (0..SUBSTREAMS).map(|i| substream(seed, i)).collect();
    let mut stats = CollectionStats::default();
    let mut relations = Vec::with_capacity(s);
    let mut exhausted = false;
    while relations.len() < s && !exhausted {
        let mut batch = Vec::with_capacity(BATCH * streams.len());
        'draw: for _ in 0..BATCH {
            for rng in streams.iter_mut() {
                if max_trials.is_some_and(|t| stats.trials + batch.len() as u64 >= t) {
                    break 'draw;
                }
                match sampler.sample(rng) {
                    Some(phi) => {
                        let sub_seed = rng.gen::<u64>();
                        batch.push((phi, sub_seed));
                    }
                    None => {
                        exhausted = true;
                        break 'draw;
                    }
                }
            }
        }
        if batch.is_empty() {
            break;
        }
        let results: Vec<Result<Decomposition>> = batch
            .par_iter()
            .map(|(phi, sub_seed)| {
                let mut rng = ChaCha8Rng::seed_from_u64(*sub_seed);
                decompose_divisor(model, fb, phi, &mut rng)
            })
            .collect();
        for res in results {
            stats.trials += 1;
            if let Decomposition::Smooth(rel) = res? {
                stats.hits += 1;
                relations.push(rel);
                if relations.len() == s {
                    break;
                }
            }
        }
        if max_trials.is_some_and(|t| stats.trials >= t) {
            break;
        }
    }
    stats.probability = if stats.trials == 0 {
        0.0
    } else {
        stats.hits as f64 / stats.trials as f64
    };
    stats.seconds = Some(start.elapsed().as_secs_f64());
    if relations.len() < s {
        return Err(Error::Budget(format!(
            "collected {} of {s} relations after {} trials (smoothness rate {:.3e}{})",
            relations.len(),
            stats.trials,
            stats.probability,
            if exhausted { ", sample space exhausted" } else { "" }
        )));
    }
    relations.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    Ok(RelationSet {
        t: fb.len(),
        relations,
        stats,
    })
}

#[cfg(test)]
mod tests;
