//! Discrete logarithms: Hafner–McCurley smoothing of a class, special-Q
//! descent of the large places it produces, and assembly of the answer
//! through the Smith-form coordinate map.

mod schedule;

pub use schedule::{default_schedule, log_q_l, DescentSchedule};

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{FqPoly, FqRing, IndexedField};
use crate::curve::{CurveModel, Divisor, FactorBase, Place};
use crate::error::{Error, Result};
use crate::jacobian::{Ideal, Jacobian};
use crate::linalg::{solve_cyclic_dlog, SnfResult};
use crate::relations::{phi_places, FunctionPhi};

/// One place of a descent tree. A leaf carries its factor-base index;
/// an inner node carries the function `phi` with
/// `div(phi) = Q - sum e_i C_i` on the affine part, so that
/// `[Q] = sum e_i [C_i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentNode {
    pub place: Place,
    pub level: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<FunctionPhi>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<(DescentNode, i64)>,
}

impl DescentNode {
    fn leaf(place: Place, level: usize, index: usize) -> Self {
        DescentNode {
            place,
            level,
            base: Some(index),
            witness: None,
            children: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|(c, _)| c.node_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|(c, _)| c.depth()).max().unwrap_or(0)
    }

    /// Add `coeff` times this node's factor-base expansion to `acc`.
    pub fn expand_into(&self, coeff: &BigInt, acc: &mut [BigInt]) {
        if let Some(i) = self.base {
            acc[i] += coeff;
        }
        for (child, e) in &self.children {
            child.expand_into(&(coeff * e), acc);
        }
    }
}

/// Search limits for smoothing and descent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentBudget {
    /// Randomizations tried by `hm_smooth`.
    pub hm_trials: u64,
    /// Lattice candidates tried per descent step.
    pub step_trials: u64,
    /// Upper bound on the total number of tree nodes per class.
    pub max_nodes: usize,
    /// Degree bound on `lambda`, `mu`; `None` uses the genus.
    pub lattice_degree: Option<usize>,
}

impl Default for DescentBudget {
    fn default() -> Self {
        DescentBudget {
            hm_trials: 20_000,
            step_trials: 200_000,
            max_nodes: 10_000,
            lattice_degree: None,
        }
    }
}

/// Output of `hm_smooth`: `[D] + sum r_i [P_i] = sum e_Q [Q]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HmResult {
    pub randomizer: Vec<(usize, i64)>,
    pub places: Vec<(Place, i64)>,
    pub trials: u64,
}

/// Add random `{-1, 0, 1}` combinations of factor-base places to `class`
/// until the reduced representative splits into places of degree at
/// most `bound` and inertia degree one.
pub fn hm_smooth(
    jac: &Jacobian,
    fb: &FactorBase,
    class: &Ideal,
    bound: usize,
    budget: u64,
    rng: &mut dyn RngCore,
) -> Result<HmResult> {
    let g = jac.model().genus();
    let subset = fb.len().min(2 * g.max(1));
    let mut indices: Vec<usize> = (0..fb.len()).collect();
    let mut randomizer: Vec<(usize, i64)> = Vec::new();
    for trial in 0..budget {
        let shifted = if randomizer.is_empty() {
            jac.reduce(class)
        } else {
            let div = Divisor::from_terms(randomizer.iter().map(|&(i, e)| (fb.place(i).clone(), e)));
            jac.add(class, &jac.class_of(&div)?)
        };
        if let Some(div) = jac.decompose(&shifted)? {
            if div.iter().all(|(p, _)| p.degree() <= bound) {
                return Ok(HmResult {
                    randomizer,
                    places: div.iter().map(|(p, e)| (p.clone(), e)).collect(),
                    trials: trial + 1,
                });
            }
        }
        indices.partial_shuffle(rng, subset);
        randomizer = indices[..subset]
            .iter()
            .map(|&i| (i, rng.gen_range(-1i64..=1)))
            .filter(|&(_, e)| e != 0)
            .collect();
        randomizer.sort();
    }
    Err(Error::Budget(format!(
        "no {bound}-smooth representative after {budget} randomizations"
    )))
}

fn shell_size(q: u64, s: usize) -> u128 {
    // pairs (lambda, mu), mu monic, max(deg lambda, deg mu) = s
    let q = q as u128;
    let upto = |s: i64| -> u128 {
        if s < 0 {
            return 0;
        }
        let lam = q.pow(s as u32 + 1);
        let mu = (q.pow(s as u32 + 1) - 1) / (q - 1);
        lam * mu
    };
    upto(s as i64) - upto(s as i64 - 1)
}

const MATERIALIZE_LIMIT: u128 = 1 << 16;

/// Candidates `(lambda, mu)` of one shell in random order.
struct Shell<'a> {
    ring: &'a FqRing,
    q: u64,
    s: usize,
    size: u128,
    listed: Option<std::vec::IntoIter<(u64, usize, u64)>>,
    seen: HashSet<(u64, usize, u64)>,
}

impl<'a> Shell<'a> {
    fn new(ring: &'a FqRing, q: u64, s: usize, rng: &mut dyn RngCore) -> Self {
        let size = shell_size(q, s);
        let listed = (size <= MATERIALIZE_LIMIT).then(|| {
            let mut all = Vec::with_capacity(size as usize);
            let lam_count = q.pow(s as u32 + 1);
            for mu_deg in 0..=s {
                for mu_idx in 0..q.pow(mu_deg as u32) {
                    for lam in 0..lam_count {
                        if mu_deg == s || lam >= q.pow(s as u32) {
                            all.push((lam, mu_deg, mu_idx));
                        }
                    }
                }
            }
            all.shuffle(rng);
            all.into_iter()
        });
        Shell {
            ring,
            q,
            s,
            size,
            listed,
            seen: HashSet::new(),
        }
    }

    fn next(&mut self, rng: &mut dyn RngCore) -> Option<(FqPoly, FqPoly)> {
        let (lam, mu_deg, mu_idx) = match &mut self.listed {
            Some(it) => it.next()?,
            None => {
                if self.seen.len() as u128 >= self.size {
                    return None;
                }
                loop {
                    let mu_deg = rng.gen_range(0..=self.s);
                    let lam = rng.gen_range(0..self.q.pow(self.s as u32 + 1));
                    let mu_idx = rng.gen_range(0..self.q.pow(mu_deg as u32));
                    let in_shell = mu_deg == self.s || lam >= self.q.pow(self.s as u32);
                    if in_shell && self.seen.insert((lam, mu_deg, mu_idx)) {
                        break (lam, mu_deg, mu_idx);
                    }
                }
            }
        };
        let f = self.ring.field();
        let mut digits = lam;
        let lambda = self.ring.from_coeffs(
            (0..=self.s)
                .map(|_| {
                    let c = f.element(digits % self.q);
                    digits /= self.q;
                    c
                })
                .collect(),
        );
        let mu = self.ring.monic_from_index(mu_deg, mu_idx);
        Some((lambda, mu))
    }
}

/// Witness found by a lattice search.
#[derive(Clone, Debug)]
pub struct LatticeHit {
    pub phi: FunctionPhi,
    /// Places of `div(phi)` other than `Q`, with valuations.
    pub others: Vec<(Place, i64)>,
    pub trials: u64,
}

/// Search `lambda u + mu (Y - v)` with `deg lambda, deg mu <= delta` in
/// shells of increasing degree for a function vanishing to order one at
/// `Q` whose other zeros all have degree at most `target`.
pub fn lattice_search(
    model: &CurveModel,
    place: &Place,
    target: usize,
    delta: usize,
    budget: u64,
    rng: &mut dyn RngCore,
) -> Result<LatticeHit> {
    let (u, v) = place
        .uv()
        .ok_or_else(|| Error::domain("cannot descend the place at infinity"))?;
    let k = place.degree();
    if k <= target {
        return Err(Error::domain(format!("place of degree {k} is already below target {target}")));
    }
    if budget == 0 {
        return Err(Error::Budget("descent step budget is zero".into()));
    }
    let r = model.ring();
    let mut trials = 0u64;
    for s in 0..=delta {
        let mut shell = Shell::new(r, model.q(), s, rng);
        while let Some((lambda, mu)) = shell.next(rng) {
            let a = r.sub(&r.mul(&lambda, u), &r.mul(&mu, v));
            if !r.is_one(&r.gcd(&a, &mu)) {
                continue;
            }
            trials += 1;
            let phi = FunctionPhi { a, b: mu };
            if let Some(places) = phi_places(model, &phi, k, rng)? {
                let own = places.iter().find(|(p, _)| p == place).map_or(0, |&(_, e)| e);
                let others: Vec<(Place, i64)> = places.into_iter().filter(|(p, _)| p != place).collect();
                if own == 1 && others.iter().all(|(p, _)| p.degree() <= target) {
                    return Ok(LatticeHit { phi, others, trials });
                }
            }
            if trials >= budget {
                return Err(Error::Budget(format!(
                    "descent of a degree-{k} place to degree {target}: no witness in {trials} candidates; increase the lattice degree or budget"
                )));
            }
        }
    }
    Err(Error::Budget(format!(
        "descent of a degree-{k} place to degree {target}: lattice exhausted at degree {delta} after {trials} candidates; increase the lattice degree"
    )))
}

/// One level of descent: `Q` rewritten over places of degree at most
/// `target`. Children are left unexpanded (no factor-base indices).
pub fn descent_step(
    model: &CurveModel,
    fb: &FactorBase,
    place: &Place,
    target: usize,
    delta: usize,
    budget: u64,
    rng: &mut dyn RngCore,
) -> Result<DescentNode> {
    if let Some(i) = fb.index_of(place) {
        return Ok(DescentNode::leaf(place.clone(), 0, i));
    }
    let hit = lattice_search(model, place, target, delta, budget, rng)?;
    let children = hit
        .others
        .into_iter()
        .map(|(p, e)| {
            let base = fb.index_of(&p);
            (
                DescentNode {
                    place: p,
                    level: 1,
                    base,
                    witness: None,
                    children: Vec::new(),
                },
                -e,
            )
        })
        .collect();
    Ok(DescentNode {
        place: place.clone(),
        level: 0,
        base: None,
        witness: Some(hit.phi),
        children,
    })
}

/// Descent straight into the factor base.
pub fn final_descent_step(
    model: &CurveModel,
    fb: &FactorBase,
    place: &Place,
    delta: usize,
    budget: u64,
    rng: &mut dyn RngCore,
) -> Result<DescentNode> {
    descent_step(model, fb, place, fb.bound(), delta, budget, rng)
}

/// Full tree for `Q` following the schedule.
pub fn descend(
    model: &CurveModel,
    fb: &FactorBase,
    schedule: &DescentSchedule,
    budget: &DescentBudget,
    place: &Place,
    level: usize,
    seed: u64,
) -> Result<DescentNode> {
    if let Some(i) = fb.index_of(place) {
        return Ok(DescentNode::leaf(place.clone(), level, i));
    }
    let k = place.degree();
    if k <= fb.bound() {
        return Err(Error::domain("place below the factor-base bound is not in the factor base (ramified)"));
    }
    if level > schedule.bounds.len() {
        return Err(Error::Budget("descent tree deeper than the schedule".into()));
    }
    let target = schedule.target_below(k);
    let delta = budget.lattice_degree.unwrap_or(model.genus().max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hit = lattice_search(model, place, target, delta, budget.step_trials, &mut rng)?;
    let seeds: Vec<u64> = hit.others.iter().map(|_| rng.gen()).collect();
    let children: Vec<(DescentNode, i64)> = hit
        .others
        .par_iter()
        .zip(seeds.par_iter())
        .map(|((p, e), &s)| Ok((descend(model, fb, schedule, budget, p, level + 1, s)?, -e)))
        .collect::<Result<_>>()?;
    let node = DescentNode {
        place: place.clone(),
        level,
        base: None,
        witness: Some(hit.phi),
        children,
    };
    if node.node_count() > budget.max_nodes {
        return Err(Error::Budget(format!(
            "descent tree exceeds {} nodes",
            budget.max_nodes
        )));
    }
    Ok(node)
}

/// Check one node and its subtree without searching.
pub fn verify_node(model: &CurveModel, fb: &FactorBase, node: &DescentNode) -> Result<()> {
    let bad = |m: String| Err(Error::integrity(m));
    if let Some(i) = node.base {
        if fb.index_of(&node.place) != Some(i) || !node.children.is_empty() {
            return bad(format!("leaf does not match factor-base entry {i}"));
        }
        return Ok(());
    }
    let Some(phi) = &node.witness else {
        return bad("inner node without witness".into());
    };
    let k = node.place.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let Some(places) = phi_places(model, phi, k, &mut rng)? else {
        return bad("witness divisor is not smooth".into());
    };
    let mut expected: Vec<(Place, i64)> = node
        .children
        .iter()
        .map(|(c, e)| (c.place.clone(), -e))
        .chain(std::iter::once((node.place.clone(), 1)))
        .collect();
    expected.sort();
    if places != expected {
        return bad("witness divisor differs from the node and its children".into());
    }
    for (child, _) in &node.children {
        if child.place.degree() >= k || child.level != node.level + 1 {
            return bad("child does not descend".into());
        }
        verify_node(model, fb, child)?;
    }
    Ok(())
}

/// Smoothing plus descent of one class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTranscript {
    pub class: Ideal,
    pub randomizer: Vec<(usize, i64)>,
    pub terms: Vec<(DescentNode, i64)>,
    pub hm_trials: u64,
}

impl ClassTranscript {
    /// Exponent vector over the factor base representing the class.
    pub fn vector(&self, t: usize) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); t];
        for (node, e) in &self.terms {
            node.expand_into(&BigInt::from(*e), &mut acc);
        }
        for &(i, r) in &self.randomizer {
            acc[i] -= r;
        }
        acc
    }

    pub fn node_count(&self) -> usize {
        self.terms.iter().map(|(n, _)| n.node_count()).sum()
    }
}

/// Express a class over the factor base.
pub fn smooth_class(
    jac: &Jacobian,
    fb: &FactorBase,
    schedule: &DescentSchedule,
    budget: &DescentBudget,
    class: &Ideal,
    seed: u64,
) -> Result<ClassTranscript> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hm = hm_smooth(jac, fb, class, schedule.hm_bound(), budget.hm_trials, &mut rng)?;
    let seeds: Vec<u64> = hm.places.iter().map(|_| rng.gen()).collect();
    let model = jac.model();
    let terms: Vec<(DescentNode, i64)> = hm
        .places
        .par_iter()
        .zip(seeds.par_iter())
        .map(|((p, e), &s)| Ok((descend(model, fb, schedule, budget, p, 0, s)?, *e)))
        .collect::<Result<_>>()?;
    let out = ClassTranscript {
        class: jac.reduce(class),
        randomizer: hm.randomizer,
        terms,
        hm_trials: hm.trials,
    };
    if out.node_count() > budget.max_nodes {
        return Err(Error::Budget(format!("descent trees exceed {} nodes", budget.max_nodes)));
    }
    Ok(out)
}

/// Check the smoothing relation and every descent node of a class.
pub fn verify_class(jac: &Jacobian, fb: &FactorBase, tr: &ClassTranscript) -> Result<()> {
    for &(i, _) in &tr.randomizer {
        if i >= fb.len() {
            return Err(Error::integrity("randomizer index out of range"));
        }
    }
    let rand_div = Divisor::from_terms(tr.randomizer.iter().map(|&(i, e)| (fb.place(i).clone(), e)));
    let lhs = jac.add(&tr.class, &jac.class_of(&rand_div)?);
    let top = Divisor::from_terms(tr.terms.iter().map(|(n, e)| (n.place.clone(), *e)));
    if !top.is_effective() || lhs != jac.ideal_of_effective(&top)? {
        return Err(Error::integrity("smoothing relation does not hold"));
    }
    for (node, _) in &tr.terms {
        if node.level != 0 {
            return Err(Error::integrity("top-level node with nonzero level"));
        }
        verify_node(jac.model(), fb, node)?;
    }
    Ok(())
}

/// Factor base and Smith form from the group-structure computation.
pub struct Precomputation<'a> {
    pub jac: &'a Jacobian,
    pub fb: &'a FactorBase,
    pub snf: &'a SnfResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DlogTranscript {
    pub d1: ClassTranscript,
    pub d2: ClassTranscript,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub x: String,
    pub order: String,
}

#[derive(Clone, Debug)]
pub struct DlogOutcome {
    pub x: BigInt,
    pub order: BigInt,
    pub transcript: DlogTranscript,
}

/// Order of the element with the given coordinates.
pub fn coordinate_order(alpha: &[BigInt], factors: &[BigInt]) -> BigInt {
    alpha
        .iter()
        .zip(factors)
        .fold(BigInt::one(), |acc, (a, h)| acc.lcm(&(h / a.gcd(h))))
}

fn solve_and_check(pre: &Precomputation, d1: &Ideal, d2: &Ideal, alpha: &[BigInt], beta: &[BigInt]) -> Result<(BigInt, BigInt)> {
    let order = coordinate_order(alpha, &pre.snf.factors);
    let x = solve_cyclic_dlog(alpha, beta, &pre.snf.factors)
        .ok_or_else(|| Error::domain("D2 is not in the subgroup generated by D1"))?;
    if pre.jac.mul_scalar(d1, &x) != pre.jac.reduce(d2) {
        return Err(Error::integrity(format!("x = {x} fails the check x * D1 = D2")));
    }
    if !pre.jac.mul_scalar(d1, &order).is_unit() {
        return Err(Error::integrity("coordinate order does not annihilate D1"));
    }
    Ok((x, order))
}

/// `x` with `x * D1 = D2`, verified in the Jacobian before returning.
pub fn discrete_log(
    pre: &Precomputation,
    d1: &Ideal,
    d2: &Ideal,
    schedule: &DescentSchedule,
    budget: &DescentBudget,
    seed: u64,
) -> Result<DlogOutcome> {
    pre.jac.validate(d1, false)?;
    pre.jac.validate(d2, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s1, s2) = (rng.gen::<u64>(), rng.gen::<u64>());
    let t1 = smooth_class(pre.jac, pre.fb, schedule, budget, d1, s1)?;
    let t2 = smooth_class(pre.jac, pre.fb, schedule, budget, d2, s2)?;
    let alpha = pre.snf.group_coordinates(&t1.vector(pre.fb.len()))?;
    let beta = pre.snf.group_coordinates(&t2.vector(pre.fb.len()))?;
    let (x, order) = solve_and_check(pre, d1, d2, &alpha, &beta)?;
    let s = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect();
    Ok(DlogOutcome {
        transcript: DlogTranscript {
            d1: t1,
            d2: t2,
            alpha: s(&alpha),
            beta: s(&beta),
            x: x.to_string(),
            order: order.to_string(),
        },
        x,
        order,
    })
}

/// Replay a transcript: every witness, the smoothing relations, the
/// coordinates and the final check, with no search.
pub fn verify_transcript(pre: &Precomputation, tr: &DlogTranscript) -> Result<BigInt> {
    verify_class(pre.jac, pre.fb, &tr.d1)?;
    verify_class(pre.jac, pre.fb, &tr.d2)?;
    let alpha = pre.snf.group_coordinates(&tr.d1.vector(pre.fb.len()))?;
    let beta = pre.snf.group_coordinates(&tr.d2.vector(pre.fb.len()))?;
    let (x, order) = solve_and_check(pre, &tr.d1.class, &tr.d2.class, &alpha, &beta)?;
    if x.to_string() != tr.x || order.to_string() != tr.order {
        return Err(Error::integrity("recorded logarithm differs from the replayed one"));
    }
    Ok(x)
}
