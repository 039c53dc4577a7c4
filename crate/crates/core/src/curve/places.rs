use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CurveModel;
use crate::algebra::{FqPoly, PolyRing, ResidueField};
use crate::error::{Error, Result};

/// A place of the function field. Affine places of inertia degree one
/// over `F_q[X]` are `(u, Y - v)` with `u` monic irreducible and
/// `deg v < deg u`; the C_ab model has a single place at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Place {
    Affine { u: FqPoly, v: FqPoly },
    Infinite,
}

impl Place {
    pub fn affine(u: FqPoly, v: FqPoly) -> Self {
        Place::Affine { u, v }
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Affine { u, .. } => u.degree().unwrap_or(0),
            Place::Infinite => 1,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }

    pub fn uv(&self) -> Option<(&FqPoly, &FqPoly)> {
        match self {
            Place::Affine { u, v } => Some((u, v)),
            Place::Infinite => None,
        }
    }
}

/// Finite formal sum of places with nonzero integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Place, i64)>) -> Self {
        let mut d = Self::zero();
        for (p, e) in terms {
            d.add_term(p, e);
        }
        d
    }

    pub fn add_term(&mut self, place: Place, e: i64) {
        let entry = self.terms.entry(place.clone()).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.terms.remove(&place);
        }
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, e) in &other.terms {
            d.add_term(p.clone(), *e);
        }
        d
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_terms(self.terms.iter().map(|(p, e)| (p.clone(), e * k)))
    }

    pub fn neg(&self) -> Divisor {
        self.scale(-1)
    }

    pub fn get(&self, p: &Place) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, e)| (p, *e))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.iter().map(|(p, e)| e * p.degree() as i64).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&e| e > 0)
    }

    /// `D - deg(D) * infinity`.
    pub fn to_degree_zero(&self) -> Divisor {
        let affine = Divisor::from_terms(
            self.iter()
                .filter(|(p, _)| !p.is_infinite())
                .map(|(p, e)| (p.clone(), e)),
        );
        let mut d = affine.clone();
        d.add_term(Place::Infinite, -affine.degree());
        d
    }
}

/// Unramified inertia-one places of degree at most `bound`, in
/// `(deg u, u, v)` order, plus the ramified ones that were skipped.
pub fn places_up_to(model: &CurveModel, bound: usize) -> (Vec<Place>, Vec<Place>) {
    let ring = model.ring();
    let us: Vec<FqPoly> = ring.irreducibles_up_to(bound).collect();
    let per_u: Vec<(Vec<Place>, Vec<Place>)> = us
        .par_iter()
        .map(|u| {
            let k = ResidueField::new(ring, u).expect("irreducible modulus");
            let over = PolyRing::new(k.clone());
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let mut good = Vec::new();
            let mut bad = Vec::new();
            for v in over.roots(&model.poly().mod_u(&k), &mut rng) {
                let place = Place::affine(u.clone(), v.clone());
                if model.is_unramified_at(u, &v) {
                    good.push(place);
                } else {
                    bad.push(place);
                }
            }
            (good, bad)
        })
        .collect();
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for (g, b) in per_u {
        good.extend(g);
        bad.extend(b);
    }
    good.sort();
    bad.sort();
    (good, bad)
}

/// One line of a factor-base export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBaseLine {
    pub u: FqPoly,
    pub v: FqPoly,
    pub deg: usize,
}

/// The affine places of degree at most `B` used as relation columns.
#[derive(Clone, Debug)]
pub struct FactorBase {
    bound: usize,
    places: Vec<Place>,
    index: HashMap<Place, usize>,
    ramified: Vec<Place>,
}

impl FactorBase {
    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number `t` of affine members.
    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn place(&self, i: usize) -> &Place {
        &self.places[i]
    }

    pub fn index_of(&self, p: &Place) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Ramified places of degree at most `B`, excluded from the base.
    pub fn ramified(&self) -> &[Place] {
        &self.ramified
    }

    pub fn lines(&self) -> Vec<FactorBaseLine> {
        self.places
            .iter()
            .filter_map(|p| p.uv())
            .map(|(u, v)| FactorBaseLine {
                u: u.clone(),
                v: v.clone(),
                deg: u.degree().unwrap_or(0),
            })
            .collect()
    }

    /// Rebuild from exported lines, checking each against the curve.
    pub fn from_lines(model: &CurveModel, bound: usize, lines: &[FactorBaseLine]) -> Result<Self> {
        let ring = model.ring();
        let mut places = Vec::with_capacity(lines.len());
        for l in lines {
            if l.deg != l.u.degree().unwrap_or(0)
                || l.deg > bound
                || !ring.is_monic(&l.u)
                || !ring.is_irreducible(&l.u)
                || l.v.deg() >= l.u.deg()
                || !model.vanishes_at(&l.u, &l.v)
                || !model.is_unramified_at(&l.u, &l.v)
            {
                return Err(Error::integrity(format!(
                    "factor base line {:?} is not an unramified place of degree <= {bound}",
                    l
                )));
            }
            places.push(Place::affine(l.u.clone(), l.v.clone()));
        }
        let mut fb = Self::assemble(bound, places, Vec::new());
        fb.ramified = places_up_to(model, bound).1;
        Ok(fb)
    }

    fn assemble(bound: usize, mut places: Vec<Place>, ramified: Vec<Place>) -> Self {
        places.sort();
        places.dedup();
        let index = places.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        FactorBase {
            bound,
            places,
            index,
            ramified,
        }
    }
}

/// All unramified inertia-one affine places of degree at most `bound`.
pub fn build_factor_base(model: &CurveModel, bound: usize) -> Result<FactorBase> {
    if bound == 0 {
        return Err(Error::usage("factor base bound must be at least 1"));
    }
    if model.q().checked_pow(bound as u32).is_none_or(|v| v > 1 << 24) {
        return Err(Error::Resource(format!(
            "factor base bound {bound} is too large for q = {}",
            model.q()
        )));
    }
    let (places, ramified) = places_up_to(model, bound);
    for p in &ramified {
        log::info!("excluding ramified place {:?} from the factor base", p);
    }
    Ok(FactorBase::assemble(bound, places, ramified))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{validate_curve, CurveSpec};

    #[test]
    fn factor_base_degree_one() {
        let c = validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap();
        let fb = build_factor_base(&c, 1).unwrap();
        // N_1 = 6 = 5 affine rational points + infinity
        assert_eq!(fb.len(), 5);
        assert!(fb.ramified().is_empty());
        for w in fb.places().windows(2) {
            assert!(w[0] < w[1]);
        }
        for (i, p) in fb.places().iter().enumerate() {
            assert_eq!(fb.index_of(p), Some(i));
            let (u, v) = p.uv().unwrap();
            assert!(c.vanishes_at(u, v));
        }
        let rebuilt = FactorBase::from_lines(&c, 1, &fb.lines()).unwrap();
        assert_eq!(rebuilt.places(), fb.places());
    }

    #[test]
    fn ramified_places_are_excluded() {
        // Y^2 = X^3 + 2 over F_5: X = 2 is a root, so (X - 2, Y) ramifies
        let c = validate_curve(&CurveSpec::prime(5, 2, 3, &[(3, 0, 4), (0, 0, 3)])).unwrap();
        let fb = build_factor_base(&c, 1).unwrap();
        assert_eq!(fb.ramified().len(), 1);
        assert_eq!(fb.len() + fb.ramified().len() + 1, c.count_points(1, 1 << 20).unwrap() as usize);
    }

    #[test]
    fn divisor_arithmetic() {
        let ring = crate::algebra::PolyRing::new(crate::algebra::Fq::prime(5).unwrap());
        let p = Place::affine(ring.from_coeffs(vec![0, 1]), ring.zero());
        let q = Place::affine(ring.from_coeffs(vec![1, 0, 1]), ring.from_coeffs(vec![2]));
        let d = Divisor::from_terms([(p.clone(), 2), (q.clone(), -1)]);
        assert_eq!(d.degree(), 0);
        assert!(d.add(&d.neg()).is_zero());
        let z = Divisor::from_terms([(q, 3)]).to_degree_zero();
        assert_eq!(z.degree(), 0);
        assert_eq!(z.get(&Place::Infinite), -6);
    }
}
