//! The residue field `F_q[X]/(u)` for a monic irreducible `u`.

use rand::RngCore;

use super::factor::IndexedField;
use super::field::{Field, Fq};
use super::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

pub type FqPoly = Poly<u32>;

#[derive(Clone, Debug)]
pub struct ResidueField {
    ring: PolyRing<Fq>,
    modulus: FqPoly,
    degree: usize,
    order: u64,
}

impl ResidueField {
    pub fn new(ring: &PolyRing<Fq>, modulus: &FqPoly) -> Result<Self> {
        let degree = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::domain("residue field modulus must be nonconstant"))?;
        if !ring.is_monic(modulus) {
            return Err(Error::domain("residue field modulus must be monic"));
        }
        let order = (ring.field().order())
            .checked_pow(degree as u32)
            .ok_or_else(|| Error::Resource(format!("residue field of degree {degree} too large")))?;
        Ok(ResidueField {
            ring: ring.clone(),
            modulus: modulus.clone(),
            degree,
            order,
        })
    }

    pub fn modulus(&self) -> &FqPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_ring(&self) -> &PolyRing<Fq> {
        &self.ring
    }

    pub fn reduce(&self, a: &FqPoly) -> FqPoly {
        self.ring.rem(a, &self.modulus)
    }
}

impl Field for ResidueField {
    type Elem = FqPoly;

    fn zero(&self) -> FqPoly {
        self.ring.zero()
    }

    fn one(&self) -> FqPoly {
        self.ring.one()
    }

    fn is_zero(&self, a: &FqPoly) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.ring.add(a, b)
    }

    fn sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.ring.sub(a, b)
    }

    fn neg(&self, a: &FqPoly) -> FqPoly {
        self.ring.neg(a)
    }

    fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.ring.mulmod(a, b, &self.modulus)
    }

    fn inv(&self, a: &FqPoly) -> Option<FqPoly> {
        if a.is_zero() {
            return None;
        }
        self.ring.inv_mod(a, &self.modulus)
    }

    fn from_int(&self, k: i64) -> FqPoly {
        self.ring.constant(self.ring.field().from_int(k))
    }

    fn characteristic(&self) -> u64 {
        self.ring.field().characteristic()
    }

    fn order(&self) -> u64 {
        self.order
    }

    fn random(&self, rng: &mut dyn RngCore) -> FqPoly {
        self.ring.random(self.degree - 1, rng)
    }
}

impl IndexedField for ResidueField {
    fn element(&self, mut idx: u64) -> FqPoly {
        let q = self.ring.field().order();
        let coeffs = (0..self.degree)
            .map(|_| {
                let c = (idx % q) as u32;
                idx /= q;
                c
            })
            .collect();
        self.ring.from_coeffs(coeffs)
    }

    fn index_of(&self, e: &FqPoly) -> u64 {
        let q = self.ring.field().order();
        e.coeffs().iter().rev().fold(0, |acc, &c| acc * q + c as u64)
    }
}
